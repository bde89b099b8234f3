/*
 * Copyright 2026 The FermiFisher Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fermifisher/cli.hpp"

#include "fermifisher/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace fermifisher::cli {

using Eigen::Index;
using Eigen::MatrixXd;

namespace {

std::string child(const std::string &path, const std::string &key) { return path + "/" + key; }
std::string child(const std::string &path, std::size_t index) { return path + "/" + std::to_string(index); }

const Json &require(const Json &j, const char *key, const std::string &path) {
    if (!j.contains(key)) throw ConfigError(child(path, key), "required field is missing");
    return j.at(key);
}

void reject_unknown(const Json &j, const std::set<std::string> &known, const std::string &path) {
    for (const auto &item : j.items())
        if (!known.contains(item.key())) throw ConfigError(child(path, item.key()), "unknown field");
}

double get_number(const Json &j, const std::string &path) {
    if (!j.is_number()) throw ConfigError(path, "must be a number");
    return j.get<double>();
}

std::string get_string(const Json &j, const std::string &path) {
    if (!j.is_string()) throw ConfigError(path, "must be a string");
    return j.get<std::string>();
}

MatrixXd get_matrix(const Json &j, const std::string &path) {
    // Either [[...], ...] or {"modes": n, "rep": [[...], ...]}.
    const Json &rows = j.is_object() ? require(j, "rep", path) : j;
    const std::string rows_path = j.is_object() ? child(path, "rep") : path;
    if (!rows.is_array() || rows.empty()) throw ConfigError(rows_path, "must be a non-empty array of rows");
    const std::size_t size = rows.size();
    MatrixXd m(size, size);
    for (std::size_t r = 0; r < size; ++r) {
        if (!rows[r].is_array() || rows[r].size() != size)
            throw ConfigError(child(rows_path, r), "must be a row of length " + std::to_string(size));
        for (std::size_t c = 0; c < size; ++c) m(r, c) = get_number(rows[r][c], child(child(rows_path, r), c));
    }
    if (j.is_object() && j.contains("modes")) {
        const Json &modes = j.at("modes");
        if (!modes.is_number_integer() || 2 * modes.get<long long>() != static_cast<long long>(size))
            throw ConfigError(child(path, "modes"), "does not match the size of rep");
    }
    return m;
}

RealAntisym get_antisym(const Json &j, const std::string &path) {
    const MatrixXd m = get_matrix(j, path);
    if (m.rows() % 2 != 0) throw ConfigError(path, "dimension must be even");
    if (max_abs(m + m.transpose()) > 1e-12 * (1.0 + max_abs(m)))
        throw ConfigError(path, "matrix is not antisymmetric");
    return RealAntisym(m);
}

std::vector<double> expand_axis(const Json &axis, const std::string &path) {
    if (!axis.is_object()) throw ConfigError(path, "grid axis must be an object {min, max, steps}");
    reject_unknown(axis, {"min", "max", "steps"}, path);
    const double lo = get_number(require(axis, "min", path), child(path, "min"));
    const double hi = get_number(require(axis, "max", path), child(path, "max"));
    const Json &steps_json = require(axis, "steps", path);
    if (!steps_json.is_number_integer() || steps_json.get<long long>() < 0)
        throw ConfigError(child(path, "steps"), "must be a non-negative integer");
    const long long steps = steps_json.get<long long>();
    if (hi < lo) throw ConfigError(path, "max must not be below min");
    std::vector<double> values;
    for (long long i = 0; i < steps; ++i)
        values.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    return values;
}

std::vector<std::vector<double>> parse_grid(const Json &j, std::size_t params, const std::string &path) {
    std::vector<std::vector<double>> points;
    if (j.is_object()) {
        reject_unknown(j, {"points"}, path);
        const Json &list = require(j, "points", path);
        if (!list.is_array()) throw ConfigError(child(path, "points"), "must be an array of points");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = child(child(path, "points"), i);
            if (!list[i].is_array() || list[i].size() != params)
                throw ConfigError(p, "point must have " + std::to_string(params) + " coordinates");
            std::vector<double> point;
            for (std::size_t c = 0; c < params; ++c) point.push_back(get_number(list[i][c], child(p, c)));
            points.push_back(std::move(point));
        }
    } else if (j.is_array()) {
        if (j.size() != params)
            throw ConfigError(path, "expected one axis per parameter (" + std::to_string(params) + ")");
        std::vector<std::vector<double>> axes;
        for (std::size_t a = 0; a < params; ++a) axes.push_back(expand_axis(j[a], child(path, a)));
        std::size_t total = 1;
        for (const auto &axis : axes) total *= axis.size();
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::vector<double> point(params);
            std::size_t rest = flat;
            for (std::size_t a = params; a-- > 0;) {
                point[a] = axes[a][rest % axes[a].size()];
                rest /= axes[a].size();
            }
            points.push_back(std::move(point));
        }
    } else {
        throw ConfigError(path, "must be an array of axes or an object with \"points\"");
    }
    if (points.empty()) throw ConfigError(path, "grid is empty");
    return points;
}

std::string tag(std::string_view prefix, Index i, Index j) {
    return std::string(prefix) + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

std::string tag_separated(std::string_view prefix, Index i, Index j, Index d) {
    // J_1_10 instead of the ambiguous J_110 once indices reach two digits.
    if (d < 10) return tag(prefix, i, j);
    return std::string(prefix) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

bool write_file(const std::string &path, const std::string &content, std::ostream &err) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err << "error: cannot open " << path << " for writing\n";
        return false;
    }
    out << content;
    return static_cast<bool>(out);
}

Json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

models::StateFamily parse_family(const Json &j, const std::string &path) {
    if (!j.is_object()) throw ConfigError(path, "must be an object with a \"name\"");
    const std::string name = get_string(require(j, "name", path), child(path, "name"));
    try {
        if (name == "single_mode") {
            reject_unknown(j, {"name"}, path);
            return models::family_single_mode();
        }
        if (name == "thermal") {
            reject_unknown(j, {"name", "hamiltonian"}, path);
            return models::family_thermal(get_antisym(require(j, "hamiltonian", path), child(path, "hamiltonian")));
        }
        if (name == "rotation") {
            reject_unknown(j, {"name", "base", "generators"}, path);
            const std::string base_path = child(path, "base");
            RealAntisym base_rep = get_antisym(require(j, "base", path), base_path);
            std::optional<CorrelationMatrix> base;
            try {
                base.emplace(std::move(base_rep));
            } catch (const NonPhysicalState &e) {
                throw ConfigError(base_path, e.what());
            }
            const Json &gens = require(j, "generators", path);
            if (!gens.is_array() || gens.empty())
                throw ConfigError(child(path, "generators"), "must be a non-empty array of matrices");
            std::vector<RealAntisym> generators;
            for (std::size_t i = 0; i < gens.size(); ++i)
                generators.push_back(get_antisym(gens[i], child(child(path, "generators"), i)));
            return models::family_rotation(std::move(*base), std::move(generators));
        }
        if (name == "kitaev_chain") {
            reject_unknown(j, {"name", "sites", "boundary", "beta"}, path);
            const Json &sites = require(j, "sites", path);
            if (!sites.is_number_integer()) throw ConfigError(child(path, "sites"), "must be an integer");
            models::Boundary boundary = models::Boundary::open;
            if (j.contains("boundary")) {
                const std::string b = get_string(j.at("boundary"), child(path, "boundary"));
                if (b == "periodic") boundary = models::Boundary::periodic;
                else if (b != "open") throw ConfigError(child(path, "boundary"), "must be \"open\" or \"periodic\"");
            }
            const double beta = get_number(require(j, "beta", path), child(path, "beta"));
            return models::family_kitaev_chain(sites.get<int>(), boundary, beta);
        }
    } catch (const std::invalid_argument &e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(child(path, "name"), "unknown family \"" + name + "\"");
}

RunConfig parse_config(const Json &j) {
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    reject_unknown(j, {"family", "grid", "derivative", "cost_matrix", "outputs", "output_path", "format",
                       "singular_policy", "seed"},
                   "");
    RunConfig config{parse_family(require(j, "family", ""), "/family"), {}, {}, {}, {}, {}, {}, {}, {}};
    const std::size_t d = config.family.parameters();
    config.points = parse_grid(require(j, "grid", ""), d, "/grid");

    if (j.contains("derivative")) {
        const Json &der = j.at("derivative");
        if (!der.is_object()) throw ConfigError("/derivative", "must be an object");
        reject_unknown(der, {"method", "h", "richardson"}, "/derivative");
        const std::string method = get_string(require(der, "method", "/derivative"), "/derivative/method");
        if (method == "finite_diff") config.derivative.method = DerivativeMethod::finite_diff;
        else if (method != "analytic")
            throw ConfigError("/derivative/method", "must be \"analytic\" or \"finite_diff\"");
        if (der.contains("h")) {
            config.derivative.h = get_number(der.at("h"), "/derivative/h");
            if (!(config.derivative.h > 0.0)) throw ConfigError("/derivative/h", "must be positive");
        }
        if (der.contains("richardson")) {
            if (!der.at("richardson").is_boolean()) throw ConfigError("/derivative/richardson", "must be a boolean");
            config.derivative.richardson = der.at("richardson").get<bool>();
        }
    }

    for (std::size_t i = 0; i < config.points.size(); ++i) {
        const auto &point = config.points[i];
        if (!config.family.contains(point))
            throw ConfigError("/grid", "point " + std::to_string(i) + " lies outside the domain of " +
                                           config.family.name());
        if (config.derivative.method == DerivativeMethod::finite_diff) {
            const double reach = (config.derivative.richardson ? 2.0 : 1.0) * config.derivative.h;
            for (std::size_t mu = 0; mu < d; ++mu)
                for (double sign : {-1.0, 1.0}) {
                    std::vector<double> shifted = point;
                    shifted[mu] += sign * reach;
                    if (!config.family.contains(shifted))
                        throw ConfigError("/derivative", "finite-difference stencil of point " + std::to_string(i) +
                                                             " leaves the domain");
                }
        }
    }

    const Json &outputs = require(j, "outputs", "");
    if (!outputs.is_array() || outputs.empty())
        throw ConfigError("/outputs", "must be a non-empty array of quantity names");
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const std::string q = get_string(outputs[i], child("/outputs", i));
        if (q == "qfim") config.outputs.qfim = true;
        else if (q == "uhlmann") config.outputs.uhlmann = true;
        else if (q == "purity") config.outputs.purity = true;
        else if (q == "bound") config.outputs.bound = true;
        else if (q == "sld_dump") config.outputs.sld_dump = true;
        else if (q == "diagnostics") config.outputs.diagnostics = true;
        else throw ConfigError(child("/outputs", i), "unknown quantity \"" + q + "\"");
    }

    if (j.contains("cost_matrix")) {
        const MatrixXd w = get_matrix(j.at("cost_matrix"), "/cost_matrix");
        if (w.rows() != static_cast<Index>(d))
            throw ConfigError("/cost_matrix", "must be " + std::to_string(d) + "x" + std::to_string(d));
        if (max_abs(w - w.transpose()) > 1e-12 * max_abs(w))
            throw ConfigError("/cost_matrix", "must be symmetric");
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(w, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0) throw ConfigError("/cost_matrix", "must be positive definite");
        config.cost_matrix = w;
    }
    if (config.outputs.bound && !config.cost_matrix)
        throw ConfigError("/cost_matrix", "required when \"bound\" is requested");

    config.output_path = get_string(require(j, "output_path", ""), "/output_path");
    if (config.output_path.empty()) throw ConfigError("/output_path", "must not be empty");
    if (j.contains("format")) {
        const std::string f = get_string(j.at("format"), "/format");
        if (f == "json") config.format = OutputFormat::json;
        else if (f != "csv") throw ConfigError("/format", "must be \"csv\" or \"json\"");
    }
    if (j.contains("singular_policy")) {
        const std::string p = get_string(j.at("singular_policy"), "/singular_policy");
        if (p == "strict") config.singular_policy = SingularPolicy::strict;
        else if (p != "zero") throw ConfigError("/singular_policy", "must be \"zero\" or \"strict\"");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("/seed", "must be a non-negative integer");
        config.seed = j.at("seed").get<std::uint64_t>();
    }
    return config;
}

RunConfig load_config(const std::string &path) { return parse_config(load_json_file(path)); }

std::vector<RealAntisym> tangents_at(const models::StateFamily &family, std::span<const double> point,
                                     const DerivativeSettings &derivative) {
    if (derivative.method == DerivativeMethod::analytic) return family.analytic_derivatives(point);
    std::vector<RealAntisym> out;
    for (std::size_t mu = 0; mu < family.parameters(); ++mu)
        out.push_back(models::finite_diff(family, point, mu, derivative.h, derivative.richardson));
    return out;
}

ReportRow compute_row(const RunConfig &config, std::span<const double> point) {
    const CorrelationMatrix g = config.family.evaluate(point);
    const std::vector<RealAntisym> tangents = tangents_at(config.family, point, config.derivative);
    QfimOptions options;
    options.solve.policy = config.singular_policy;
    const QfimResult result = qfim(g, tangents, options);

    ReportRow row;
    row.point.assign(point.begin(), point.end());
    row.j_matrix = result.j_matrix;
    row.u_matrix = result.u_matrix;
    row.purity = purity(g);
    if (config.outputs.bound) row.bound = cr_bound_scalar(result, *config.cost_matrix);
    row.compatibility = compatibility_check(result);
    for (int count : result.singular_pairs) row.singular_pairs += count;
    for (double r : result.residuals) row.residual = std::max(row.residual, r);
    return row;
}

unsigned threads_from_env() {
    const char *value = std::getenv("FERMIFISHER_THREADS");
    unsigned requested = 0;
    if (value != nullptr && *value != '\0') {
        char *end = nullptr;
        const unsigned long parsed = std::strtoul(value, &end, 10);
        if (end != nullptr && *end == '\0') requested = static_cast<unsigned>(parsed);
    }
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

std::vector<ReportRow> sweep(const RunConfig &config, unsigned threads) {
    const std::size_t count = config.points.size();
    std::vector<ReportRow> rows(count);
    std::vector<std::optional<std::string>> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                rows[i] = compute_row(config, config.points[i]);
            } catch (const std::exception &e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < count; ++i)
        if (errors[i]) throw PointFailure(i, config.points[i], *errors[i]);
    return rows;
}

std::string csv_header(const RunConfig &config) {
    const Index d = static_cast<Index>(config.family.parameters());
    std::vector<std::string> columns(config.family.parameter_names());
    if (config.outputs.qfim)
        for (Index i = 0; i < d; ++i)
            for (Index j = i; j < d; ++j) columns.push_back(tag_separated("J", i, j, d));
    if (config.outputs.uhlmann) {
        for (Index i = 0; i < d; ++i)
            for (Index j = i + 1; j < d; ++j) columns.push_back(tag_separated("U", i, j, d));
        columns.push_back("compatible");
        columns.push_back("max_abs_U");
    }
    if (config.outputs.purity) columns.push_back("purity");
    if (config.outputs.bound) columns.push_back("bound");
    if (config.outputs.diagnostics) {
        columns.push_back("singular_pairs");
        columns.push_back("residual");
    }
    std::string header;
    for (std::size_t c = 0; c < columns.size(); ++c) header += (c ? "," : "") + columns[c];
    return header;
}

std::string format_csv(const RunConfig &config, const std::vector<ReportRow> &rows) {
    std::string out = std::string("# schema=") + kReportSchema + "\n" + csv_header(config) + "\n";
    for (const auto &row : rows) {
        std::vector<std::string> cells;
        for (double v : row.point) cells.push_back(format_double(v));
        const Index d = row.j_matrix.rows();
        if (config.outputs.qfim)
            for (Index i = 0; i < d; ++i)
                for (Index j = i; j < d; ++j) cells.push_back(format_double(row.j_matrix(i, j)));
        if (config.outputs.uhlmann) {
            for (Index i = 0; i < d; ++i)
                for (Index j = i + 1; j < d; ++j) cells.push_back(format_double(row.u_matrix(i, j)));
            cells.push_back(row.compatibility.compatible ? "1" : "0");
            cells.push_back(format_double(row.compatibility.max_abs_u));
        }
        if (config.outputs.purity) cells.push_back(format_double(row.purity));
        if (config.outputs.bound) cells.push_back(format_double(*row.bound));
        if (config.outputs.diagnostics) {
            cells.push_back(std::to_string(row.singular_pairs));
            cells.push_back(format_double(row.residual));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) out += (c ? "," : "") + cells[c];
        out += "\n";
    }
    return out;
}

Json format_json(const RunConfig &config, const std::vector<ReportRow> &rows) {
    Json out = Json::array();
    const auto &names = config.family.parameter_names();
    for (const auto &row : rows) {
        Json entry{{"schema", kReportSchema}};
        Json point = Json::object();
        for (std::size_t i = 0; i < names.size(); ++i) point[names[i]] = row.point[i];
        entry["point"] = std::move(point);
        if (config.outputs.qfim) entry["J"] = to_json(row.j_matrix);
        if (config.outputs.uhlmann) {
            entry["U"] = to_json(row.u_matrix);
            entry["compatible"] = row.compatibility.compatible;
            entry["max_abs_U"] = row.compatibility.max_abs_u;
        }
        if (config.outputs.purity) entry["purity"] = row.purity;
        if (config.outputs.bound) entry["bound"] = *row.bound;
        if (config.outputs.diagnostics) {
            entry["singular_pairs"] = row.singular_pairs;
            entry["residual"] = row.residual;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

Json sld_dump(const RunConfig &config, std::span<const double> point, bool dense) {
    const CorrelationMatrix g = config.family.evaluate(point);
    const std::vector<RealAntisym> tangents = tangents_at(config.family, point, config.derivative);
    SolveOptions options;
    options.policy = config.singular_policy;
    const bool with_dense = dense && g.modes() <= oracle::kMaxModes;

    Json params = Json::array();
    for (std::size_t mu = 0; mu < tangents.size(); ++mu) {
        const SldQuadratic s = solve_k(g, tangents[mu], options);
        Json entry = to_json(s);
        entry["name"] = config.family.parameter_names()[mu];
        entry["tangent"] = to_json(tangents[mu]);
        entry["residual"] = assemble_residual(g, tangents[mu], s, options.eps_sing);
        if (with_dense) {
            // Projective measurement in this eigenbasis attains the QFI.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::dense_quadratic(s));
            const Eigen::VectorXd &values = es.eigenvalues();
            entry["dense_sld"] = Json{{"spectrum", std::vector<double>(values.begin(), values.end())},
                                      {"eigenbasis_real", to_json(MatrixXd(es.eigenvectors().real()))},
                                      {"eigenbasis_imag", to_json(MatrixXd(es.eigenvectors().imag()))}};
        }
        params.push_back(std::move(entry));
    }
    return Json{{"schema", kSldSchema},
                {"family", config.family.name()},
                {"parameter_names", config.family.parameter_names()},
                {"point", std::vector<double>(point.begin(), point.end())},
                {"correlation", to_json(g)},
                {"parameters", std::move(params)}};
}

int run(const RunConfig &config, const RunOptions &options, std::ostream &err) {
    const std::string output = options.output_path.value_or(config.output_path);
    const unsigned threads = options.threads.value_or(threads_from_env());
    std::vector<ReportRow> rows;
    try {
        rows = sweep(config, threads);
    } catch (const PointFailure &failure) {
        Json report{{"schema", kReportSchema},
                    {"error", failure.what()},
                    {"index", failure.index},
                    {"point", failure.point}};
        err << "error: numerical failure at grid point " << failure.index << ": " << failure.what() << "\n";
        write_file(output + ".error.json", report.dump(2) + "\n", err);
        return kNumericalFailure;
    }

    const std::string body =
        config.format == OutputFormat::csv ? format_csv(config, rows) : format_json(config, rows).dump(2) + "\n";
    if (!write_file(output, body, err)) return kUsageError;

    if (config.outputs.sld_dump) {
        Json dumps = Json::array();
        try {
            for (const auto &point : config.points) dumps.push_back(sld_dump(config, point, false));
        } catch (const std::exception &e) {
            err << "error: sld dump failed: " << e.what() << "\n";
            return kNumericalFailure;
        }
        if (!write_file(output + ".sld.json", dumps.dump(2) + "\n", err)) return kUsageError;
    }
    return kOk;
}

int run(const std::string &config_path, const RunOptions &options, std::ostream &err) {
    try {
        return run(load_config(config_path), options, err);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kUsageError;
    }
}

int sld_dump_command(const std::string &config_path, const std::vector<double> &point,
                     const std::optional<std::string> &output_path, bool dense, std::ostream &err) {
    std::optional<RunConfig> config;
    try {
        config.emplace(load_config(config_path));
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kUsageError;
    }
    if (!config->family.contains(point)) {
        err << "error: --point must have " << config->family.parameters()
            << " coordinates inside the family domain\n";
        return kUsageError;
    }
    Json dump;
    try {
        dump = sld_dump(*config, point, dense);
    } catch (const models::DomainError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception &e) {
        err << "error: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    const std::string output = output_path.value_or(config->output_path + ".sld.json");
    return write_file(output, dump.dump(2) + "\n", err) ? kOk : kUsageError;
}

}  // namespace fermifisher::cli
