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

/**
 * @brief Batch front-end: run configurations, parameter sweeps, oracle checks.
 *
 * Config files are JSON; see configs/run_config.schema.json for the layout.
 */

#pragma once

#include "fermifisher/models.hpp"
#include "fermifisher/serialize.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fermifisher::cli {

inline constexpr const char *kReportSchema = "fermifisher-report/1";
inline constexpr const char *kSldSchema = "fermifisher-sld/1";

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Invalid configuration; `path` is a JSON pointer to the offending value.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string &message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string &path() const { return path_; }

private:
    std::string path_;
};

enum class DerivativeMethod { analytic, finite_diff };
enum class OutputFormat { csv, json };

struct DerivativeSettings {
    DerivativeMethod method = DerivativeMethod::analytic;
    double h = 1e-4;
    bool richardson = true;
};

struct Outputs {
    bool qfim = false;
    bool uhlmann = false;
    bool purity = false;
    bool bound = false;
    bool sld_dump = false;
    bool diagnostics = false;
};

struct RunConfig {
    models::StateFamily family;
    /// Grid points in output order (last parameter varies fastest).
    std::vector<std::vector<double>> points;
    DerivativeSettings derivative;
    std::optional<Eigen::MatrixXd> cost_matrix;
    Outputs outputs;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    SingularPolicy singular_policy = SingularPolicy::zero;
    std::uint64_t seed = 0;
};

/// Throws ConfigError.
RunConfig parse_config(const Json &j);
RunConfig load_config(const std::string &path);
models::StateFamily parse_family(const Json &j, const std::string &path = "/family");

struct ReportRow {
    std::vector<double> point;
    Eigen::MatrixXd j_matrix;
    Eigen::MatrixXd u_matrix;
    double purity = 0.0;
    std::optional<double> bound;
    CompatibilityReport compatibility;
    int singular_pairs = 0;
    double residual = 0.0;
};

std::vector<RealAntisym> tangents_at(const models::StateFamily &family, std::span<const double> point,
                                     const DerivativeSettings &derivative);

ReportRow compute_row(const RunConfig &config, std::span<const double> point);

/// Number of worker threads from FERMIFISHER_THREADS (0 or unset: hardware).
unsigned threads_from_env();

/// Evaluates every grid point, possibly in parallel, in grid order.
/// Throws PointFailure for the first failing point in grid order.
std::vector<ReportRow> sweep(const RunConfig &config, unsigned threads);

struct PointFailure : std::runtime_error {
    PointFailure(std::size_t index, std::vector<double> point, const std::string &message)
        : std::runtime_error(message), index(index), point(std::move(point)) {}
    std::size_t index;
    std::vector<double> point;
};

std::string csv_header(const RunConfig &config);
std::string format_csv(const RunConfig &config, const std::vector<ReportRow> &rows);
Json format_json(const RunConfig &config, const std::vector<ReportRow> &rows);

/// Writes K, eta and diagnostics per parameter; with `dense` and few enough
/// modes also the spectrum and eigenbasis of the dense SLD.
Json sld_dump(const RunConfig &config, std::span<const double> point, bool dense);

struct RunOptions {
    /// Overrides FERMIFISHER_THREADS.
    std::optional<unsigned> threads;
    /// Overrides the config's output_path.
    std::optional<std::string> output_path;
};

/// Loads, validates and runs a config file; messages go to `err`.
int run(const std::string &config_path, const RunOptions &options, std::ostream &err);
int run(const RunConfig &config, const RunOptions &options, std::ostream &err);

int sld_dump_command(const std::string &config_path, const std::vector<double> &point,
                     const std::optional<std::string> &output_path, bool dense, std::ostream &err);

/// Randomized oracle cross-validation over `trials` full-rank instances.
int check(int modes, int trials, std::uint64_t seed, std::ostream &out);

}  // namespace fermifisher::cli
