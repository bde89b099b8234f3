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
#include "fermifisher/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <ostream>

namespace fermifisher::cli {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

struct Check {
    Check(const char *name, double tolerance) : name(name), tolerance(tolerance) {}

    const char *name;
    double tolerance;
    double worst = -std::numeric_limits<double>::infinity();
    std::uint64_t worst_seed = 0;
    std::vector<std::uint64_t> failing_seeds;

    void record(double value, std::uint64_t seed) {
        if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
        if (value > worst) {
            worst = value;
            worst_seed = seed;
        }
        if (value > tolerance) failing_seeds.push_back(seed);
    }
    bool passed() const { return failing_seeds.empty(); }
};

double relative(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

}  // namespace

int check(int modes, int trials, std::uint64_t seed, std::ostream &out) {
    if (modes < 1 || modes > oracle::kMaxModes) {
        out << "error: --modes must be in 1.." << oracle::kMaxModes << "\n";
        return kUsageError;
    }
    if (trials < 1) {
        out << "error: --trials must be positive\n";
        return kUsageError;
    }

    Check sld{"sld_equation (rel)", 1e-9};
    Check lyapunov{"lyapunov (rel 1+|dG|)", 1e-10};
    Check trace{"trace_rho_L", 1e-10};
    Check qfim_check{"qfim vs dense (rel)", 1e-8};
    Check uhlmann{"uhlmann vs dense (rel)", 1e-8};
    Check wick{"wick vs dense", 1e-10};
    Check purity_check{"purity vs dense", 1e-12};
    Check partition{"partition vs dense (rel)", 1e-10};
    Check saturation{"sld-basis FI vs QFI (rel)", 1e-6};
    Check fi_bound{"random-basis FI - QFI", 1e-10};
    std::vector<Check *> checks{&sld,      &lyapunov,     &trace,     &qfim_check, &uhlmann,
                                &wick,     &purity_check, &partition, &saturation, &fi_bound};

    const auto majoranas = oracle::majorana_matrices(modes);
    const Index dim = 2 * modes;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t instance = seed + static_cast<std::uint64_t>(trial);
        Rng rng(instance);
        const CorrelationMatrix g = random_full_rank_state(rng, modes);
        const std::vector<RealAntisym> tangents{random_antisym(rng, dim), random_antisym(rng, dim)};

        const oracle::DenseOperator rho = oracle::dense_state(g);
        std::vector<oracle::DenseOperator> drhos;
        for (const auto &t : tangents) drhos.push_back(oracle::dense_state_derivative(g, t));

        const QfimResult result = qfim(g, tangents);
        for (std::size_t mu = 0; mu < tangents.size(); ++mu) {
            const SldQuadratic &s = result.slds[mu];
            const MatrixXcd l = oracle::dense_quadratic(s);
            sld.record(relative(oracle::sld_residual(rho, drhos[mu], l), drhos[mu].norm()), instance);
            lyapunov.record(result.residuals[mu] / (1.0 + tangents[mu].matrix().norm()), instance);
            trace.record(std::abs((rho * l).trace()) / (1.0 + s.kmatrix.matrix().norm()), instance);
        }

        const oracle::DenseQfi dense = oracle::dense_qfi(rho, drhos);
        qfim_check.record(relative((result.j_matrix - dense.j_matrix).norm(), dense.j_matrix.norm()), instance);
        const double u_scale = dense.u_matrix.norm() > 0.0 ? dense.u_matrix.norm() : dense.j_matrix.norm();
        uhlmann.record(relative((result.u_matrix - dense.u_matrix).norm(), u_scale), instance);

        // Sampled increasing tuples of length 2, 4, 6.
        for (Index p = 1; p <= std::min<Index>(3, modes); ++p)
            for (int sample = 0; sample < 8; ++sample) {
                std::vector<Index> idx(dim);
                for (Index i = 0; i < dim; ++i) idx[i] = i;
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(2 * p);
                std::sort(idx.begin(), idx.end());
                wick.record(std::abs(wick_2p(g, idx) - oracle::dense_correlator(rho, idx)), instance);
            }

        purity_check.record(std::abs(purity(g) - (rho * rho).trace().real()), instance);
        const GeneratorMatrix generator = omega_from_gamma(g);
        const double z = partition_function(generator);
        partition.record(std::abs(z - oracle::dense_exp_unnormalized(generator).trace().real()) / z, instance);

        Eigen::SelfAdjointEigenSolver<MatrixXcd> les(dense.slds[0]);
        const double fi = oracle::measurement_fi(rho, drhos[0], les.eigenvectors());
        saturation.record(relative(std::abs(fi - dense.j_matrix(0, 0)), dense.j_matrix(0, 0)), instance);
        for (int b = 0; b < 10; ++b) {
            const MatrixXcd basis = random_unitary(rng, rho.rows());
            fi_bound.record(oracle::measurement_fi(rho, drhos[0], basis) - dense.j_matrix(0, 0), instance);
        }
    }

    bool ok = true;
    out << "check: modes=" << modes << " trials=" << trials << " seed=" << seed << "\n";
    out << std::left << std::setw(30) << "quantity" << std::setw(14) << "max" << std::setw(12) << "tolerance"
        << std::setw(8) << "status" << "worst seed\n";
    for (const Check *c : checks) {
        out << std::left << std::setw(30) << c->name << std::setw(14) << std::setprecision(3) << std::scientific
            << c->worst << std::setw(12) << c->tolerance << std::setw(8) << (c->passed() ? "ok" : "FAIL")
            << c->worst_seed << "\n";
        if (!c->passed()) {
            ok = false;
            out << "  failing instance seeds:";
            for (auto s : c->failing_seeds) out << " " << s;
            out << "\n";
        }
    }
    out << std::defaultfloat;
    return ok ? kOk : kCheckFailed;
}

}  // namespace fermifisher::cli
