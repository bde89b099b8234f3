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

#include "fermifisher/gaussian.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fermifisher {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

CorrelationMatrix::CorrelationMatrix(RealAntisym rep) : rep_(std::move(rep)) {
    const HermitianEigensystem es = hermitian_eig(rep_);
    const double top = std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1)));
    if (!std::isfinite(top) || top > 1.0 + kPhysicalSlack)
        throw NonPhysicalState("correlation matrix has |gamma| = " + std::to_string(top) + " > 1");
}

CorrelationMatrix CorrelationMatrix::maximally_mixed(Index modes) {
    return CorrelationMatrix(RealAntisym::zero(2 * modes));
}

VectorXd CorrelationMatrix::eigenmode_values() const { return canonical_form(rep_).angles; }

GeneratorMatrix::GeneratorMatrix(RealAntisym rep) : rep_(std::move(rep)) {
    if (!rep_.matrix().allFinite())
        throw std::invalid_argument("generator matrix has non-finite entries");
}

CorrelationMatrix gamma_from_omega(const GeneratorMatrix &w) {
    return CorrelationMatrix(tanh_of_i_halved(w.rep()));
}

GeneratorMatrix omega_from_gamma(const CorrelationMatrix &g, double eps_pure) {
    const CanonicalForm cf = canonical_form(g.rep());
    for (Index k = 0; k < cf.angles.size(); ++k) {
        if (cf.angles(k) > 1.0 - eps_pure)
            throw ExtremalState("eigenmode " + std::to_string(k) + " has |gamma| = " +
                                std::to_string(cf.angles(k)) + "; no finite generator exists");
    }
    return GeneratorMatrix(RealAntisym(cf.rebuild([](double x) { return 2.0 * std::atanh(x); })));
}

double partition_function(const GeneratorMatrix &w) {
    const double z = std::exp(log_partition_function(w));
    if (!std::isfinite(z)) throw std::overflow_error("partition_function overflows double");
    return z;
}

double log_partition_function(const GeneratorMatrix &w) {
    const CanonicalForm cf = canonical_form(w.rep());
    double total = 0.0;
    // log(2 cosh(x/2)) = |x|/2 + log1p(exp(-|x|))
    for (Index k = 0; k < cf.angles.size(); ++k) {
        const double x = std::abs(cf.angles(k));
        total += 0.5 * x + std::log1p(std::exp(-x));
    }
    return total;
}

double purity(const CorrelationMatrix &g) {
    // Gamma^2 = -G^2 with G real antisymmetric.
    const MatrixXd &rep = g.rep().matrix();
    const Index dim = rep.rows();
    const MatrixXd m = 0.5 * (MatrixXd::Identity(dim, dim) - rep * rep);
    return std::sqrt(m.partialPivLu().determinant());
}

double purity_from_modes(const CorrelationMatrix &g) {
    double result = 1.0;
    for (double gamma : g.eigenmode_values()) result *= 0.5 * (1.0 + gamma * gamma);
    return result;
}

namespace {

void check_index(const CorrelationMatrix &g, Index i) {
    if (i < 0 || i >= 2 * g.modes())
        throw IndexError("Majorana index " + std::to_string(i) + " outside [0, " +
                         std::to_string(2 * g.modes()) + ")");
}

}  // namespace

Complex wick_four(const CorrelationMatrix &g, Index j, Index k, Index l, Index m) {
    for (Index i : {j, k, l, m}) check_index(g, i);
    const MatrixXd &rep = g.rep().matrix();
    // a_xy = Gamma_xy + delta_xy
    auto a = [&](Index x, Index y) {
        return Complex(x == y ? 1.0 : 0.0, rep(x, y));
    };
    return a(j, k) * a(l, m) - a(j, l) * a(k, m) + a(j, m) * a(k, l);
}

Complex wick_2p(const CorrelationMatrix &g, std::span<const Index> idx) {
    if (idx.empty() || idx.size() % 2 != 0)
        throw std::invalid_argument("wick_2p: index tuple must have positive even length");
    for (std::size_t s = 0; s < idx.size(); ++s) {
        check_index(g, idx[s]);
        if (s > 0 && idx[s] <= idx[s - 1])
            throw std::invalid_argument("wick_2p: indices must be strictly increasing");
    }
    const Index size = static_cast<Index>(idx.size());
    MatrixXd sub(size, size);
    for (Index r = 0; r < size; ++r)
        for (Index c = 0; c < size; ++c) sub(r, c) = g.rep()(idx[r], idx[c]);
    // Pf(i G) = i^p Pf(G) for a 2p x 2p block.
    static const Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPowers[(size / 2) % 4] * pfaffian(sub);
}

}  // namespace fermifisher
