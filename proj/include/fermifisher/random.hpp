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

/// Random instances for randomized checks and tests.

#pragma once

#include "fermifisher/gaussian.hpp"

#include <cstdint>
#include <random>

namespace fermifisher {

using Rng = std::mt19937_64;

/// Entries i.i.d. normal with standard deviation `scale`, antisymmetrized.
inline RealAntisym random_antisym(Rng &rng, Eigen::Index dim, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = normal(rng);
    return RealAntisym(m - m.transpose());
}

inline Eigen::MatrixXd random_orthogonal(Rng &rng, Eigen::Index dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    // Fix column signs so the distribution is Haar.
    for (Eigen::Index c = 0; c < dim; ++c)
        if (qr.matrixQR()(c, c) < 0.0) q.col(c) = -q.col(c);
    return q;
}

/// Full-rank state: eigenmode values uniform in [-max_gamma, max_gamma], Haar-random basis.
inline CorrelationMatrix random_full_rank_state(Rng &rng, Eigen::Index modes, double max_gamma = 0.99) {
    std::uniform_real_distribution<double> uniform(-max_gamma, max_gamma);
    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        const double g = uniform(rng);
        blocks(2 * k, 2 * k + 1) = g;
        blocks(2 * k + 1, 2 * k) = -g;
    }
    const Eigen::MatrixXd o = random_orthogonal(rng, 2 * modes);
    return CorrelationMatrix(RealAntisym(o * blocks * o.transpose()));
}

inline Eigen::MatrixXcd random_unitary(Rng &rng, Eigen::Index dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    for (Eigen::Index c = 0; c < dim; ++c) {
        const Complex d = qr.matrixQR()(c, c);
        if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
    }
    return q;
}

}  // namespace fermifisher
