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
 * @brief Fermionic Gaussian states in the correlation-matrix picture.
 *
 * A state on n modes is described either by its generator Omega (rho is
 * proportional to exp(-(i/4) w^T Omega w)) or by its correlation matrix
 * Gamma_jk = Tr(rho [w_j, w_k]) / 2. Gamma is imaginary antisymmetric and is
 * stored through its real representative G with Gamma = i G.
 *
 * Majorana indices are 0-based throughout: w_0 ... w_{2n-1}.
 */

#pragma once

#include "fermifisher/skewlin.hpp"

#include <span>
#include <vector>

namespace fermifisher {

/// Slack on |gamma_k| <= 1 when validating a correlation matrix.
inline constexpr double kPhysicalSlack = 1e-12;
/// omega_from_gamma refuses |gamma_k| > 1 - kPurityEps.
inline constexpr double kPurityEps = 1e-12;

class NonPhysicalState : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No finite generator exists: some |gamma_k| is 1 to double precision.
class ExtremalState : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class CorrelationMatrix {
public:
    /// Throws NonPhysicalState if some |gamma_k| exceeds 1 + kPhysicalSlack.
    explicit CorrelationMatrix(RealAntisym rep);

    static CorrelationMatrix maximally_mixed(Eigen::Index modes);

    Eigen::Index modes() const { return rep_.modes(); }
    const RealAntisym &rep() const { return rep_; }
    /// Gamma = i G, materialized.
    Eigen::MatrixXcd gamma() const { return rep_.times_i(); }
    /// gamma_k >= 0 from the canonical form, descending.
    Eigen::VectorXd eigenmode_values() const;

private:
    RealAntisym rep_;
};

class GeneratorMatrix {
public:
    /// Throws std::invalid_argument on non-finite entries.
    explicit GeneratorMatrix(RealAntisym rep);

    Eigen::Index modes() const { return rep_.modes(); }
    const RealAntisym &rep() const { return rep_; }

private:
    RealAntisym rep_;
};

CorrelationMatrix gamma_from_omega(const GeneratorMatrix &w);
GeneratorMatrix omega_from_gamma(const CorrelationMatrix &g, double eps_pure = kPurityEps);

/// prod_k 2 cosh(Omega_k / 2). Throws std::overflow_error when the product is
/// not representable; use log_partition_function instead.
double partition_function(const GeneratorMatrix &w);
double log_partition_function(const GeneratorMatrix &w);

/// sqrt(det((1 + Gamma^2) / 2)).
double purity(const CorrelationMatrix &g);
/// prod_k (1 + gamma_k^2) / 2 from the canonical angles.
double purity_from_modes(const CorrelationMatrix &g);

/// Tr(rho w_j w_k w_l w_m) with repeated indices allowed.
Complex wick_four(const CorrelationMatrix &g, Eigen::Index j, Eigen::Index k, Eigen::Index l,
                  Eigen::Index m);

/// Tr(rho w_{i1} ... w_{i2p}) for strictly increasing indices: Pf of the
/// corresponding submatrix of Gamma. Throws std::invalid_argument for odd or
/// non-increasing tuples, IndexError for out-of-range indices.
Complex wick_2p(const CorrelationMatrix &g, std::span<const Eigen::Index> idx);

}  // namespace fermifisher
