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
 * @brief Dense Fock-space brute force for small mode counts.
 *
 * Everything here is explicit 2^n x 2^n complex linear algebra and serves as
 * ground truth for the closed-form routines. Majorana operators use the
 * Jordan-Wigner map with mode j on tensor slot j (slot 0 is the most
 * significant qubit) and Z strings on the left:
 *
 *     w_{2j}   = Z x ... x Z x X x 1 x ... x 1
 *     w_{2j+1} = Z x ... x Z x Y x 1 x ... x 1
 *
 * so that w_{2j} w_{2j+1} = i Z_j and c_j^dagger c_j = (1 + Z_j) / 2.
 */

#pragma once

#include "fermifisher/gaussian.hpp"
#include "fermifisher/sld.hpp"

#include <span>
#include <vector>

namespace fermifisher::oracle {

using DenseOperator = Eigen::MatrixXcd;

inline constexpr int kMaxModes = 6;
inline constexpr double kEpsKernel = 1e-12;
inline constexpr double kEpsProb = 1e-14;

class SizeLimit : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The derivative has weight on the kernel of rho.
class KernelTangent : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Throws SizeLimit unless 1 <= n <= kMaxModes.
std::vector<DenseOperator> majorana_matrices(int n);

/// rho = prod_k (1 - i gamma_k z_{2k} z_{2k+1}) / 2 with z = Q w from the
/// canonical form of G.
DenseOperator dense_state(const CorrelationMatrix &g);

/// exp(-(i/4) w^T Omega w), not normalized.
DenseOperator dense_exp_unnormalized(const GeneratorMatrix &w);
DenseOperator dense_state_exp(const GeneratorMatrix &w);

/// d rho along the tangent dGamma = i * tangent, by Frechet differentiation of
/// Omega = 2 artanh(Gamma) (as matrix functions) and of rho = e^H / Tr e^H.
/// Full-rank states only.
DenseOperator dense_state_derivative(const CorrelationMatrix &g, const RealAntisym &tangent);

/// (1/2) w^T K w + eta as a dense operator.
DenseOperator dense_quadratic(const SldQuadratic &s);

/// Tr(rho w_{i1} ... w_{ik}) for any index list (repeats and any order).
Complex dense_correlator(const DenseOperator &rho, std::span<const Eigen::Index> idx);

/// Gamma_jk = Tr(rho [w_j, w_k]) / 2, returned as the real representative.
Eigen::MatrixXd dense_correlation_rep(const DenseOperator &rho);

struct DenseSldOptions {
    double eps_kernel = kEpsKernel;
    /// Tolerated |d rho_ab| on zeroed entries before KernelTangent.
    double kernel_tangent = 1e-8;
    bool strict = false;
};

/// Spectral solution of d rho = (L rho + rho L) / 2.
DenseOperator dense_sld(const DenseOperator &rho, const DenseOperator &drho,
                        const DenseSldOptions &options = {});

struct DenseQfi {
    Eigen::MatrixXd j_matrix;
    Eigen::MatrixXd u_matrix;
    std::vector<DenseOperator> slds;
};

DenseQfi dense_qfi(const DenseOperator &rho, const std::vector<DenseOperator> &drhos,
                   const DenseSldOptions &options = {});

/// Classical Fisher information of the projective measurement onto the
/// columns of `basis`.
double measurement_fi(const DenseOperator &rho, const DenseOperator &drho,
                      const DenseOperator &basis, double eps_prob = kEpsProb);

/// ||A||_F of d rho - (L rho + rho L) / 2.
double sld_residual(const DenseOperator &rho, const DenseOperator &drho, const DenseOperator &l);

}  // namespace fermifisher::oracle
