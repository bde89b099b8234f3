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
 * @brief Symmetric logarithmic derivative of a fermionic Gaussian state and
 * the metrology quantities built from it.
 *
 * For a tangent dGamma of the correlation matrix the SLD is the quadratic
 * operator L = (1/2) w^T K w + eta with no linear term, where K solves the
 * discrete Lyapunov equation
 *
 *     dGamma = Gamma K Gamma - K,
 *
 * and eta = Tr(K Gamma) / 2 makes Tr(rho L) = 0. In the eigenbasis of Gamma
 * (Gamma |j> = gamma_j |j>) this is K_jk = dGamma_jk / (gamma_j gamma_k - 1).
 * Pairs with gamma_j gamma_k = 1 only occur at rank-deficient states; they are
 * removable singularities of the QFIM and are zeroed by default.
 *
 * Like Gamma, K is imaginary antisymmetric and is stored as K = i * K_rep.
 */

#pragma once

#include "fermifisher/gaussian.hpp"

#include <optional>
#include <vector>

namespace fermifisher {

enum class SingularPolicy { zero, strict };

/// The tangent leaves the physical manifold at an extremal point, or a
/// singular pair was hit under the strict policy.
class SingularPair : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonPhysicalTangent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularQfim : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonPdCost : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SolveOptions {
    SingularPolicy policy = SingularPolicy::zero;
    /// A pair (j, k) is singular when |gamma_j gamma_k - 1| < eps_sing.
    double eps_sing = 1e-10;
    /// Zeroing is refused when |dGamma_jk| exceeds eps_tangent * ||dGamma||_F.
    double eps_tangent = 1e-8;
};

struct SldQuadratic {
    RealAntisym kmatrix;
    double eta = 0.0;
    int singular_pairs = 0;

    Eigen::Index modes() const { return kmatrix.modes(); }
    /// K = i * K_rep.
    Eigen::MatrixXcd k() const { return kmatrix.times_i(); }
};

/// Correlation matrix in its eigenbasis, shared by every tangent at a point.
struct SpectralFrame {
    explicit SpectralFrame(const CorrelationMatrix &g);

    HermitianEigensystem eig;
    /// V^dagger (i * tangent) V.
    Eigen::MatrixXcd rotate_tangent(const RealAntisym &tangent) const;
    /// |gamma_j gamma_k - 1| < eps.
    bool singular(Eigen::Index j, Eigen::Index k, double eps) const;
};

SldQuadratic solve_k(const CorrelationMatrix &g, const RealAntisym &tangent,
                     const SolveOptions &options = {});

/// Reference route: vectorizes Gamma K Gamma - K = dGamma and solves the
/// dense (2n)^2 linear system directly. Full-rank states only; O(n^6).
SldQuadratic solve_k_vectorized(const CorrelationMatrix &g, const RealAntisym &tangent);

/// ||dGamma - (Gamma K Gamma - K)||_F restricted to non-singular eigen-pairs.
double assemble_residual(const CorrelationMatrix &g, const RealAntisym &tangent,
                         const SldQuadratic &s, double eps_sing = SolveOptions{}.eps_sing);

enum class QfimPath {
    /// O(n^3) closed form in the eigenbasis of Gamma.
    eigenbasis,
    /// Explicit four-point Wick expansion of Tr(rho L_mu L_nu); O(n^4) per pair.
    wick,
};

struct QfimOptions {
    SolveOptions solve;
    QfimPath path = QfimPath::eigenbasis;
};

struct QfimResult {
    /// Quantum Fisher information matrix, symmetric PSD.
    Eigen::MatrixXd j_matrix;
    /// Mean Uhlmann curvature, antisymmetric.
    Eigen::MatrixXd u_matrix;
    std::vector<SldQuadratic> slds;
    /// Per parameter.
    std::vector<int> singular_pairs;
    std::vector<double> residuals;

    Eigen::Index dim() const { return j_matrix.rows(); }
};

QfimResult qfim(const CorrelationMatrix &g, const std::vector<RealAntisym> &tangents,
                const QfimOptions &options = {});

/// Same computation as qfim; the curvature is the u_matrix member.
Eigen::MatrixXd uhlmann_curvature(const CorrelationMatrix &g,
                                  const std::vector<RealAntisym> &tangents,
                                  const QfimOptions &options = {});

struct CompatibilityReport {
    bool compatible = true;
    double max_abs_u = 0.0;
    /// Location of max |U|; meaningful when dim > 1.
    Eigen::Index mu = 0;
    Eigen::Index nu = 0;
};

/// compatible iff max |U_mu,nu| <= tol * (1 + max |J|).
CompatibilityReport compatibility_check(const QfimResult &result, double tol = 1e-10);

/// tr(W J^-1). Throws SingularQfim when the smallest eigenvalue of J is below
/// 1e-12 * max |J|, NonPdCost when W is not symmetric positive definite.
double cr_bound_scalar(const QfimResult &result, const Eigen::MatrixXd &cost);

}  // namespace fermifisher
