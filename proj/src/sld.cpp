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

#include "fermifisher/sld.hpp"

#include <cmath>
#include <string>

namespace fermifisher {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

SpectralFrame::SpectralFrame(const CorrelationMatrix &g) : eig(hermitian_eig(g.rep())) {}

MatrixXcd SpectralFrame::rotate_tangent(const RealAntisym &tangent) const {
    return eig.vectors.adjoint() * tangent.times_i() * eig.vectors;
}

bool SpectralFrame::singular(Index j, Index k, double eps) const {
    return std::abs(eig.values(j) * eig.values(k) - 1.0) < eps;
}

namespace {

void check_tangent(const CorrelationMatrix &g, const RealAntisym &tangent) {
    if (tangent.dim() != g.rep().dim())
        throw NonPhysicalTangent("tangent has dimension " + std::to_string(tangent.dim()) +
                                 ", correlation matrix has " + std::to_string(g.rep().dim()));
    if (!tangent.matrix().allFinite()) throw NonPhysicalTangent("tangent has non-finite entries");
}

double eta_of(const RealAntisym &k, const CorrelationMatrix &g) {
    // Tr(K Gamma) / 2 with K = i K_rep, Gamma = i G.
    return -0.5 * (k.matrix() * g.rep().matrix()).trace();
}

struct EigenSolve {
    MatrixXcd kbar;  // K in the eigenbasis of Gamma
    SldQuadratic sld;
};

EigenSolve solve_in_frame(const SpectralFrame &frame, const CorrelationMatrix &g,
                          const RealAntisym &tangent, const SolveOptions &options) {
    check_tangent(g, tangent);
    const MatrixXcd rotated = frame.rotate_tangent(tangent);
    const double refuse = options.eps_tangent * tangent.matrix().norm();
    const Eigen::VectorXd &gamma = frame.eig.values;
    const Index dim = rotated.rows();

    MatrixXcd kbar(dim, dim);
    int singular = 0;
    for (Index j = 0; j < dim; ++j) {
        for (Index k = 0; k < dim; ++k) {
            const double denom = gamma(j) * gamma(k) - 1.0;
            if (std::abs(denom) >= options.eps_sing) {
                kbar(j, k) = rotated(j, k) / denom;
                continue;
            }
            ++singular;
            if (options.policy == SingularPolicy::strict)
                throw SingularPair("singular eigen-pair (" + std::to_string(j) + ", " +
                                   std::to_string(k) + ") under strict policy");
            if (std::abs(rotated(j, k)) > refuse)
                throw SingularPair("tangent component " + std::to_string(std::abs(rotated(j, k))) +
                                   " on singular eigen-pair (" + std::to_string(j) + ", " +
                                   std::to_string(k) + ") leaves the physical manifold");
            kbar(j, k) = 0.0;
        }
    }
    const MatrixXcd k = frame.eig.vectors * kbar * frame.eig.vectors.adjoint();
    RealAntisym krep(k.imag());
    const double eta = eta_of(krep, g);
    return {kbar, SldQuadratic{std::move(krep), eta, singular}};
}

double residual_in_frame(const SpectralFrame &frame, const CorrelationMatrix &g,
                         const RealAntisym &tangent, const SldQuadratic &s, double eps_sing) {
    // dGamma - (Gamma K Gamma - K) = i (dG + G K_rep G + K_rep)
    const MatrixXd &rep = g.rep().matrix();
    const MatrixXd &krep = s.kmatrix.matrix();
    const RealAntisym diff(tangent.matrix() + rep * krep * rep + krep);
    MatrixXcd rotated = frame.rotate_tangent(diff);
    for (Index j = 0; j < rotated.rows(); ++j)
        for (Index k = 0; k < rotated.cols(); ++k)
            if (frame.singular(j, k, eps_sing)) rotated(j, k) = 0.0;
    return rotated.norm();
}

// Tr(rho L_mu L_nu) by direct Wick expansion of the two quadratic forms.
Complex wick_second_moment(const CorrelationMatrix &g, const SldQuadratic &first,
                           const SldQuadratic &second) {
    const MatrixXcd k1 = first.k();
    const MatrixXcd k2 = second.k();
    const MatrixXcd a = MatrixXcd::Identity(k1.rows(), k1.cols()) + g.gamma();
    const Index dim = k1.rows();

    Complex quartic = 0.0;
    for (Index j = 0; j < dim; ++j)
        for (Index k = 0; k < dim; ++k) {
            if (k1(j, k) == 0.0) continue;
            for (Index l = 0; l < dim; ++l)
                for (Index m = 0; m < dim; ++m)
                    quartic += k1(j, k) * k2(l, m) * wick_four(g, j, k, l, m);
        }
    // Tr(rho w^T K w) = sum_jk K_jk a_jk
    const Complex mean1 = k1.cwiseProduct(a).sum();
    const Complex mean2 = k2.cwiseProduct(a).sum();
    return 0.25 * quartic + 0.5 * second.eta * mean1 + 0.5 * first.eta * mean2 +
           first.eta * second.eta;
}

}  // namespace

SldQuadratic solve_k(const CorrelationMatrix &g, const RealAntisym &tangent,
                     const SolveOptions &options) {
    const SpectralFrame frame(g);
    return solve_in_frame(frame, g, tangent, options).sld;
}

SldQuadratic solve_k_vectorized(const CorrelationMatrix &g, const RealAntisym &tangent) {
    check_tangent(g, tangent);
    // dG = -(G K G + K); column-major vec(G K G) = (G^T kron G) vec(K).
    const MatrixXd &rep = g.rep().matrix();
    const Index dim = rep.rows();
    const Index size = dim * dim;
    MatrixXd system = -MatrixXd::Identity(size, size);
    for (Index c1 = 0; c1 < dim; ++c1)
        for (Index r1 = 0; r1 < dim; ++r1) {
            const double scale = -rep(c1, r1);  // (G^T)(r1, c1)
            if (scale == 0.0) continue;
            system.block(r1 * dim, c1 * dim, dim, dim) += scale * rep;
        }
    const Eigen::Map<const Eigen::VectorXd> rhs(tangent.matrix().data(), size);
    const auto lu = system.fullPivLu();
    if (!lu.isInvertible()) throw SingularPair("solve_k_vectorized: Lyapunov operator is singular");
    const Eigen::VectorXd solution = lu.solve(rhs);
    RealAntisym krep(Eigen::Map<const MatrixXd>(solution.data(), dim, dim));
    const double eta = eta_of(krep, g);
    return SldQuadratic{std::move(krep), eta, 0};
}

double assemble_residual(const CorrelationMatrix &g, const RealAntisym &tangent,
                         const SldQuadratic &s, double eps_sing) {
    check_tangent(g, tangent);
    const SpectralFrame frame(g);
    return residual_in_frame(frame, g, tangent, s, eps_sing);
}

QfimResult qfim(const CorrelationMatrix &g, const std::vector<RealAntisym> &tangents,
                const QfimOptions &options) {
    const SpectralFrame frame(g);
    const Index d = static_cast<Index>(tangents.size());
    const Eigen::VectorXd &gamma = frame.eig.values;

    QfimResult out;
    out.j_matrix = MatrixXd::Zero(d, d);
    out.u_matrix = MatrixXd::Zero(d, d);
    std::vector<MatrixXcd> kbars;
    kbars.reserve(d);
    for (const auto &tangent : tangents) {
        EigenSolve solved = solve_in_frame(frame, g, tangent, options.solve);
        out.residuals.push_back(
            residual_in_frame(frame, g, tangent, solved.sld, options.solve.eps_sing));
        out.singular_pairs.push_back(solved.sld.singular_pairs);
        out.slds.push_back(std::move(solved.sld));
        kbars.push_back(std::move(solved.kbar));
    }

    for (Index mu = 0; mu < d; ++mu) {
        for (Index nu = mu; nu < d; ++nu) {
            double jval = 0.0;
            double uval = 0.0;
            if (options.path == QfimPath::eigenbasis) {
                // Tr(rho L_mu L_nu) - <L_mu><L_nu>
                //   = (1/2) sum_jk Kbar_mu(j,k) Kbar_nu(k,j) (1 + gamma_k)(1 - gamma_j)
                Complex sym = 0.0;
                Complex anti = 0.0;
                const MatrixXcd &a = kbars[mu];
                const MatrixXcd &b = kbars[nu];
                for (Index j = 0; j < a.rows(); ++j)
                    for (Index k = 0; k < a.cols(); ++k) {
                        const Complex prod = a(j, k) * b(k, j);
                        sym += prod * (1.0 - gamma(j) * gamma(k));
                        anti += prod * (gamma(k) - gamma(j));
                    }
                jval = 0.5 * sym.real();
                // -(i/4) Tr(rho [L_mu, L_nu])
                uval = 0.25 * anti.imag();
            } else {
                const Complex forward = wick_second_moment(g, out.slds[mu], out.slds[nu]);
                const Complex backward = wick_second_moment(g, out.slds[nu], out.slds[mu]);
                jval = 0.5 * (forward + backward).real();
                uval = (Complex(0.0, -0.25) * (forward - backward)).real();
            }
            out.j_matrix(mu, nu) = out.j_matrix(nu, mu) = jval;
            out.u_matrix(mu, nu) = uval;
            out.u_matrix(nu, mu) = -uval;
        }
        out.u_matrix(mu, mu) = 0.0;
    }
    return out;
}

MatrixXd uhlmann_curvature(const CorrelationMatrix &g, const std::vector<RealAntisym> &tangents,
                           const QfimOptions &options) {
    return qfim(g, tangents, options).u_matrix;
}

CompatibilityReport compatibility_check(const QfimResult &result, double tol) {
    CompatibilityReport report;
    const MatrixXd &u = result.u_matrix;
    for (Index mu = 0; mu < u.rows(); ++mu)
        for (Index nu = mu + 1; nu < u.cols(); ++nu)
            if (std::abs(u(mu, nu)) > report.max_abs_u) {
                report.max_abs_u = std::abs(u(mu, nu));
                report.mu = mu;
                report.nu = nu;
            }
    report.compatible = report.max_abs_u <= tol * (1.0 + max_abs(result.j_matrix));
    return report;
}

double cr_bound_scalar(const QfimResult &result, const MatrixXd &cost) {
    const MatrixXd &j = result.j_matrix;
    const Index d = j.rows();
    if (cost.rows() != d || cost.cols() != d)
        throw NonPdCost("cost matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    if (!cost.allFinite() || max_abs(cost - cost.transpose()) > 1e-12 * max_abs(cost))
        throw NonPdCost("cost matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> wes(cost, Eigen::EigenvaluesOnly);
    if (wes.eigenvalues().minCoeff() <= 0.0) throw NonPdCost("cost matrix is not positive definite");

    Eigen::SelfAdjointEigenSolver<MatrixXd> jes(j);
    const double floor = 1e-12 * max_abs(j);
    if (d == 0 || jes.eigenvalues().minCoeff() <= floor)
        throw SingularQfim("QFIM is singular: some parameter combination is not identifiable");
    const MatrixXd inverse = jes.eigenvectors() *
                             jes.eigenvalues().cwiseInverse().asDiagonal() *
                             jes.eigenvectors().transpose();
    return (cost * inverse).trace();
}

}  // namespace fermifisher
