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

#include "fermifisher/oracle.hpp"

#include <cmath>
#include <string>

namespace fermifisher::oracle {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXcd kron(const MatrixXcd &a, const MatrixXcd &b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index r = 0; r < a.rows(); ++r)
        for (Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

void check_modes(Index n) {
    if (n < 1 || n > kMaxModes)
        throw SizeLimit("dense oracle supports 1.." + std::to_string(kMaxModes) +
                        " modes, got " + std::to_string(n));
}

// sum_jk m_jk w_j w_k
MatrixXcd quadratic_form(const std::vector<DenseOperator> &w, const MatrixXcd &m) {
    const Index size = w.front().rows();
    MatrixXcd out = MatrixXcd::Zero(size, size);
    for (Index j = 0; j < m.rows(); ++j) {
        MatrixXcd row = MatrixXcd::Zero(size, size);
        for (Index k = 0; k < m.cols(); ++k)
            if (m(j, k) != 0.0) row += m(j, k) * w[k];
        out += w[j] * row;
    }
    return out;
}

MatrixXcd hermitize(const MatrixXcd &m) { return 0.5 * (m + m.adjoint()); }

// First divided difference of 2 artanh on (-1, 1).
double artanh2_divided(double a, double b) {
    const double denom = 1.0 - a * b;
    const double z = (a - b) / denom;
    if (std::abs(z) < 1e-5) return 2.0 / denom * (1.0 + z * z / 3.0);
    return 2.0 * std::atanh(z) / (a - b);
}

// First divided difference of exp, for arguments already shifted to <= 0.
double exp_divided(double a, double b) {
    const double diff = a - b;
    if (diff == 0.0) return std::exp(a);
    return std::exp(b) * std::expm1(diff) / diff;
}

}  // namespace

std::vector<DenseOperator> majorana_matrices(int n) {
    check_modes(n);
    MatrixXcd x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    const MatrixXcd one = MatrixXcd::Identity(2, 2);

    std::vector<DenseOperator> out;
    out.reserve(2 * n);
    for (int j = 0; j < n; ++j) {
        for (const MatrixXcd *site : {&x, &y}) {
            MatrixXcd op = MatrixXcd::Identity(1, 1);
            for (int s = 0; s < n; ++s) op = kron(op, s < j ? z : (s == j ? *site : one));
            out.push_back(std::move(op));
        }
    }
    return out;
}

DenseOperator dense_state(const CorrelationMatrix &g) {
    const int n = static_cast<int>(g.modes());
    check_modes(n);
    const auto w = majorana_matrices(n);
    const CanonicalForm cf = canonical_form(g.rep());
    const Index size = Index{1} << n;

    std::vector<MatrixXcd> z(2 * n, MatrixXcd::Zero(size, size));
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
            if (cf.rotation(a, b) != 0.0) z[a] += cf.rotation(a, b) * w[b];

    MatrixXcd rho = MatrixXcd::Identity(size, size);
    const MatrixXcd one = MatrixXcd::Identity(size, size);
    for (int k = 0; k < n; ++k) {
        const MatrixXcd factor = 0.5 * (one - Complex(0, cf.angles(k)) * z[2 * k] * z[2 * k + 1]);
        rho = rho * factor;
    }
    return hermitize(rho);
}

DenseOperator dense_exp_unnormalized(const GeneratorMatrix &gen) {
    const int n = static_cast<int>(gen.modes());
    check_modes(n);
    const auto w = majorana_matrices(n);
    const MatrixXcd h = hermitize(Complex(0, -0.25) * quadratic_form(w, gen.rep().matrix().cast<Complex>()));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    const VectorXd weights = es.eigenvalues().array().exp().matrix();
    return hermitize(es.eigenvectors() * weights.cast<Complex>().asDiagonal() *
                     es.eigenvectors().adjoint());
}

DenseOperator dense_state_exp(const GeneratorMatrix &gen) {
    const int n = static_cast<int>(gen.modes());
    check_modes(n);
    const auto w = majorana_matrices(n);
    const MatrixXcd h = hermitize(Complex(0, -0.25) * quadratic_form(w, gen.rep().matrix().cast<Complex>()));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    const double top = es.eigenvalues().maxCoeff();
    VectorXd weights = (es.eigenvalues().array() - top).exp().matrix();
    weights /= weights.sum();
    return hermitize(es.eigenvectors() * weights.cast<Complex>().asDiagonal() *
                     es.eigenvectors().adjoint());
}

DenseOperator dense_state_derivative(const CorrelationMatrix &g, const RealAntisym &tangent) {
    const int n = static_cast<int>(g.modes());
    check_modes(n);
    if (tangent.dim() != g.rep().dim())
        throw std::invalid_argument("dense_state_derivative: tangent dimension mismatch");

    // i Omega = 2 artanh(Gamma); differentiate in the eigenbasis of Gamma.
    const HermitianEigensystem ge = hermitian_eig(g.rep());
    const VectorXd &gamma = ge.values;
    if (gamma.cwiseAbs().maxCoeff() >= 1.0)
        throw std::domain_error("dense_state_derivative: state is not full rank");
    MatrixXcd rotated = ge.vectors.adjoint() * tangent.times_i() * ge.vectors;
    VectorXd f(gamma.size());
    for (Index j = 0; j < gamma.size(); ++j) {
        f(j) = 2.0 * std::atanh(gamma(j));
        for (Index k = 0; k < gamma.size(); ++k) rotated(j, k) *= artanh2_divided(gamma(j), gamma(k));
    }
    const MatrixXcd i_omega = ge.vectors * f.cast<Complex>().asDiagonal() * ge.vectors.adjoint();
    const MatrixXcd i_domega = ge.vectors * rotated * ge.vectors.adjoint();
    const MatrixXd omega = i_omega.imag();
    const MatrixXd domega = i_domega.imag();

    // rho = e^H / Tr e^H with H = -(i/4) w^T Omega w.
    const auto w = majorana_matrices(n);
    const MatrixXcd h = hermitize(Complex(0, -0.25) * quadratic_form(w, omega.cast<Complex>()));
    const MatrixXcd dh = hermitize(Complex(0, -0.25) * quadratic_form(w, domega.cast<Complex>()));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    const VectorXd shifted = es.eigenvalues().array() - es.eigenvalues().maxCoeff();
    MatrixXcd d = es.eigenvectors().adjoint() * dh * es.eigenvectors();
    for (Index a = 0; a < d.rows(); ++a)
        for (Index b = 0; b < d.cols(); ++b) d(a, b) *= exp_divided(shifted(a), shifted(b));
    const VectorXd e = shifted.array().exp().matrix();
    const double trace_e = e.sum();
    const Complex trace_de = d.trace();
    MatrixXcd drho_diag = d / trace_e;
    drho_diag.diagonal() -= e.cast<Complex>() * (trace_de / (trace_e * trace_e));
    return hermitize(es.eigenvectors() * drho_diag * es.eigenvectors().adjoint());
}

DenseOperator dense_quadratic(const SldQuadratic &s) {
    const int n = static_cast<int>(s.modes());
    check_modes(n);
    const auto w = majorana_matrices(n);
    MatrixXcd l = 0.5 * quadratic_form(w, s.k());
    l.diagonal().array() += s.eta;
    return hermitize(l);
}

Complex dense_correlator(const DenseOperator &rho, std::span<const Index> idx) {
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
    const auto w = majorana_matrices(n);
    MatrixXcd product = rho;
    for (Index i : idx) {
        if (i < 0 || i >= 2 * n) throw IndexError("dense_correlator: index out of range");
        product = product * w[i];
    }
    return product.trace();
}

MatrixXd dense_correlation_rep(const DenseOperator &rho) {
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
    const auto w = majorana_matrices(n);
    MatrixXd rep = MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j)
        for (int k = 0; k < 2 * n; ++k)
            rep(j, k) = (0.5 * (rho * (w[j] * w[k] - w[k] * w[j])).trace()).imag();
    return rep;
}

DenseOperator dense_sld(const DenseOperator &rho, const DenseOperator &drho,
                        const DenseSldOptions &options) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitize(rho));
    const VectorXd &p = es.eigenvalues();
    MatrixXcd d = es.eigenvectors().adjoint() * drho * es.eigenvectors();
    for (Index a = 0; a < d.rows(); ++a)
        for (Index b = 0; b < d.cols(); ++b) {
            const double sum = p(a) + p(b);
            if (sum > options.eps_kernel) {
                d(a, b) *= 2.0 / sum;
                continue;
            }
            if (options.strict || std::abs(d(a, b)) > options.kernel_tangent)
                throw KernelTangent("derivative has weight " + std::to_string(std::abs(d(a, b))) +
                                    " on the kernel of rho");
            d(a, b) = 0.0;
        }
    return hermitize(es.eigenvectors() * d * es.eigenvectors().adjoint());
}

DenseQfi dense_qfi(const DenseOperator &rho, const std::vector<DenseOperator> &drhos,
                   const DenseSldOptions &options) {
    const Index d = static_cast<Index>(drhos.size());
    DenseQfi out{MatrixXd::Zero(d, d), MatrixXd::Zero(d, d), {}};
    for (const auto &drho : drhos) out.slds.push_back(dense_sld(rho, drho, options));
    for (Index mu = 0; mu < d; ++mu)
        for (Index nu = 0; nu < d; ++nu) {
            const MatrixXcd &a = out.slds[mu];
            const MatrixXcd &b = out.slds[nu];
            out.j_matrix(mu, nu) = (0.5 * (rho * (a * b + b * a)).trace()).real();
            out.u_matrix(mu, nu) = (Complex(0, -0.25) * (rho * (a * b - b * a)).trace()).real();
        }
    return out;
}

double measurement_fi(const DenseOperator &rho, const DenseOperator &drho,
                      const DenseOperator &basis, double eps_prob) {
    double fi = 0.0;
    for (Index x = 0; x < basis.cols(); ++x) {
        const auto v = basis.col(x);
        const double p = (v.adjoint() * rho * v).value().real();
        if (p <= eps_prob) continue;
        const double dp = (v.adjoint() * drho * v).value().real();
        fi += dp * dp / p;
    }
    return fi;
}

double sld_residual(const DenseOperator &rho, const DenseOperator &drho, const DenseOperator &l) {
    return (drho - 0.5 * (l * rho + rho * l)).norm();
}

}  // namespace fermifisher::oracle
