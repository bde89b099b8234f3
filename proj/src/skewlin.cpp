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

#include "fermifisher/skewlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace fermifisher {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

RealAntisym::RealAntisym(const MatrixXd &m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("RealAntisym: matrix is not square");
    if (m.rows() < 2 || m.rows() % 2 != 0)
        throw std::invalid_argument("RealAntisym: dimension must be even and >= 2, got " +
                                    std::to_string(m.rows()));
    entries_ = 0.5 * (m - m.transpose());
}

RealAntisym RealAntisym::zero(Index dim) { return RealAntisym(MatrixXd::Zero(dim, dim)); }

MatrixXcd RealAntisym::times_i() const { return Complex(0.0, 1.0) * entries_.cast<Complex>(); }

double max_abs(const MatrixXd &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

HermitianEigensystem hermitian_eig(const RealAntisym &a) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a.times_i());
    if (es.info() != Eigen::Success) throw LinalgError("hermitian_eig: eigensolver did not converge");
    return {es.eigenvectors(), es.eigenvalues()};
}

namespace {

// Removes from v its components along the given orthonormal rows, then normalizes.
void orthonormalize_against(Eigen::Ref<VectorXd> v, const std::vector<VectorXd> &basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto &b : basis) v -= b.dot(v) * b;
    v.normalize();
}

CanonicalForm canonical_form_impl(const MatrixXd &a) {
    const Index dim = a.rows();
    const Index n = dim / 2;
    CanonicalForm out{MatrixXd::Identity(dim, dim), VectorXd::Zero(n)};
    if (a.cwiseAbs().maxCoeff() == 0.0) return out;

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Complex(0.0, 1.0) * a.cast<Complex>());
    if (es.info() != Eigen::Success)
        throw LinalgError("canonical_form: eigensolver did not converge");
    const VectorXd &values = es.eigenvalues();
    const double scale = std::max(std::abs(values(0)), std::abs(values(dim - 1)));
    // Below this the +/- partners are too close for their eigenvectors to be
    // separated reliably; that subspace is handled by recursion.
    const double threshold = 1e-6 * scale;

    std::vector<VectorXd> rows;
    std::vector<double> angles;
    rows.reserve(dim);
    for (Index idx = dim - 1; idx >= n; --idx) {
        if (values(idx) <= threshold) break;
        // i A v = lambda v with v = x + i y gives A x = lambda y, A y = -lambda x.
        VectorXd first = es.eigenvectors().col(idx).imag();
        VectorXd second = es.eigenvectors().col(idx).real();
        orthonormalize_against(first, rows);
        rows.push_back(first);
        orthonormalize_against(second, rows);
        double w = first.dot(a * second);
        if (w < 0.0) {
            std::swap(rows.back(), second);
            w = -w;
        }
        rows.push_back(second);
        angles.push_back(w);
    }

    const Index found = static_cast<Index>(rows.size());
    if (found < dim) {
        // Orthonormal basis of the complement of the planes found so far.
        MatrixXd projector = MatrixXd::Identity(dim, dim);
        for (const auto &r : rows) projector -= r * r.transpose();
        Eigen::SelfAdjointEigenSolver<MatrixXd> ps(0.5 * (projector + projector.transpose()));
        const Index rest = dim - found;
        MatrixXd basis = ps.eigenvectors().rightCols(rest);
        MatrixXd sub = basis.transpose() * a * basis;
        sub = 0.5 * (sub - sub.transpose());
        CanonicalForm inner = canonical_form_impl(sub);
        MatrixXd subrows = inner.rotation * basis.transpose();
        for (Index r = 0; r < rest; ++r) {
            VectorXd v = subrows.row(r).transpose();
            orthonormalize_against(v, rows);
            rows.push_back(v);
        }
        for (Index k = 0; k < inner.angles.size(); ++k) angles.push_back(inner.angles(k));
    }

    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index l, Index r) { return angles[l] > angles[r]; });
    for (Index k = 0; k < n; ++k) {
        const Index src = order[k];
        VectorXd first = rows[2 * src];
        VectorXd second = rows[2 * src + 1];
        // The block is invariant under rotations within its plane. Fix the
        // phase so the plane's dominant coordinate lies along the first row.
        Index pivot;
        (first.array().square() + second.array().square()).maxCoeff(&pivot);
        const double radius = std::hypot(first(pivot), second(pivot));
        const double c = first(pivot) / radius;
        const double s = second(pivot) / radius;
        out.rotation.row(2 * k) = (c * first + s * second).transpose();
        out.rotation.row(2 * k + 1) = (c * second - s * first).transpose();
        out.angles(k) = angles[src];
    }
    return out;
}

}  // namespace

CanonicalForm canonical_form(const RealAntisym &a) { return canonical_form_impl(a.matrix()); }

double pfaffian(const MatrixXd &input) {
    if (input.rows() != input.cols()) throw std::invalid_argument("pfaffian: matrix is not square");
    const Index n = input.rows();
    if (n == 0) return 1.0;
    if (n % 2 == 1) return 0.0;

    MatrixXd a = input;
    double result = 1.0;
    for (Index k = 0; k + 1 < n; k += 2) {
        Index pivot;
        a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&pivot);
        pivot += k + 1;
        if (pivot != k + 1) {
            a.row(k + 1).swap(a.row(pivot));
            a.col(k + 1).swap(a.col(pivot));
            result = -result;
        }
        if (a(k + 1, k) == 0.0) return 0.0;
        result *= a(k, k + 1);
        const Index rest = n - k - 2;
        if (rest > 0) {
            VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
            VectorXd column = a.col(k + 1).tail(rest);
            a.bottomRightCorner(rest, rest) += tau * column.transpose() - column * tau.transpose();
        }
    }
    return result;
}

double pfaffian(const RealAntisym &a) { return pfaffian(a.matrix()); }

RealAntisym tanh_of_i_halved(const RealAntisym &a) {
    const CanonicalForm cf = canonical_form(a);
    return RealAntisym(cf.rebuild([](double w) { return std::tanh(0.5 * w); }));
}

MatrixXd exp_antisym(const RealAntisym &a) {
    const CanonicalForm cf = canonical_form(a);
    const Index n = cf.angles.size();
    MatrixXd blocks = MatrixXd::Zero(2 * n, 2 * n);
    for (Index k = 0; k < n; ++k) {
        const double c = std::cos(cf.angles(k));
        const double s = std::sin(cf.angles(k));
        blocks.block<2, 2>(2 * k, 2 * k) << c, s, -s, c;
    }
    return cf.rotation.transpose() * blocks * cf.rotation;
}

}  // namespace fermifisher
