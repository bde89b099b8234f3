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
 * @brief Structured linear algebra for real antisymmetric matrices.
 *
 * Imaginary antisymmetric (Hermitian) matrices such as a correlation matrix
 * are handled through their real representative: M = i * A with A real and
 * antisymmetric.
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace fermifisher {

using Complex = std::complex<double>;

/// Tolerances shared by the structured linear algebra routines and tests.
struct Tolerances {
    static constexpr double orth = 1e-10;
    /// Relative to (1 + ||A||_F).
    static constexpr double recon = 1e-10;
    static constexpr double pair = 1e-10;
};

class LinalgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Real antisymmetric matrix of even dimension >= 2.
class RealAntisym {
public:
    /// Stores (m - m^T) / 2. Throws std::invalid_argument on odd, empty or
    /// non-square input.
    explicit RealAntisym(const Eigen::MatrixXd &m);

    static RealAntisym zero(Eigen::Index dim);

    Eigen::Index dim() const { return entries_.rows(); }
    Eigen::Index modes() const { return entries_.rows() / 2; }
    const Eigen::MatrixXd &matrix() const { return entries_; }
    double operator()(Eigen::Index j, Eigen::Index k) const { return entries_(j, k); }

    /// The Hermitian matrix i * A.
    Eigen::MatrixXcd times_i() const;

private:
    Eigen::MatrixXd entries_;
};

struct CanonicalForm {
    /// Orthogonal Q with A = Q^T (sum_k [[0, w_k], [-w_k, 0]]) Q.
    Eigen::MatrixXd rotation;
    /// Non-negative, sorted descending.
    Eigen::VectorXd angles;

    /// Q^T diag(f(w_k) J) Q with J = [[0, 1], [-1, 0]].
    template <typename F>
    Eigen::MatrixXd rebuild(F &&f) const {
        const Eigen::Index n = angles.size();
        Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double v = f(angles(k));
            blocks(2 * k, 2 * k + 1) = v;
            blocks(2 * k + 1, 2 * k) = -v;
        }
        return rotation.transpose() * blocks * rotation;
    }

    Eigen::MatrixXd reconstruct() const {
        return rebuild([](double w) { return w; });
    }
};

struct HermitianEigensystem {
    /// Columns are eigenvectors.
    Eigen::MatrixXcd vectors;
    /// Ascending.
    Eigen::VectorXd values;
};

CanonicalForm canonical_form(const RealAntisym &a);

/// Parlett-Reid tridiagonalization with partial pivoting. Pf([[0,1],[-1,0]]) = 1.
/// No overflow guard: entries of very large magnitude overflow like det().
double pfaffian(const Eigen::MatrixXd &a);
double pfaffian(const RealAntisym &a);

/// Real representative G of tanh(i A / 2) = i G.
RealAntisym tanh_of_i_halved(const RealAntisym &a);

/// Diagonalizes the Hermitian matrix i * A.
HermitianEigensystem hermitian_eig(const RealAntisym &a);

/// Orthogonal exp(A).
Eigen::MatrixXd exp_antisym(const RealAntisym &a);

double max_abs(const Eigen::MatrixXd &m);

}  // namespace fermifisher
