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
#include "fermifisher/random.hpp"
#include "fermifisher/sld.hpp"

#include <doctest.h>

#include <cmath>

using namespace fermifisher;
using namespace fermifisher::oracle;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

// exp of a Hermitian matrix by its eigendecomposition.
MatrixXcd hermitian_exp(const MatrixXcd &h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("majorana_matrices satisfy the Clifford relations") {
    const auto w = majorana_matrices(3);
    REQUIRE(w.size() == 6);
    const MatrixXcd id = MatrixXcd::Identity(8, 8);
    for (std::size_t a = 0; a < w.size(); ++a) {
        CHECK((w[a] - w[a].adjoint()).norm() == 0.0);
        for (std::size_t b = 0; b < w.size(); ++b) {
            const MatrixXcd anti = w[a] * w[b] + w[b] * w[a];
            CHECK((anti - (a == b ? 2.0 : 0.0) * id).norm() == 0.0);
        }
    }
    for (const auto &wk : majorana_matrices(4)) CHECK(std::abs(wk.trace()) == 0.0);
    // w_0 w_1 = i Z on the first qubit
    MatrixXcd z = MatrixXcd::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    CHECK((majorana_matrices(1)[0] * majorana_matrices(1)[1] - Complex(0.0, 1.0) * z).norm() == 0.0);
    CHECK_THROWS_AS(majorana_matrices(7), SizeLimit);
}

TEST_CASE("dense_state") {
    const DenseOperator mixed = dense_state(CorrelationMatrix::maximally_mixed(2));
    CHECK((mixed - 0.25 * MatrixXcd::Identity(4, 4)).norm() < 1e-15);

    MatrixXd pure = MatrixXd::Zero(2, 2);
    pure(0, 1) = 1.0;
    pure(1, 0) = -1.0;
    const DenseOperator one = dense_state(CorrelationMatrix(RealAntisym(pure)));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(one);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));

    Rng rng(17);
    for (Index n = 1; n <= 4; ++n) {
        const CorrelationMatrix g = random_full_rank_state(rng, n);
        const DenseOperator rho = dense_state(g);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK((rho - rho.adjoint()).norm() < 1e-14);
        CHECK(max_abs(dense_correlation_rep(rho) - g.rep().matrix()) < 1e-12);
        const DenseOperator viaexp = dense_state_exp(omega_from_gamma(g));
        CHECK((viaexp - rho).norm() < 1e-10);
    }
    CHECK_THROWS_AS(dense_state(CorrelationMatrix::maximally_mixed(7)), SizeLimit);
}

TEST_CASE("dense_state_exp follows the exponential form") {
    Rng rng(2);
    const GeneratorMatrix w(random_antisym(rng, 4));
    const auto maj = majorana_matrices(2);
    MatrixXcd h = MatrixXcd::Zero(4, 4);
    for (Index a = 0; a < 4; ++a)
        for (Index b = 0; b < 4; ++b) h += Complex(0.0, -0.25 * w.rep()(a, b)) * maj[a] * maj[b];
    const MatrixXcd e = hermitian_exp(0.5 * (h + h.adjoint()));
    CHECK((dense_state_exp(w) - e / e.trace()).norm() < 1e-12);
    CHECK(std::abs(dense_exp_unnormalized(w).trace() - e.trace()) < 1e-10 * std::abs(e.trace()));
}

TEST_CASE("dense_state_derivative matches finite differences") {
    Rng rng(3);
    for (Index n = 1; n <= 3; ++n) {
        const CorrelationMatrix g = random_full_rank_state(rng, n);
        const RealAntisym t = random_antisym(rng, 2 * n);
        const double h = 1e-4;
        auto at = [&](double s) { return dense_state(CorrelationMatrix(RealAntisym(g.rep().matrix() + s * t.matrix()))); };
        const MatrixXcd fd = (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
        const DenseOperator exact = dense_state_derivative(g, t);
        CHECK((exact - fd).norm() < 1e-8 * (1.0 + exact.norm()));
        CHECK(std::abs(exact.trace()) < 1e-12);
    }
}

TEST_CASE("dense_sld") {
    Rng rng(4);
    // rho = 1 / 2^n makes L = 2^n d rho.
    const DenseOperator rho = dense_state(CorrelationMatrix::maximally_mixed(2));
    const DenseOperator drho = dense_state_derivative(CorrelationMatrix::maximally_mixed(2), random_antisym(rng, 4));
    CHECK((dense_sld(rho, drho) - 4.0 * drho).norm() < 1e-12);

    const CorrelationMatrix g = random_full_rank_state(rng, 3);
    const DenseOperator r3 = dense_state(g);
    const DenseOperator d3 = dense_state_derivative(g, random_antisym(rng, 6));
    const DenseOperator l = dense_sld(r3, d3);
    CHECK(sld_residual(r3, d3, l) < 1e-10 * d3.norm());
    CHECK((l - l.adjoint()).norm() < 1e-12);
}

TEST_CASE("dense_sld rejects tangents that leave the support") {
    MatrixXcd rho = MatrixXcd::Zero(2, 2);
    rho(0, 0) = 1.0;
    MatrixXcd drho = MatrixXcd::Zero(2, 2);
    drho(0, 0) = -1.0;
    drho(1, 1) = 1.0;
    // Populating a zero eigenvalue at first order is not a valid tangent.
    CHECK_THROWS_AS(dense_sld(rho, drho), KernelTangent);
    MatrixXcd coherent = MatrixXcd::Zero(2, 2);
    coherent(0, 1) = 1.0;
    coherent(1, 0) = 1.0;
    CHECK_NOTHROW(dense_sld(rho, coherent));
    DenseSldOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(dense_sld(rho, coherent, strict), KernelTangent);
}

TEST_CASE("measurement_fi") {
    Rng rng(5);
    const CorrelationMatrix g = random_full_rank_state(rng, 2);
    const RealAntisym t = random_antisym(rng, 4);
    const DenseOperator rho = dense_state(g);
    const DenseOperator drho = dense_state_derivative(g, t);
    const DenseQfi q = dense_qfi(rho, {drho});

    // Measuring in the SLD eigenbasis saturates the bound.
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(q.slds[0]);
    CHECK(measurement_fi(rho, drho, es.eigenvectors()) == doctest::Approx(q.j_matrix(0, 0)).epsilon(1e-8));

    for (int trial = 0; trial < 100; ++trial)
        CHECK(measurement_fi(rho, drho, random_unitary(rng, 4)) <= q.j_matrix(0, 0) + 1e-10);

    // A commuting family is classical: the computational basis is optimal.
    MatrixXcd diag = MatrixXcd::Zero(2, 2);
    diag(0, 0) = 0.7;
    diag(1, 1) = 0.3;
    MatrixXcd ddiag = MatrixXcd::Zero(2, 2);
    ddiag(0, 0) = 1.0;
    ddiag(1, 1) = -1.0;
    const double classical = 1.0 / 0.7 + 1.0 / 0.3;
    CHECK(measurement_fi(diag, ddiag, MatrixXcd::Identity(2, 2)) == doctest::Approx(classical));
    CHECK(dense_qfi(diag, {ddiag}).j_matrix(0, 0) == doctest::Approx(classical));
}

TEST_CASE("dense_qfi matches the Gaussian formulas") {
    Rng rng(6);
    const CorrelationMatrix g = random_full_rank_state(rng, 3);
    const std::vector<RealAntisym> tangents{random_antisym(rng, 6), random_antisym(rng, 6)};
    const QfimResult fast = qfim(g, tangents);
    const DenseQfi dense = dense_qfi(dense_state(g), {dense_state_derivative(g, tangents[0]),
                                                      dense_state_derivative(g, tangents[1])});
    CHECK((fast.j_matrix - dense.j_matrix).norm() < 1e-8 * dense.j_matrix.norm());
    CHECK((fast.u_matrix - dense.u_matrix).norm() < 1e-8 * dense.j_matrix.norm());
    CHECK((dense_quadratic(fast.slds[0]) - dense.slds[0]).norm() < 1e-8 * dense.slds[0].norm());
}
