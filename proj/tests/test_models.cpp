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

#include "fermifisher/models.hpp"
#include "fermifisher/oracle.hpp"
#include "fermifisher/random.hpp"
#include "fermifisher/sld.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fermifisher;
using namespace fermifisher::models;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

double rel_err(const RealAntisym &a, const RealAntisym &b) {
    return (a.matrix() - b.matrix()).norm() / (1.0 + b.matrix().norm());
}

MatrixXcd hermitian_exp(const MatrixXcd &h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()));
    const double top = es.eigenvalues().maxCoeff();
    return es.eigenvectors() * (es.eigenvalues().array() - top).exp().matrix().asDiagonal() *
           es.eigenvectors().adjoint();
}

// Kitaev Hamiltonian assembled from dense fermion operators.
MatrixXcd kitaev_dense(int sites, Boundary boundary, double mu, double t, double delta) {
    const auto w = oracle::majorana_matrices(sites);
    std::vector<MatrixXcd> c;
    for (int j = 0; j < sites; ++j) c.push_back(0.5 * (w[2 * j] - Complex(0.0, 1.0) * w[2 * j + 1]));
    const Index dim = w[0].rows();
    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < sites; ++j) h -= mu * c[j].adjoint() * c[j];
    const int bonds = boundary == Boundary::periodic && sites > 2 ? sites : sites - 1;
    for (int b = 0; b < bonds; ++b) {
        const int j = b;
        const int k = (b + 1) % sites;
        const MatrixXcd hop = c[j].adjoint() * c[k];
        const MatrixXcd pair = c[j] * c[k];
        h -= t * (hop + hop.adjoint());
        h += delta * (pair + pair.adjoint());
    }
    return h;
}

}  // namespace

TEST_CASE("single mode family") {
    const StateFamily f = family_single_mode();
    CHECK(f.name() == "single_mode");
    CHECK(f.parameters() == 1);
    const std::vector<double> p{0.3};
    CHECK(f.evaluate(p).rep()(0, 1) == 0.3);
    CHECK(f.analytic_derivatives(p)[0](0, 1) == 1.0);
    CHECK_THROWS_AS(f.evaluate(std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(f.evaluate(std::vector<double>{0.1, 0.2}), DomainError);
    CHECK(rel_err(finite_diff(f, p, 0), f.analytic_derivatives(p)[0]) < 1e-12);
}

TEST_CASE("thermal family") {
    Rng rng(3);
    const RealAntisym h = random_antisym(rng, 6);
    const StateFamily f = family_thermal(h);
    CHECK(f.modes() == 3);

    CHECK(max_abs(f.evaluate(std::vector<double>{1e-12}).rep().matrix()) < 1e-11);
    // Each normal mode saturates as tanh(beta a / 2).
    Eigen::VectorXd cold = f.evaluate(std::vector<double>{99.0}).eigenmode_values().cwiseAbs();
    Eigen::VectorXd expected = canonical_form(h).angles;
    for (Index k = 0; k < expected.size(); ++k) expected(k) = std::tanh(0.5 * 99.0 * std::abs(expected(k)));
    std::sort(cold.begin(), cold.end());
    std::sort(expected.begin(), expected.end());
    CHECK((cold - expected).norm() < 1e-12);

    const std::vector<double> p{1.3};
    CHECK(rel_err(f.analytic_derivatives(p)[0], finite_diff(f, p, 0)) < 1e-8);

    // Matches the dense Gibbs state.
    const GeneratorMatrix omega(RealAntisym(1.3 * h.matrix()));
    CHECK(max_abs(oracle::dense_correlation_rep(oracle::dense_state_exp(omega)) - f.evaluate(p).rep().matrix()) <
          1e-10);
    CHECK_THROWS_AS(f.evaluate(std::vector<double>{0.0}), DomainError);
}

TEST_CASE("rotation family") {
    Rng rng(23);
    const CorrelationMatrix base = random_full_rank_state(rng, 3);
    const std::vector<RealAntisym> gens{random_antisym(rng, 6), random_antisym(rng, 6)};
    const StateFamily f = family_rotation(base, gens);
    CHECK(f.parameters() == 2);
    CHECK(f.parameter_names()[1] == "theta_2");

    const std::vector<double> p{0.4, -1.1};
    const CorrelationMatrix g = f.evaluate(p);
    // Spectrum is preserved.
    const Eigen::VectorXd a = g.eigenmode_values();
    const Eigen::VectorXd b = base.eigenmode_values();
    CHECK((a - b).norm() < 1e-12);
    const auto exact = f.analytic_derivatives(p);
    for (std::size_t mu = 0; mu < 2; ++mu) CHECK(rel_err(exact[mu], finite_diff(f, p, mu)) < 1e-8);

    // A zero generator has zero derivative; the mixed state is invariant.
    const StateFamily frozen = family_rotation(base, {RealAntisym::zero(6)});
    CHECK(frozen.analytic_derivatives(std::vector<double>{0.2})[0].matrix().norm() == 0.0);
    const StateFamily trivial = family_rotation(CorrelationMatrix::maximally_mixed(3), gens);
    CHECK(trivial.evaluate(p).rep().matrix().norm() == 0.0);

    // Non-commuting rotations have non-zero curvature; compare with dense.
    const QfimResult r = qfim(g, exact);
    const oracle::DenseQfi dense = oracle::dense_qfi(
        oracle::dense_state(g),
        {oracle::dense_state_derivative(g, exact[0]), oracle::dense_state_derivative(g, exact[1])});
    CHECK(std::abs(r.u_matrix(0, 1)) > 1e-3);
    CHECK(std::abs(r.u_matrix(0, 1) - dense.u_matrix(0, 1)) < 1e-8 * std::abs(dense.u_matrix(0, 1)));
    CHECK((r.j_matrix - dense.j_matrix).norm() < 1e-8 * dense.j_matrix.norm());

    CHECK_THROWS_AS(family_rotation(base, {}), std::invalid_argument);
    CHECK_THROWS_AS(family_rotation(base, {RealAntisym::zero(4)}), std::invalid_argument);
    CHECK(f.contains(std::vector<double>{std::numbers::pi, -std::numbers::pi}));
}

TEST_CASE("kitaev Majorana matrix matches the dense Hamiltonian") {
    const auto check = [](int sites, Boundary boundary, double mu, double t, double delta) {
        const RealAntisym a = kitaev_majorana_matrix(sites, boundary, mu, t, delta);
        const auto w = oracle::majorana_matrices(sites);
        const Index dim = w[0].rows();
        MatrixXcd quad = MatrixXcd::Zero(dim, dim);
        for (Index j = 0; j < a.dim(); ++j)
            for (Index k = 0; k < a.dim(); ++k) quad += Complex(0.0, 0.25 * a(j, k)) * w[j] * w[k];
        MatrixXcd h = kitaev_dense(sites, boundary, mu, t, delta);
        const MatrixXcd id = MatrixXcd::Identity(dim, dim);
        h -= h.trace() / static_cast<double>(dim) * id;
        return (quad - h).norm();
    };
    CHECK(check(2, Boundary::open, 0.7, 1.1, 0.4) < 1e-12);
    CHECK(check(3, Boundary::open, -1.2, 0.5, 2.0) < 1e-12);
    CHECK(check(4, Boundary::periodic, 0.3, -0.8, 0.9) < 1e-12);
    CHECK(check(2, Boundary::periodic, 0.3, -0.8, 0.9) < 1e-12);

    // t = delta = 0 decouples the sites: one 2x2 block per site.
    const RealAntisym onsite = kitaev_majorana_matrix(3, Boundary::open, 1.5, 0.0, 0.0);
    for (Index j = 0; j < 3; ++j) {
        CHECK(std::abs(onsite(2 * j, 2 * j + 1)) == doctest::Approx(1.5));
        for (Index k = 0; k < 6; ++k)
            if (k / 2 != j) CHECK(onsite(2 * j, k) == 0.0);
    }
    CHECK_THROWS_AS(kitaev_majorana_matrix(1, Boundary::open, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("kitaev chain family") {
    const StateFamily f = family_kitaev_chain(3, Boundary::open, 2.0);
    CHECK(f.parameters() == 3);
    CHECK(f.parameter_names()[2] == "delta");
    const std::vector<double> p{0.5, 1.0, 0.7};
    const auto exact = f.analytic_derivatives(p);
    for (std::size_t mu = 0; mu < 3; ++mu) CHECK(rel_err(exact[mu], finite_diff(f, p, mu)) < 1e-8);

    // Thermal state and QFIM agree with a dense Gibbs state built from scratch.
    auto rho_at = [&](const std::vector<double> &q) {
        const MatrixXcd e = hermitian_exp(-2.0 * kitaev_dense(3, Boundary::open, q[0], q[1], q[2]));
        return MatrixXcd(e / e.trace());
    };
    const MatrixXcd rho = rho_at(p);
    CHECK(max_abs(oracle::dense_correlation_rep(rho) - f.evaluate(p).rep().matrix()) < 1e-10);

    std::vector<oracle::DenseOperator> drhos;
    const double h = 1e-4;
    for (std::size_t mu = 0; mu < 3; ++mu) {
        auto shifted = [&](double s) {
            std::vector<double> q = p;
            q[mu] += s;
            return rho_at(q);
        };
        drhos.push_back((-shifted(2 * h) + 8.0 * shifted(h) - 8.0 * shifted(-h) + shifted(-2 * h)) / (12.0 * h));
    }
    const oracle::DenseQfi dense = oracle::dense_qfi(rho, drhos);
    const QfimResult r = qfim(f.evaluate(p), exact);
    CHECK((r.j_matrix - dense.j_matrix).norm() < 1e-6 * dense.j_matrix.norm());
    CHECK((r.u_matrix - dense.u_matrix).norm() < 1e-6 * dense.j_matrix.norm());

    CHECK_THROWS_AS(family_kitaev_chain(1, Boundary::open, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(family_kitaev_chain(3, Boundary::open, 0.0), std::invalid_argument);
}

TEST_CASE("finite_diff") {
    // The single mode family is linear, so both stencils are exact.
    const StateFamily f = family_single_mode();
    for (bool richardson : {false, true})
        CHECK(finite_diff(f, std::vector<double>{0.2}, 0, 1e-3, richardson)(0, 1) ==
              doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(finite_diff(f, std::vector<double>{0.9999}, 0, 1e-3), DomainError);
    CHECK_THROWS_AS(finite_diff(f, std::vector<double>{0.2}, 1), std::out_of_range);
    CHECK_THROWS_AS(finite_diff(f, std::vector<double>{0.2}, 0, 0.0), std::invalid_argument);

    // Central differences are second order: halving h quarters the error.
    Rng rng(8);
    const StateFamily thermal = family_thermal(random_antisym(rng, 4));
    const std::vector<double> p{0.8};
    const RealAntisym exact = thermal.analytic_derivatives(p)[0];
    const double e1 = rel_err(finite_diff(thermal, p, 0, 1e-2, false), exact);
    const double e2 = rel_err(finite_diff(thermal, p, 0, 5e-3, false), exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("every family stays physical on a 10-point-per-axis grid") {
    Rng rng(19);
    const std::vector<StateFamily> families{
        family_single_mode(),
        family_thermal(random_antisym(rng, 6, 2.0)),
        family_rotation(random_full_rank_state(rng, 3), {random_antisym(rng, 6), random_antisym(rng, 6)}),
        family_kitaev_chain(4, Boundary::periodic, 3.0),
    };
    for (const StateFamily &f : families) {
        const std::size_t d = f.parameters();
        std::size_t total = 1;
        for (std::size_t a = 0; a < d; ++a) total *= 10;
        double worst = 0.0;
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::vector<double> p(d);
            std::size_t rest = flat;
            for (std::size_t a = 0; a < d; ++a) {
                const Interval &box = f.domain()[a];
                const double step = static_cast<double>(rest % 10);
                rest /= 10;
                // Open intervals are sampled at interior points.
                p[a] = box.open ? box.lower + (box.upper - box.lower) * (step + 0.5) / 10.0
                                : box.lower + (box.upper - box.lower) * step / 9.0;
            }
            worst = std::max(worst, f.evaluate(p).eigenmode_values().cwiseAbs().maxCoeff());
        }
        CAPTURE(f.name());
        CHECK(worst <= 1.0 + 1e-12);
    }
}
