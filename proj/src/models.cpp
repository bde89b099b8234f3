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

#include <cmath>
#include <numbers>
#include <string>

namespace fermifisher::models {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

MatrixXd single_block(double v) {
    MatrixXd m(2, 2);
    m << 0.0, v, -v, 0.0;
    return m;
}

// (tanh(a/2) - tanh(b/2)) / (a - b)
double tanh_half_divided(double a, double b) {
    const double d = a - b;
    const double ca = std::cosh(0.5 * a);
    const double cb = std::cosh(0.5 * b);
    if (!std::isfinite(ca * cb)) return d == 0.0 ? 0.0 : (std::tanh(0.5 * a) - std::tanh(0.5 * b)) / d;
    if (std::abs(d) < 1e-8) return 0.5 / (ca * cb);
    return std::sinh(0.5 * d) / d / (ca * cb);
}

}  // namespace

StateFamily::StateFamily(FamilySpec spec) : spec_(std::move(spec)) {
    std::visit(overloaded{
                   [&](const SingleModeSpec &) {
                       name_ = "single_mode";
                       modes_ = 1;
                       parameter_names_ = {"lambda"};
                       domain_ = {{-1.0, 1.0, true}};
                   },
                   [&](const ThermalSpec &s) {
                       name_ = "thermal";
                       modes_ = s.hamiltonian.modes();
                       parameter_names_ = {"beta"};
                       domain_ = {{0.0, 100.0, true}};
                   },
                   [&](const RotationSpec &s) {
                       name_ = "rotation";
                       modes_ = s.base.modes();
                       if (s.generators.empty())
                           throw std::invalid_argument("rotation family needs at least one generator");
                       for (std::size_t mu = 0; mu < s.generators.size(); ++mu) {
                           if (s.generators[mu].dim() != s.base.rep().dim())
                               throw std::invalid_argument("rotation generator " + std::to_string(mu) +
                                                           " does not match the base dimension");
                           parameter_names_.push_back("theta_" + std::to_string(mu + 1));
                           domain_.push_back({-std::numbers::pi, std::numbers::pi, false});
                       }
                   },
                   [&](const KitaevSpec &s) {
                       if (s.sites < 2) throw std::invalid_argument("kitaev_chain needs at least 2 sites");
                       if (!(s.beta > 0.0)) throw std::invalid_argument("kitaev_chain needs beta > 0");
                       name_ = "kitaev_chain";
                       modes_ = s.sites;
                       parameter_names_ = {"mu", "t", "delta"};
                       domain_ = {{-5.0, 5.0, false}, {-5.0, 5.0, false}, {-5.0, 5.0, false}};
                   },
               },
               spec_);
}

bool StateFamily::contains(std::span<const double> point) const {
    if (point.size() != domain_.size()) return false;
    for (std::size_t i = 0; i < point.size(); ++i)
        if (!domain_[i].contains(point[i])) return false;
    return true;
}

void StateFamily::check_point(std::span<const double> point) const {
    if (point.size() != domain_.size())
        throw DomainError(name_ + ": expected " + std::to_string(domain_.size()) +
                          " parameters, got " + std::to_string(point.size()));
    for (std::size_t i = 0; i < point.size(); ++i)
        if (!domain_[i].contains(point[i]))
            throw DomainError(name_ + ": parameter " + parameter_names_[i] + " = " +
                              std::to_string(point[i]) + " is outside the domain");
}

CorrelationMatrix StateFamily::evaluate(std::span<const double> point) const {
    check_point(point);
    return std::visit(
        overloaded{
            [&](const SingleModeSpec &) { return CorrelationMatrix(RealAntisym(single_block(point[0]))); },
            [&](const ThermalSpec &s) {
                return CorrelationMatrix(tanh_of_i_halved(RealAntisym(point[0] * s.hamiltonian.matrix())));
            },
            [&](const RotationSpec &s) {
                const Index dim = s.base.rep().dim();
                MatrixXd o = MatrixXd::Identity(dim, dim);
                for (std::size_t mu = 0; mu < s.generators.size(); ++mu)
                    o = o * exp_antisym(RealAntisym(point[mu] * s.generators[mu].matrix()));
                return CorrelationMatrix(RealAntisym(o * s.base.rep().matrix() * o.transpose()));
            },
            [&](const KitaevSpec &s) {
                const RealAntisym a =
                    kitaev_majorana_matrix(s.sites, s.boundary, point[0], point[1], point[2]);
                return CorrelationMatrix(tanh_of_i_halved(RealAntisym(s.beta * a.matrix())));
            },
        },
        spec_);
}

std::vector<RealAntisym> StateFamily::analytic_derivatives(std::span<const double> point) const {
    check_point(point);
    return std::visit(
        overloaded{
            [&](const SingleModeSpec &) {
                return std::vector<RealAntisym>{RealAntisym(single_block(1.0))};
            },
            [&](const ThermalSpec &s) {
                const double beta = point[0];
                const CanonicalForm cf = canonical_form(s.hamiltonian);
                const MatrixXd d = cf.rebuild([beta](double a) {
                    const double t = std::tanh(0.5 * beta * a);
                    return 0.5 * a * (1.0 - t * t);
                });
                return std::vector<RealAntisym>{RealAntisym(d)};
            },
            [&](const RotationSpec &s) {
                const Index dim = s.base.rep().dim();
                const MatrixXd gamma = evaluate(point).rep().matrix();
                std::vector<RealAntisym> out;
                MatrixXd prefix = MatrixXd::Identity(dim, dim);
                for (std::size_t mu = 0; mu < s.generators.size(); ++mu) {
                    // d_mu O = (P G_mu P^T) O with P the product of earlier factors.
                    const MatrixXd x = prefix * s.generators[mu].matrix() * prefix.transpose();
                    out.emplace_back(x * gamma - gamma * x);
                    prefix = prefix * exp_antisym(RealAntisym(point[mu] * s.generators[mu].matrix()));
                }
                return out;
            },
            [&](const KitaevSpec &s) {
                const RealAntisym a = kitaev_majorana_matrix(s.sites, s.boundary, point[0], point[1], point[2]);
                const RealAntisym scaled(s.beta * a.matrix());
                std::vector<RealAntisym> out;
                for (int p = 0; p < 3; ++p) {
                    const RealAntisym da = kitaev_majorana_matrix(s.sites, s.boundary, p == 0 ? 1.0 : 0.0,
                                                                  p == 1 ? 1.0 : 0.0, p == 2 ? 1.0 : 0.0);
                    out.push_back(tanh_of_i_halved_derivative(scaled, RealAntisym(s.beta * da.matrix())));
                }
                return out;
            },
        },
        spec_);
}

StateFamily family_single_mode() { return StateFamily(SingleModeSpec{}); }

StateFamily family_thermal(RealAntisym hamiltonian) {
    return StateFamily(ThermalSpec{std::move(hamiltonian)});
}

StateFamily family_rotation(CorrelationMatrix base, std::vector<RealAntisym> generators) {
    return StateFamily(RotationSpec{std::move(base), std::move(generators)});
}

StateFamily family_kitaev_chain(int sites, Boundary boundary, double beta) {
    return StateFamily(KitaevSpec{sites, boundary, beta});
}

RealAntisym kitaev_majorana_matrix(int sites, Boundary boundary, double mu, double t, double delta) {
    if (sites < 2) throw std::invalid_argument("kitaev_chain needs at least 2 sites");
    const Index dim = 2 * sites;
    // c_j = (w_{2j} - i w_{2j+1}) / 2; H = sum_ab M_ab w_a w_b + const.
    auto creation = [&](int j) {
        VectorXcd u = VectorXcd::Zero(dim);
        u(2 * j) = 0.5;
        u(2 * j + 1) = Complex(0.0, 0.5);
        return u;
    };
    auto annihilation = [&](int j) {
        VectorXcd v = VectorXcd::Zero(dim);
        v(2 * j) = 0.5;
        v(2 * j + 1) = Complex(0.0, -0.5);
        return v;
    };
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < sites; ++j) m -= mu * creation(j) * annihilation(j).transpose();
    const int bonds = boundary == Boundary::periodic && sites > 2 ? sites : sites - 1;
    for (int b = 0; b < bonds; ++b) {
        const int j = b;
        const int k = (b + 1) % sites;
        m -= t * (creation(j) * annihilation(k).transpose() + creation(k) * annihilation(j).transpose());
        m += delta * (annihilation(j) * annihilation(k).transpose() + creation(k) * creation(j).transpose());
    }
    // (i/4) A = antisymmetric part of M
    const MatrixXcd anti = 0.5 * (m - m.transpose());
    return RealAntisym(4.0 * anti.imag());
}

RealAntisym finite_diff(const StateFamily &family, std::span<const double> point, std::size_t mu,
                        double h, bool richardson) {
    if (mu >= family.parameters()) throw std::out_of_range("finite_diff: parameter index out of range");
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff: step must be positive");
    std::vector<double> shifted(point.begin(), point.end());
    auto at = [&](double offset) {
        shifted[mu] = point[mu] + offset;
        if (!family.contains(shifted))
            throw DomainError("finite_diff: stencil point leaves the domain of " + family.name());
        return family.evaluate(shifted).rep().matrix();
    };
    MatrixXd d;
    if (richardson)
        d = (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
    else
        d = (at(h) - at(-h)) / (2.0 * h);
    return RealAntisym(d);
}

RealAntisym tanh_of_i_halved_derivative(const RealAntisym &a, const RealAntisym &da) {
    const HermitianEigensystem es = hermitian_eig(a);
    MatrixXcd rotated = es.vectors.adjoint() * da.times_i() * es.vectors;
    for (Index j = 0; j < rotated.rows(); ++j)
        for (Index k = 0; k < rotated.cols(); ++k)
            rotated(j, k) *= tanh_half_divided(es.values(j), es.values(k));
    return RealAntisym((es.vectors * rotated * es.vectors.adjoint()).imag());
}

}  // namespace fermifisher::models
