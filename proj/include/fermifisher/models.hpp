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
 * @brief Parameterized families of Gaussian states and their tangents.
 *
 * Families are plain values: a spec variant plus derived metadata. The CLI
 * builds them by name from a JSON config.
 */

#pragma once

#include "fermifisher/gaussian.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fermifisher::models {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Interval {
    double lower;
    double upper;
    /// Endpoints excluded.
    bool open = false;

    bool contains(double x) const {
        return open ? (x > lower && x < upper) : (x >= lower && x <= upper);
    }
};

/// Single mode with gamma = lambda.
struct SingleModeSpec {};

/// Gamma(beta) = tanh(i beta A / 2).
struct ThermalSpec {
    RealAntisym hamiltonian;
};

/// Gamma(lambda) = O Gamma0 O^T with O = exp(l1 G1) ... exp(ld Gd).
struct RotationSpec {
    CorrelationMatrix base;
    std::vector<RealAntisym> generators;
};

enum class Boundary { open, periodic };

/// Thermal state of the Kitaev wire
///   H = -mu sum_j (n_j - 1/2) - t sum_j (c_j^+ c_{j+1} + h.c.)
///       + delta sum_j (c_j c_{j+1} + h.c.)
/// at inverse temperature beta, parameters (mu, t, delta). The periodic
/// bond closes with the same sign as the bulk bonds.
struct KitaevSpec {
    int sites;
    Boundary boundary = Boundary::open;
    double beta = 1.0;
};

using FamilySpec = std::variant<SingleModeSpec, ThermalSpec, RotationSpec, KitaevSpec>;

class StateFamily {
public:
    explicit StateFamily(FamilySpec spec);

    const std::string &name() const { return name_; }
    Eigen::Index modes() const { return modes_; }
    std::size_t parameters() const { return parameter_names_.size(); }
    const std::vector<std::string> &parameter_names() const { return parameter_names_; }
    const std::vector<Interval> &domain() const { return domain_; }
    const FamilySpec &spec() const { return spec_; }

    bool contains(std::span<const double> point) const;
    /// Throws DomainError when the point is outside the declared domain.
    CorrelationMatrix evaluate(std::span<const double> point) const;
    /// One tangent (real representative of dGamma) per parameter.
    std::vector<RealAntisym> analytic_derivatives(std::span<const double> point) const;

private:
    void check_point(std::span<const double> point) const;

    FamilySpec spec_;
    std::string name_;
    Eigen::Index modes_ = 0;
    std::vector<std::string> parameter_names_;
    std::vector<Interval> domain_;
};

StateFamily family_single_mode();
StateFamily family_thermal(RealAntisym hamiltonian);
StateFamily family_rotation(CorrelationMatrix base, std::vector<RealAntisym> generators);
/// Throws std::invalid_argument when sites < 2.
StateFamily family_kitaev_chain(int sites, Boundary boundary, double beta);

/// Real antisymmetric A with H = (i/4) w^T A w + const for the Kitaev wire.
RealAntisym kitaev_majorana_matrix(int sites, Boundary boundary, double mu, double t, double delta);

/// Central difference along parameter mu; with richardson, the 4-point
/// fourth-order stencil. Throws DomainError if a stencil point leaves the domain.
RealAntisym finite_diff(const StateFamily &family, std::span<const double> point, std::size_t mu,
                        double h = 1e-4, bool richardson = true);

/// Derivative of tanh(i A / 2) along dA, by divided differences in the
/// eigenbasis of i A.
RealAntisym tanh_of_i_halved_derivative(const RealAntisym &a, const RealAntisym &da);

}  // namespace fermifisher::models
