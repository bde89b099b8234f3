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

#include "fermifisher/gaussian.hpp"
#include "fermifisher/oracle.hpp"
#include "fermifisher/random.hpp"
#include "fermifisher/serialize.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace fermifisher;
using Eigen::Index;
using Eigen::MatrixXd;

namespace {

RealAntisym single(double v) {
    MatrixXd m(2, 2);
    m << 0.0, v, -v, 0.0;
    return RealAntisym(m);
}

}  // namespace

TEST_CASE("gamma_from_omega") {
    CHECK(gamma_from_omega(GeneratorMatrix(RealAntisym::zero(6))).rep().matrix() == MatrixXd::Zero(6, 6));
    const CorrelationMatrix g = gamma_from_omega(GeneratorMatrix(single(2.0 * std::atanh(0.9))));
    CHECK(g.rep()(0, 1) == doctest::Approx(0.9).epsilon(1e-14));

    Rng rng(5);
    const GeneratorMatrix w(random_antisym(rng, 6));
    const CorrelationMatrix gamma = gamma_from_omega(w);
    const MatrixXd dense = oracle::dense_correlation_rep(oracle::dense_state_exp(w));
    CHECK(max_abs(dense - gamma.rep().matrix()) < 1e-10);
}

TEST_CASE("omega_from_gamma") {
    CHECK(omega_from_gamma(CorrelationMatrix::maximally_mixed(2)).rep().matrix() == MatrixXd::Zero(4, 4));
    CHECK(omega_from_gamma(CorrelationMatrix(single(0.5))).rep()(0, 1) ==
          doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
    CHECK(2.0 * std::atanh(0.5) == doctest::Approx(1.0986).epsilon(1e-4));
    CHECK_THROWS_AS(omega_from_gamma(CorrelationMatrix(single(1.0 - 1e-15))), ExtremalState);
    CHECK_THROWS_AS(omega_from_gamma(CorrelationMatrix(single(-1.0))), ExtremalState);

    Rng rng(21);
    for (Index n : {1, 2, 4, 8}) {
        const CorrelationMatrix g = random_full_rank_state(rng, n);
        const CorrelationMatrix back = gamma_from_omega(omega_from_gamma(g));
        CHECK((back.rep().matrix() - g.rep().matrix()).norm() <= 1e-10 * g.rep().matrix().norm());
    }
}

TEST_CASE("CorrelationMatrix rejects unphysical input") {
    CHECK_THROWS_AS(CorrelationMatrix(single(1.1)), NonPhysicalState);
    CHECK_NOTHROW(CorrelationMatrix(single(1.0 + 1e-13)));
    CHECK_THROWS_AS(GeneratorMatrix(single(NAN)), std::invalid_argument);
}

TEST_CASE("partition function") {
    CHECK(partition_function(GeneratorMatrix(RealAntisym::zero(6))) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(partition_function(GeneratorMatrix(single(2.0))) == doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-15));
    CHECK(2.0 * std::cosh(1.0) == doctest::Approx(3.0862).epsilon(1e-4));
    CHECK(log_partition_function(GeneratorMatrix(RealAntisym::zero(6))) ==
          doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-15));

    const double huge = log_partition_function(GeneratorMatrix(single(1000.0)));
    CHECK(std::isfinite(huge));
    CHECK(huge == doctest::Approx(500.0).epsilon(1e-15));
    MatrixXd blocks = MatrixXd::Zero(4, 4);
    blocks(0, 1) = 1000.0;
    blocks(1, 0) = -1000.0;
    blocks(2, 3) = 1000.0;
    blocks(3, 2) = -1000.0;
    CHECK_THROWS_AS(partition_function(GeneratorMatrix(RealAntisym(blocks))), std::overflow_error);

    Rng rng(5);
    const GeneratorMatrix w(random_antisym(rng, 6));
    const double z = partition_function(w);
    CHECK(std::abs(std::log(z) - log_partition_function(w)) < 1e-12);
    const double dense = oracle::dense_exp_unnormalized(w).trace().real();
    CHECK(std::abs(z - dense) <= 1e-10 * z);
}

TEST_CASE("purity") {
    CHECK(purity(CorrelationMatrix::maximally_mixed(3)) == doctest::Approx(0.125).epsilon(1e-15));
    MatrixXd pure = MatrixXd::Zero(4, 4);
    pure(0, 1) = 1.0;
    pure(1, 0) = -1.0;
    pure(2, 3) = -1.0;
    pure(3, 2) = 1.0;
    CHECK(purity(CorrelationMatrix(RealAntisym(pure))) == doctest::Approx(1.0).epsilon(1e-15));

    const CorrelationMatrix g(single(0.6));
    CHECK(purity(g) == doctest::Approx(0.68).epsilon(1e-15));
    const oracle::DenseOperator rho = oracle::dense_state(g);
    CHECK(std::abs(purity(g) - (rho * rho).trace().real()) < 1e-12);

    Rng rng(17);
    for (Index n = 1; n <= 5; ++n) {
        const CorrelationMatrix r = random_full_rank_state(rng, n);
        CHECK(std::abs(purity(r) - purity_from_modes(r)) < 1e-12);
        CHECK(purity(r) > std::pow(0.5, static_cast<double>(n)));
        CHECK(purity(r) <= 1.0);
    }
}

TEST_CASE("wick_four") {
    Rng rng(4);
    const CorrelationMatrix g = random_full_rank_state(rng, 2);
    CHECK(std::abs(wick_four(g, 0, 0, 1, 1) - Complex(1.0, 0.0)) < 1e-15);
    const CorrelationMatrix mixed = CorrelationMatrix::maximally_mixed(2);
    CHECK(std::abs(wick_four(mixed, 0, 1, 2, 3)) == 0.0);
    CHECK_THROWS_AS(wick_four(g, 0, 1, 2, 4), IndexError);
    CHECK_THROWS_AS(wick_four(g, -1, 1, 2, 3), IndexError);

    const oracle::DenseOperator rho = oracle::dense_state(g);
    const std::vector<Index> idx{0, 1, 2, 3};
    CHECK(std::abs(wick_four(g, 0, 1, 2, 3) - oracle::dense_correlator(rho, idx)) < 1e-12);
}

TEST_CASE("wick_2p") {
    Rng rng(6);
    const CorrelationMatrix g = random_full_rank_state(rng, 3);
    const std::vector<Index> pair{1, 4};
    CHECK(wick_2p(g, pair) == Complex(0.0, g.rep()(1, 4)));
    const std::vector<Index> quad{0, 2, 3, 5};
    CHECK(std::abs(wick_2p(g, quad) - wick_four(g, 0, 2, 3, 5)) < 1e-14);

    const oracle::DenseOperator rho = oracle::dense_state(g);
    const std::vector<Index> all{0, 1, 2, 3, 4, 5};
    CHECK(std::abs(wick_2p(g, all) - oracle::dense_correlator(rho, all)) < 1e-10);

    CHECK_THROWS_AS(wick_2p(g, std::vector<Index>{0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(wick_2p(g, std::vector<Index>{2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(wick_2p(g, std::vector<Index>{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(wick_2p(g, std::vector<Index>{0, 6}), IndexError);
}

TEST_CASE("swapping adjacent Majoranas flips the correlator sign") {
    // Tr(rho .. w_a w_b ..) = -Tr(rho .. w_b w_a ..) for a != b
    Rng rng(12);
    for (Index n = 2; n <= 3; ++n) {
        const CorrelationMatrix g = random_full_rank_state(rng, n);
        const oracle::DenseOperator rho = oracle::dense_state(g);
        const std::vector<Index> ordered{0, 1, 2, 3};
        const std::vector<Index> swapped{0, 2, 1, 3};
        CHECK(std::abs(oracle::dense_correlator(rho, swapped) + wick_2p(g, ordered)) < 1e-12);
        // a == b collapses to the shorter correlator
        const std::vector<Index> repeated{0, 2, 2, 3};
        const std::vector<Index> shorter{0, 3};
        CHECK(std::abs(oracle::dense_correlator(rho, repeated) - wick_2p(g, shorter)) < 1e-12);
        CHECK(std::abs(wick_four(g, 0, 2, 2, 3) - wick_2p(g, shorter)) < 1e-14);
    }
}

TEST_CASE("correlation matrices round-trip through JSON bit-exactly") {
    Rng rng(99);
    for (Index n : {1, 3, 6}) {
        const CorrelationMatrix g = random_full_rank_state(rng, n);
        const Json encoded = Json::parse(to_json(g).dump());
        CHECK(encoded.at("modes") == n);
        CHECK(correlation_from_json(encoded).rep().matrix() == g.rep().matrix());
    }
    CHECK_THROWS_AS(antisym_from_json(Json{{"modes", 2}, {"rep", {{0.0, 1.0}, {-1.0, 0.0}}}}),
                    std::invalid_argument);
}
