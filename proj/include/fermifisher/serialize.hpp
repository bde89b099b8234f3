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
 * @brief JSON encoding of matrices, SLDs and QFIM results.
 *
 * Antisymmetric matrices are written as {"modes": n, "rep": [[...], ...]}
 * with row-major real entries. Doubles are printed so that they parse back to
 * the identical bit pattern.
 */

#pragma once

#include "fermifisher/sld.hpp"

#include <json.hpp>

#include <string>

namespace fermifisher {

using Json = nlohmann::json;

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

Json to_json(const Eigen::MatrixXd &m);
Eigen::MatrixXd matrix_from_json(const Json &j);

Json to_json(const RealAntisym &a);
/// Accepts {"modes", "rep"}; throws std::invalid_argument on a shape mismatch.
RealAntisym antisym_from_json(const Json &j);

Json to_json(const CorrelationMatrix &g);
CorrelationMatrix correlation_from_json(const Json &j);
Json to_json(const GeneratorMatrix &w);
GeneratorMatrix generator_from_json(const Json &j);

Json to_json(const SldQuadratic &s);
SldQuadratic sld_from_json(const Json &j);

Json to_json(const QfimResult &r);

}  // namespace fermifisher
