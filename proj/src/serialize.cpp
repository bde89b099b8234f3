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

#include "fermifisher/serialize.hpp"

#include <charconv>
#include <stdexcept>

namespace fermifisher {

using Eigen::Index;
using Eigen::MatrixXd;

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

Json to_json(const MatrixXd &m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixXd matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j.front().size());
    MatrixXd m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Json &row = j[r];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw std::invalid_argument("matrix row " + std::to_string(r) + " has the wrong length");
        for (Index c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                throw std::invalid_argument("matrix entry (" + std::to_string(r) + ", " +
                                            std::to_string(c) + ") is not a number");
            m(r, c) = row[c].get<double>();
        }
    }
    return m;
}

Json to_json(const RealAntisym &a) { return Json{{"modes", a.modes()}, {"rep", to_json(a.matrix())}}; }

RealAntisym antisym_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("rep")) throw std::invalid_argument("expected an object with \"rep\"");
    RealAntisym a(matrix_from_json(j.at("rep")));
    if (j.contains("modes") && j.at("modes").get<Index>() != a.modes())
        throw std::invalid_argument("\"modes\" does not match the size of \"rep\"");
    return a;
}

Json to_json(const CorrelationMatrix &g) { return to_json(g.rep()); }
CorrelationMatrix correlation_from_json(const Json &j) { return CorrelationMatrix(antisym_from_json(j)); }
Json to_json(const GeneratorMatrix &w) { return to_json(w.rep()); }
GeneratorMatrix generator_from_json(const Json &j) { return GeneratorMatrix(antisym_from_json(j)); }

Json to_json(const SldQuadratic &s) {
    return Json{{"kmatrix", to_json(s.kmatrix)}, {"eta", s.eta}, {"singular_pairs", s.singular_pairs}};
}

SldQuadratic sld_from_json(const Json &j) {
    return SldQuadratic{antisym_from_json(j.at("kmatrix")), j.at("eta").get<double>(),
                        j.value("singular_pairs", 0)};
}

Json to_json(const QfimResult &r) {
    Json slds = Json::array();
    for (const auto &s : r.slds) slds.push_back(to_json(s));
    return Json{{"j_matrix", to_json(r.j_matrix)},
                {"u_matrix", to_json(r.u_matrix)},
                {"slds", std::move(slds)},
                {"singular_pairs", r.singular_pairs},
                {"residuals", r.residuals}};
}

}  // namespace fermifisher
