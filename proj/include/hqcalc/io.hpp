#pragma once

/**
 * @file io.hpp
 * @brief JSON forms of quaternions, operators, functions and results.
 *
 *   quaternion  [s0, s1, s2, s3]
 *   unit        [j1, j2, j3]
 *   operator    {"kind":"diagonal","entries":[q, ...]}
 *               {"kind":"poly_family","M":[[...],...],"p":[[c0,...] x4]}
 *   function    {"kind":"rational","p":[...],"q":[...]}
 *               {"kind":"regularizer","n":3}
 *               {"kind":"monomial","degree":k}
 * Functions may also carry "class", "theta", "coeff" and "side".
 * Malformed input raises ConfigError.
 */

#include <optional>
#include <string>

#include "json.hpp"

#include "hqcalc/calculus.hpp"

namespace hqcalc {

using Json = nlohmann::json;

Json to_json(const Quat& q);
Quat quat_from_json(const Json& j);
Json to_json(const Unit& u);
Unit unit_from_json(const Json& j);
/// "j1,j2,j3" as used on the command line.
Unit parse_unit(const std::string& s);

CommutingOperator operator_from_json(const Json& j);

/// Parses and certifies. Without "class" the first admissible of
/// PsiQ, Psi, F is taken.
CertifiedFunction function_from_json(const Json& j);

Json to_json(const QMat& m);
QMat qmat_from_json(const Json& j);
Json to_json(const DecayCertificate& c);
Json to_json(const CalculusResult& r);
Json to_json(const SpectrumReport& s);

Json read_json_file(const std::string& path);

} // namespace hqcalc
