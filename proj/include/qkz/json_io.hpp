// JSON encoding of polynomials, vector-valued polynomials, string-basis
// expansions and verification reports. Coefficients travel as decimal
// strings so arbitrary-precision values survive the round trip.
#pragma once

#include <json.hpp>

#include "qkz/diffcalc.hpp"
#include "qkz/exactpoly.hpp"
#include "qkz/tensorrep.hpp"

namespace qkz {

using Json = nlohmann::ordered_json;

Json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const Json& j, const VarSpace& vs);

Json vecpoly_to_json(const VectorPolynomial& v);
VectorPolynomial vecpoly_from_json(const Json& j, const VarSpace& vs);

Json string_expansion_to_json(const StringExpansion& se);

Json report_to_json(const VerificationReport& rep);

}  // namespace qkz
