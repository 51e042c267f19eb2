#include "qkz/json_io.hpp"

#include <stdexcept>

namespace qkz {

Json poly_to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json t;
    t["exp"] = e;
    t["coef"] = c.get_str();
    terms.push_back(std::move(t));
  }
  return terms;
}

Polynomial poly_from_json(const Json& j, const VarSpace& vs) {
  if (!j.is_array()) throw std::invalid_argument("poly_from_json: expected array");
  Polynomial p(vs);
  for (const auto& t : j) {
    Exp e = t.at("exp").get<Exp>();
    if (e.size() != (size_t)(vs.l + vs.n))
      throw std::invalid_argument("poly_from_json: exponent length mismatch");
    Int c(t.at("coef").get<std::string>());
    p.add_term(e, c);
  }
  return p;
}

Json vecpoly_to_json(const VectorPolynomial& v) {
  Json j;
  j["n"] = v.n;
  j["l"] = v.l;
  Json coords = Json::array();
  for (const auto& [I, p] : v.coords) {
    Json c;
    c["I"] = I;
    c["poly"] = poly_to_json(p);
    coords.push_back(std::move(c));
  }
  j["coords"] = std::move(coords);
  return j;
}

VectorPolynomial vecpoly_from_json(const Json& j, const VarSpace& vs) {
  VectorPolynomial v(j.at("n").get<int>(), j.at("l").get<int>(), vs);
  for (const auto& c : j.at("coords")) {
    Subset I = c.at("I").get<Subset>();
    v.set(I, poly_from_json(c.at("poly"), vs));
  }
  return v;
}

Json string_expansion_to_json(const StringExpansion& se) {
  Json arr = Json::array();
  for (const auto& [m, p] : se.coeff) {
    Json t;
    t["m"] = m;
    t["coef"] = poly_to_json(p);
    arr.push_back(std::move(t));
  }
  return arr;
}

Json report_to_json(const VerificationReport& rep) {
  Json j;
  j["pass"] = rep.all_pass();
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json jc;
    jc["equation"] = c.equation;
    jc["pass"] = c.pass;
    jc["witness"] = vecpoly_to_json(c.witness);
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace qkz
