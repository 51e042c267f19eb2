#include "qkz/exactpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace qkz {

int VarSpace::t_index(int i) const {
  if (i < 1 || i > l) throw std::invalid_argument("t index out of range");
  return i - 1;
}

int VarSpace::z_index(int a) const {
  if (a < 1 || a > n) throw std::invalid_argument("z index out of range");
  return l + a - 1;
}

std::string VarSpace::var_name(int flat) const {
  if (flat < 0 || flat >= dim()) throw std::invalid_argument("variable index out of range");
  if (flat < l) return "t" + std::to_string(flat + 1);
  return "z" + std::to_string(flat - l + 1);
}

long exp_degree(const Exp& e) {
  long d = 0;
  for (auto x : e) d += x;
  return d;
}

bool TermOrder::operator()(const Exp& a, const Exp& b) const {
  const long da = exp_degree(a), db = exp_degree(b);
  if (da != db) return da > db;
  // Same length is guaranteed within one polynomial; compare lexicographically.
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return a.size() > b.size();
}

Polynomial::Polynomial(VarSpace vs, const Int& c) : vs_(vs) {
  if (c != 0) terms_.emplace(Exp(vs.dim(), 0), c);
}

Polynomial Polynomial::variable(VarSpace vs, int flat) {
  if (flat < 0 || flat >= vs.dim()) throw std::invalid_argument("variable index out of range");
  Polynomial p(vs);
  Exp e(vs.dim(), 0);
  e[flat] = 1;
  p.terms_.emplace(std::move(e), 1);
  return p;
}

long Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  // Graded order: the first term carries the maximal total degree.
  return exp_degree(terms_.begin()->first);
}

long Polynomial::degree_in(int flat) const {
  if (flat < 0 || flat >= vs_.dim()) throw std::invalid_argument("variable index out of range");
  long d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, long(e[flat]));
  return d;
}

Int Polynomial::coefficient(const Exp& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Int(0) : it->second;
}

void Polynomial::add_term(Exp e, const Int& c) {
  if (int(e.size()) != vs_.dim()) throw std::invalid_argument("exponent length mismatch");
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(std::move(e), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_space(const Polynomial& o) const {
  if (!(vs_ == o.vs_)) throw std::invalid_argument("variable space mismatch");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_space(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_space(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_space(b);
  Polynomial out(a.vs_);
  Exp e(a.vs_.dim());
  Int prod;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::uint16_t(ea[i] + eb[i]);
      prod = ca * cb;
      out.add_term(e, prod);
    }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Int& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(vs_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

bool Polynomial::operator==(const Polynomial& o) const {
  return vs_ == o.vs_ && terms_ == o.terms_;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Int a = c;
    if (first) {
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool printed = false;
    if (a != 1 || exp_degree(e) == 0) { os << a.get_str(); printed = true; }
    for (int i = 0; i < vs_.dim(); ++i) {
      if (e[i] == 0) continue;
      if (printed) os << "*";
      os << vs_.var_name(i);
      if (e[i] > 1) os << "^" << int(e[i]);
      printed = true;
    }
  }
  return os.str();
}

Polynomial LinearForm::to_polynomial() const {
  Polynomial p(space, Int(constant));
  for (int i = 0; i < space.dim(); ++i)
    if (coeff[i] != 0) p += Polynomial::variable(space, i) * Int(coeff[i]);
  return p;
}

Int binomial(unsigned long m, unsigned long j) {
  if (j > m) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), m, j);
  return r;
}

Polynomial substitute_shift(const Polynomial& p, int var, const Int& c) {
  if (var < 0 || var >= p.space().dim()) throw std::invalid_argument("variable index out of range");
  if (c == 0) return p;
  Polynomial out(p.space());
  // Per term: x^m -> sum_j C(m,j) c^(m-j) x^j.
  for (const auto& [e, coef] : p.terms()) {
    const unsigned long m = e[var];
    Exp f = e;
    Int cpow = 1;  // c^(m-j), built from j=m downward
    for (long j = long(m); j >= 0; --j) {
      f[var] = std::uint16_t(j);
      out.add_term(f, coef * binomial(m, j) * cpow);
      cpow *= c;
    }
  }
  return out;
}

Polynomial substitute_linear(const Polynomial& p, int var, const LinearForm& f) {
  if (var < 0 || var >= p.space().dim()) throw std::invalid_argument("variable index out of range");
  if (!(f.space == p.space())) throw std::invalid_argument("variable space mismatch");
  const long dmax = std::max(p.degree_in(var), 0L);
  // Powers of the replacement, built once.
  std::vector<Polynomial> pw;
  pw.reserve(dmax + 1);
  pw.emplace_back(p.space(), 1L);
  const Polynomial fp = f.to_polynomial();
  for (long j = 1; j <= dmax; ++j) pw.push_back(pw.back() * fp);
  Polynomial out(p.space());
  for (const auto& [e, coef] : p.terms()) {
    Exp rest = e;
    const unsigned long m = rest[var];
    rest[var] = 0;
    Polynomial base(p.space());
    base.add_term(rest, coef);
    out += base * pw[m];
  }
  return out;
}

Polynomial permute_z(const Polynomial& p, const std::vector<int>& sigma) {
  const VarSpace vs = p.space();
  if (int(sigma.size()) != vs.n) throw std::invalid_argument("permutation length mismatch");
  std::vector<bool> seen(vs.n, false);
  for (int v : sigma) {
    if (v < 1 || v > vs.n || seen[v - 1]) throw std::invalid_argument("not a permutation of 1..n");
    seen[v - 1] = true;
  }
  Polynomial out(vs);
  for (const auto& [e, c] : p.terms()) {
    Exp f = e;
    // Argument slot a receives z_{sigma(a)}, so exponent e[a] lands on z_{sigma(a)}.
    for (int a = 1; a <= vs.n; ++a) f[vs.z_index(sigma[a - 1])] = e[vs.z_index(a)];
    out.add_term(std::move(f), c);
  }
  return out;
}

Polynomial reduce_mod(const Polynomial& p, const Int& N) {
  if (N < 1) throw std::invalid_argument("modulus must be positive");
  Polynomial out(p.space());
  Int r;
  for (const auto& [e, c] : p.terms()) {
    mpz_mod(r.get_mpz_t(), c.get_mpz_t(), N.get_mpz_t());
    if (r != 0) out.add_term(e, r);
  }
  return out;
}

Rat evaluate_rational(const Polynomial& p, const std::vector<Rat>& point) {
  if (int(point.size()) != p.space().dim()) throw std::invalid_argument("point dimension mismatch");
  Rat total = 0;
  for (const auto& [e, c] : p.terms()) {
    Rat term(c);
    for (std::size_t i = 0; i < point.size(); ++i)
      for (int j = 0; j < e[i]; ++j) term *= point[i];
    total += term;
  }
  return total;
}

Polynomial partial_derivative(const Polynomial& p, int var) {
  if (var < 0 || var >= p.space().dim()) throw std::invalid_argument("variable index out of range");
  Polynomial out(p.space());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exp f = e;
    f[var] -= 1;
    out.add_term(std::move(f), c * long(e[var]));
  }
  return out;
}

Polynomial homogeneous_component(const Polynomial& p, long d) {
  Polynomial out(p.space());
  for (const auto& [e, c] : p.terms())
    if (exp_degree(e) == d) out.add_term(e, c);
  return out;
}

Polynomial project_z(const Polynomial& p) {
  VarSpace vs{0, p.space().n};
  Polynomial out(vs);
  int l = p.space().l;
  for (const auto& [e, c] : p.terms()) {
    for (int i = 0; i < l; ++i)
      if (e[i] != 0) throw std::invalid_argument("project_z: residual t dependence");
    out.add_term(Exp(e.begin() + l, e.end()), c);
  }
  return out;
}

}  // namespace qkz
