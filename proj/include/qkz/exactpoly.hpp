// Exact multivariate polynomial arithmetic over Z in the variables
// t_1..t_l, z_1..z_n.  This is the reference engine: sparse terms,
// arbitrary-precision coefficients, canonical graded-lex ordering.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qkz {

using Int = mpz_class;
using Rat = mpq_class;

// Ambient variable list: t_1..t_l followed by z_1..z_n, flat indices 0..l+n-1.
struct VarSpace {
  int l = 0;  // count of t variables
  int n = 0;  // count of z variables

  int dim() const { return l + n; }
  bool operator==(const VarSpace&) const = default;

  // 1-based accessors; throw std::invalid_argument on range errors.
  int t_index(int i) const;
  int z_index(int a) const;
  std::string var_name(int flat) const;  // "t1", "z3", ...
};

using Exp = std::vector<std::uint16_t>;

// Graded-lexicographic term order with t_1 > ... > t_l > z_1 > ... > z_n.
// operator() answers "a is ordered before b": higher total degree first,
// ties broken by the larger exponent on the earliest variable.
struct TermOrder {
  bool operator()(const Exp& a, const Exp& b) const;
};

long exp_degree(const Exp& e);

class Polynomial {
 public:
  using TermMap = std::map<Exp, Int, TermOrder>;

  Polynomial() = default;
  explicit Polynomial(VarSpace vs) : vs_(vs) {}
  Polynomial(VarSpace vs, const Int& c);
  Polynomial(VarSpace vs, long c) : Polynomial(vs, Int(c)) {}

  static Polynomial variable(VarSpace vs, int flat);
  static Polynomial t(VarSpace vs, int i) { return variable(vs, vs.t_index(i)); }
  static Polynomial z(VarSpace vs, int a) { return variable(vs, vs.z_index(a)); }

  const VarSpace& space() const { return vs_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  long total_degree() const;    // -1 for the zero polynomial
  long degree_in(int flat) const;

  Int coefficient(const Exp& e) const;  // 0 if the monomial is absent
  void add_term(Exp e, const Int& c);   // accumulate, dropping zeros

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Int& c);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Int& c) { return a *= c; }
  friend Polynomial operator*(const Int& c, Polynomial a) { return a *= c; }

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  std::string to_string() const;  // for diagnostics and witnesses

 private:
  void check_space(const Polynomial& o) const;

  VarSpace vs_;
  TermMap terms_;
};

// Degree-<=1 polynomial with machine-integer coefficients: c0 + sum ci * x_i.
struct LinearForm {
  VarSpace space;
  std::vector<long> coeff;  // size space.dim()
  long constant = 0;

  explicit LinearForm(VarSpace vs) : space(vs), coeff(vs.dim(), 0) {}
  Polynomial to_polynomial() const;
};

// x_var -> x_var + c, exact binomial expansion.
Polynomial substitute_shift(const Polynomial& p, int var, const Int& c);

// x_var -> value of the linear form (which may itself involve x_var).
Polynomial substitute_linear(const Polynomial& p, int var, const LinearForm& f);

// (sigma.p)(z_1,...,z_n) = p(z_{sigma(1)},...,z_{sigma(n)}); sigma is a
// 1-based permutation of 1..n given in one-line notation.
Polynomial permute_z(const Polynomial& p, const std::vector<int>& sigma);

// Coefficient-wise least non-negative residue; zero coefficients dropped.
Polynomial reduce_mod(const Polynomial& p, const Int& N);

// Exact evaluation; point has one rational per flat variable index.
Rat evaluate_rational(const Polynomial& p, const std::vector<Rat>& point);

Polynomial partial_derivative(const Polynomial& p, int var);

// Forget the t-slots of a polynomial that no longer involves any t variable;
// throws std::invalid_argument if some t-exponent is nonzero.
Polynomial project_z(const Polynomial& p);

// Sum of the terms of total degree exactly d.
Polynomial homogeneous_component(const Polynomial& p, long d);

// Binomial coefficient C(m, j) as exact integer (0 outside 0 <= j <= m).
Int binomial(unsigned long m, unsigned long j);

}  // namespace qkz
