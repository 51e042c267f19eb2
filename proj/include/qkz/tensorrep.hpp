// Weight spaces of the n-fold tensor power of the two-dimensional sl2
// module: basis v_I indexed by l-subsets of {1..n}, the raising operator,
// permutation operators, and denominator-cleared qKZ operator actions.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "qkz/diffcalc.hpp"
#include "qkz/exactpoly.hpp"

namespace qkz {

// Strictly increasing 1-based member list; the slots in I carry v_2.
using Subset = std::vector<int>;

bool subset_valid(const Subset& I, int n);
Subset subset_swap(const Subset& I, int a, int b);  // exchange membership of slots a, b
Subset subset_apply(const Subset& I, const std::vector<int>& sigma);  // {sigma(a) : a in I}
std::vector<Subset> all_subsets(int n, int l);

// One-line notation (2, 3, ..., n, 1) for the cyclic shift.
std::vector<int> mu_cycle(int n);

struct VectorPolynomial {
  int n = 0;  // tensor slots
  int l = 0;  // weight: members per subset
  VarSpace space;
  std::map<Subset, Polynomial> coords;  // absent subset = zero coordinate

  VectorPolynomial() = default;
  VectorPolynomial(int n_, int l_, VarSpace vs) : n(n_), l(l_), space(vs) {}

  Polynomial coordinate(const Subset& I) const;
  void set(const Subset& I, Polynomial p);
  void add(const Subset& I, const Polynomial& p);
  bool is_zero() const;

  VectorPolynomial& operator+=(const VectorPolynomial& o);
  VectorPolynomial& operator-=(const VectorPolynomial& o);
  friend VectorPolynomial operator+(VectorPolynomial a, const VectorPolynomial& b) { return a += b; }
  friend VectorPolynomial operator-(VectorPolynomial a, const VectorPolynomial& b) { return a -= b; }
  bool operator==(const VectorPolynomial& o) const;
};

VectorPolynomial scalar_mul(const Polynomial& p, const VectorPolynomial& v);
VectorPolynomial reduce_mod(const VectorPolynomial& v, const Int& N);
VectorPolynomial substitute_shift(const VectorPolynomial& v, int var, const Int& c);
VectorPolynomial permute_z(const VectorPolynomial& v, const std::vector<int>& sigma);

// e acts slot-wise by v_2 -> v_1: coordinate at J picks up sum_{a not in J} f_{J+{a}}.
VectorPolynomial apply_e(const VectorPolynomial& v);

// h is diagonal with eigenvalue n - 2l on the whole weight space.
VectorPolynomial apply_h(const VectorPolynomial& v);

// P^{(a,b)}: swap tensor slots a and b.
VectorPolynomial apply_permutation(const VectorPolynomial& v, int a, int b);

// v_I -> v_{sigma I} for a 1-based slot permutation sigma.
VectorPolynomial apply_slot_permutation(const VectorPolynomial& v, const std::vector<int>& sigma);

// ((z_a - z_{a+1}) P^{(a,a+1)} - 1) v: the numerator of P R(z_a - z_{a+1})
// acting on v, using P R(u) = (uP - 1)/(u - 1).
VectorPolynomial pr_cleared_action(const VectorPolynomial& v, int a);

struct ClearedAction {
  VectorPolynomial num;
  Polynomial den;
};

// Numerator and denominator of the qKZ operator K_a(z; kappa) =
// R^{(a,a-1)}(z_a-z_{a-1}-kappa) ... R^{(a,1)}(z_a-z_1-kappa) .
// R^{(a,n)}(z_a-z_n) ... R^{(a,a+1)}(z_a-z_{a+1}), rightmost factor first.
// den * (K_a v) = num as rational identities.
ClearedAction qkz_cleared_action(const VectorPolynomial& v, int a, const ModParams& mp);

struct EquationCheck {
  std::string equation;
  bool pass = false;
  VectorPolynomial witness;  // residue mod N; zero iff pass
};

struct VerificationReport {
  std::vector<EquationCheck> checks;
  bool all_pass() const;
};

}  // namespace qkz
