#include "qkz/hyperqkz.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qkz {

std::vector<std::vector<int>> all_permutations(int l) {
  std::vector<int> tau(l);
  std::iota(tau.begin(), tau.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(tau);
  } while (std::next_permutation(tau.begin(), tau.end()));
  return out;
}

namespace {

bool is_permutation_of_range(const std::vector<int>& tau, int l) {
  if ((int)tau.size() != l) return false;
  std::vector<bool> seen(l, false);
  for (int v : tau) {
    if (v < 1 || v > l || seen[v - 1]) return false;
    seen[v - 1] = true;
  }
  return true;
}

LinearForm lf_t_minus_z(VarSpace vs, int i, int a, long c) {
  LinearForm L(vs);
  L.coeff[vs.t_index(i)] = 1;
  L.coeff[vs.z_index(a)] = -1;
  L.constant = c;
  return L;
}

LinearForm lf_t_minus_t(VarSpace vs, int i, int j, long c) {
  LinearForm L(vs);
  L.coeff[vs.t_index(i)] = 1;
  L.coeff[vs.t_index(j)] = -1;
  L.constant = c;
  return L;
}

}  // namespace

Polynomial master_polynomial(const ModParams& mp, int n, int l) {
  if (n < 1 || l < 0 || 2 * l > n) throw std::invalid_argument("master_polynomial: need 0 <= 2l <= n");
  VarSpace vs{l, n};
  Polynomial phi(vs, 1);
  for (int a = 1; a <= n; ++a)
    for (int i = 1; i <= l; ++i)
      phi *= pochhammer(lf_t_minus_z(vs, i, a, 0), mp.k, mp.kappa);
  for (int i = 1; i <= l; ++i)
    for (int j = i + 1; j <= l; ++j)
      phi *= pochhammer(lf_t_minus_t(vs, i, j, 1), mp.kprime, mp.kappa);
  return phi;
}

std::vector<SummandFactor> weight_summand_factors(const Subset& I, const std::vector<int>& tau,
                                                  const ModParams& mp, int n) {
  int l = (int)I.size();
  if (!subset_valid(I, n)) throw std::invalid_argument("weight_summand_factors: bad subset");
  if (!is_permutation_of_range(tau, l))
    throw std::invalid_argument("weight_summand_factors: bad permutation");
  VarSpace vs{l, n};
  std::vector<SummandFactor> out;
  for (int i = 1; i <= l; ++i)
    for (int j = i + 1; j <= l; ++j) {
      long c = tau[i - 1] < tau[j - 1] ? 1 : 1 - mp.kappa;
      out.push_back({pochhammer(lf_t_minus_t(vs, i, j, c), mp.kprime, mp.kappa), mp.kprime});
    }
  for (int i = 1; i <= l; ++i) {
    int ai = I[i - 1];
    int ti = tau[i - 1];
    for (int s = 1; s < ai; ++s)
      out.push_back({pochhammer(lf_t_minus_z(vs, ti, s, -mp.kappa), mp.k, mp.kappa), mp.k});
    out.push_back({pochhammer(lf_t_minus_z(vs, ti, ai, -mp.kappa), mp.k - 1, mp.kappa), mp.k - 1});
    for (int s = ai + 1; s <= n; ++s)
      out.push_back({pochhammer(lf_t_minus_z(vs, ti, s, 0), mp.k, mp.kappa), mp.k});
  }
  return out;
}

Polynomial weight_summand(const Subset& I, const std::vector<int>& tau, const ModParams& mp,
                          int n) {
  VarSpace vs{(int)I.size(), n};
  Polynomial u(vs, 1);
  for (const auto& f : weight_summand_factors(I, tau, mp, n)) u *= f.poly;
  return u;
}

Polynomial weight_function(const Subset& I, const ModParams& mp, int n, int l) {
  if ((int)I.size() != l) throw std::invalid_argument("weight_function: |I| != l");
  VarSpace vs{l, n};
  Polynomial w(vs);
  for (const auto& tau : all_permutations(l)) w += weight_summand(I, tau, mp, n);
  return w;
}

VectorPolynomial integrand(const ModParams& mp, int n, int l) {
  if (n < 1 || l < 0 || 2 * l > n) throw std::invalid_argument("integrand: need 0 <= 2l <= n");
  VarSpace vs{l, n};
  VectorPolynomial u(n, l, vs);
  for (const auto& I : all_subsets(n, l)) u.set(I, weight_function(I, mp, n, l));
  return u;
}

SolveResult solve_r(const ModParams& mp, int n, int l, const RSeq& r) {
  if ((int)r.size() != l) throw std::invalid_argument("solve_r: |r| != l");
  VectorPolynomial u = integrand(mp, n, l);
  SolveResult res;
  res.seq = make_rsequence(r, mp.N);
  res.trivial = res.seq.N_r == mp.N;
  res.f = VectorPolynomial(n, l, VarSpace{0, n});
  for (const auto& [I, w] : u.coords)
    res.f.set(I, project_z(difference_r_integral(w, r, mp)));
  return res;
}

namespace {

std::vector<int> swap_sigma(int n, int a) {
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 1);
  std::swap(s[a - 1], s[a]);
  return s;
}

EquationCheck swap_congruence(const VectorPolynomial& f, int a, const Int& N) {
  const VarSpace& vs = f.space;
  Polynomial u = Polynomial::z(vs, a) - Polynomial::z(vs, a + 1);
  VectorPolynomial lhs = scalar_mul(u - Polynomial(vs, 1), permute_z(f, swap_sigma(f.n, a)));
  VectorPolynomial rhs = pr_cleared_action(f, a);
  EquationCheck chk;
  chk.equation = "symm a=" + std::to_string(a);
  chk.witness = reduce_mod(lhs - rhs, N);
  chk.pass = chk.witness.is_zero();
  return chk;
}

}  // namespace

VerificationReport verify_symmetric_qkz(const VectorPolynomial& f, const ModParams& mp) {
  int n = f.n;
  VerificationReport rep;
  for (int a = 1; a + 1 <= n; ++a) rep.checks.push_back(swap_congruence(f, a, mp.N));

  // cyclic equation: f(z_1 - kappa, z_2, ..., z_n) == P^{(mu)} f(z_2, ..., z_n, z_1)
  const VarSpace& vs = f.space;
  VectorPolynomial lhs = substitute_shift(f, vs.z_index(1), Int(-mp.kappa));
  std::vector<int> mu = mu_cycle(n);
  VectorPolynomial rhs = apply_slot_permutation(permute_z(f, mu), mu);
  EquationCheck chk;
  chk.equation = "symm cyclic";
  chk.witness = reduce_mod(lhs - rhs, mp.N);
  chk.pass = chk.witness.is_zero();
  rep.checks.push_back(chk);
  return rep;
}

VerificationReport verify_integrand_symmetry(const ModParams& mp, int n, int l) {
  VectorPolynomial u = integrand(mp, n, l);
  VerificationReport rep;
  for (int a = 1; a + 1 <= n; ++a) {
    EquationCheck chk = swap_congruence(u, a, mp.N);
    chk.equation = "integrand " + chk.equation;
    rep.checks.push_back(chk);
  }
  return rep;
}

VerificationReport verify_qkz(const VectorPolynomial& f, const ModParams& mp) {
  int n = f.n;
  const VarSpace& vs = f.space;
  VerificationReport rep;
  for (int a = 1; a <= n; ++a) {
    ClearedAction act = qkz_cleared_action(f, a, mp);
    VectorPolynomial shifted = substitute_shift(f, vs.z_index(a), Int(-mp.kappa));
    EquationCheck chk;
    chk.equation = "qkz a=" + std::to_string(a);
    chk.witness = reduce_mod(scalar_mul(act.den, shifted) - act.num, mp.N);
    chk.pass = chk.witness.is_zero();
    rep.checks.push_back(chk);
  }
  return rep;
}

VerificationReport verify_singular(const VectorPolynomial& f, const Int& N) {
  EquationCheck chk;
  chk.equation = "singular";
  chk.witness = reduce_mod(apply_e(f), N);
  chk.pass = chk.witness.is_zero();
  VerificationReport rep;
  rep.checks.push_back(chk);
  return rep;
}

VectorPolynomial multiply_by_period(const VectorPolynomial& f, const Polynomial& g,
                                    const RSeq& r, const ModParams& mp) {
  RSequence seq = make_rsequence(r, mp.N);
  const VarSpace& vs = g.space();
  for (int a = 1; a <= vs.n; ++a)
    if (!is_n_constant(g, vs.z_index(a), seq.M_r, mp.kappa))
      throw std::invalid_argument("multiply_by_period: multiplier is not " +
                                  std::to_string(seq.M_r) + "-constant in z" + std::to_string(a));
  return scalar_mul(g, f);
}

}  // namespace qkz
