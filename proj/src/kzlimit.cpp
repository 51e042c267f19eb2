#include "qkz/kzlimit.hpp"

#include <stdexcept>
#include <string>

namespace qkz {

namespace {

Polynomial linear_t_minus_z(const VarSpace& vs, int i, int a) {
  return Polynomial::t(vs, i) - Polynomial::z(vs, a);
}

Polynomial power(Polynomial base, long e) {
  Polynomial out(base.space(), 1);
  for (long s = 0; s < e; ++s) out *= base;
  return out;
}

// Coefficient of t_1^{r_1} ... t_l^{r_l} as a z-polynomial in the same space.
Polynomial t_monomial_coefficient(const Polynomial& p, const RSeq& r) {
  const VarSpace& vs = p.space();
  Polynomial out(vs);
  for (const auto& [e, c] : p.terms()) {
    bool hit = true;
    for (int i = 0; i < vs.l; ++i)
      if (e[i] != r[i]) {
        hit = false;
        break;
      }
    if (!hit) continue;
    Exp f = e;
    for (int i = 0; i < vs.l; ++i) f[i] = 0;
    out.add_term(std::move(f), c);
  }
  return out;
}

}  // namespace

Polynomial master_polynomial_kz(const ModParams& mp, int n, int l) {
  if (n < 1 || l < 0 || 2 * l > n)
    throw std::invalid_argument("master_polynomial_kz: need 0 <= 2l <= n");
  VarSpace vs{l, n};
  Polynomial phi(vs, 1);
  for (int a = 1; a <= n; ++a)
    for (int i = 1; i <= l; ++i) phi *= power(linear_t_minus_z(vs, i, a), mp.k);
  for (int i = 1; i <= l; ++i)
    for (int j = i + 1; j <= l; ++j)
      phi *= power(Polynomial::t(vs, i) - Polynomial::t(vs, j), mp.kprime);
  return phi;
}

VectorPolynomial integrand_kz(const ModParams& mp, int n, int l) {
  if (n < 1 || l < 0 || 2 * l > n) throw std::invalid_argument("integrand_kz: need 0 <= 2l <= n");
  VarSpace vs{l, n};
  Polynomial tt(vs, 1);
  for (int i = 1; i <= l; ++i)
    for (int j = i + 1; j <= l; ++j)
      tt *= power(Polynomial::t(vs, i) - Polynomial::t(vs, j), mp.kprime);
  VectorPolynomial u(n, l, vs);
  for (const auto& I : all_subsets(n, l)) {
    Polynomial coord(vs);
    for (const auto& tau : all_permutations(l)) {
      Polynomial term = tt;
      for (int i = 1; i <= l; ++i) {
        int ai = I[i - 1], ti = tau[i - 1];
        for (int a = 1; a <= n; ++a) {
          long e = mp.k - (a == ai ? 1 : 0);
          for (int v = 1; v <= l; ++v)
            if (v == ti) term *= power(linear_t_minus_z(vs, v, a), e);
        }
      }
      coord += term;
    }
    u.set(I, coord);
  }
  return u;
}

VectorPolynomial solve_kz_r(const ModParams& mp, int n, int l, const RSeq& r) {
  if ((int)r.size() != l) throw std::invalid_argument("solve_kz_r: |r| != l");
  if (!is_maximal_r(r, mp.N))
    throw std::invalid_argument("solve_kz_r: sequence is not maximal (need r_i == -1 mod N)");
  VectorPolynomial u = integrand_kz(mp, n, l);
  VectorPolynomial f(n, l, VarSpace{0, n});
  for (const auto& [I, p] : u.coords) f.set(I, project_z(t_monomial_coefficient(p, r)));
  return f;
}

VerificationReport verify_kz_mod_n(const VectorPolynomial& f, const ModParams& mp) {
  int n = f.n;
  const VarSpace& vs = f.space;
  VerificationReport rep;
  Polynomial kap(vs, Int(mp.kappa));
  for (int a = 1; a <= n; ++a) {
    Polynomial clear_all(vs, 1);
    for (int s = 1; s <= n; ++s)
      if (s != a) clear_all *= Polynomial::z(vs, a) - Polynomial::z(vs, s);
    VectorPolynomial lhs(n, f.l, vs);
    for (const auto& [I, p] : f.coords)
      lhs.add(I, kap * clear_all * partial_derivative(p, vs.z_index(a)));
    VectorPolynomial rhs(n, f.l, vs);
    for (int s = 1; s <= n; ++s) {
      if (s == a) continue;
      Polynomial part(vs, 1);
      for (int s2 = 1; s2 <= n; ++s2)
        if (s2 != a && s2 != s) part *= Polynomial::z(vs, a) - Polynomial::z(vs, s2);
      rhs += scalar_mul(part, apply_permutation(f, a, s) - f);
    }
    EquationCheck chk;
    chk.equation = "kz a=" + std::to_string(a);
    chk.witness = reduce_mod(lhs - rhs, mp.N);
    chk.pass = chk.witness.is_zero();
    rep.checks.push_back(chk);
  }
  EquationCheck sing;
  sing.equation = "kz singular";
  sing.witness = reduce_mod(apply_e(f), mp.N);
  sing.pass = sing.witness.is_zero();
  rep.checks.push_back(sing);
  return rep;
}

long top_degree_d_r(const ModParams& mp, int n, int l, const RSeq& r) {
  long sum = 0;
  for (long ri : r) sum += ri;
  return (long)n * l * mp.k + (long)l * (l - 1) * mp.kprime / 2 - l - sum;
}

VerificationReport compare_top_degree(const VectorPolynomial& f_qkz, const VectorPolynomial& f_kz,
                                      const ModParams& mp, const RSeq& r) {
  if (!is_maximal_r(r, mp.N))
    throw std::invalid_argument("compare_top_degree: sequence is not maximal");
  long d = top_degree_d_r(mp, f_qkz.n, f_qkz.l, r);
  VectorPolynomial top(f_qkz.n, f_qkz.l, f_qkz.space);
  for (const auto& [I, p] : f_qkz.coords) top.set(I, homogeneous_component(p, d));
  EquationCheck chk;
  chk.equation = "top degree d=" + std::to_string(d);
  chk.witness = top - f_kz;
  chk.pass = chk.witness.is_zero();
  VerificationReport rep;
  rep.checks.push_back(chk);
  return rep;
}

}  // namespace qkz
