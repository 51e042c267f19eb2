#include "qkz/selftest.hpp"

#include <chrono>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include <json.hpp>

#include "qkz/kzlimit.hpp"
#include "qkz/modsolve.hpp"

namespace qkz {

namespace {

using Json = nlohmann::ordered_json;

Polynomial rand_poly(std::mt19937_64& rng, const VarSpace& vs, int terms, int maxdeg) {
  Polynomial p(vs);
  std::uniform_int_distribution<int> deg(0, maxdeg), coef(-50, 50);
  for (int i = 0; i < terms; ++i) {
    Exp e(vs.dim());
    for (auto& x : e) x = (std::uint16_t)deg(rng);
    p.add_term(std::move(e), Int(coef(rng)));
  }
  return p;
}

Polynomial linear(const VarSpace& vs, long c0, const std::vector<long>& zc) {
  LinearForm lf(vs);
  for (int a = 1; a <= vs.n; ++a) lf.coeff[vs.z_index(a)] = zc[a - 1];
  lf.constant = c0;
  return lf.to_polynomial();
}

bool suite_exactpoly(std::ostream&, const SelftestOptions&) {
  std::mt19937_64 rng(101);
  VarSpace vs{1, 2};
  for (int it = 0; it < 20; ++it) {
    Polynomial a = rand_poly(rng, vs, 4, 3), b = rand_poly(rng, vs, 4, 3),
               c = rand_poly(rng, vs, 4, 3);
    if (!((a + b) * c == a * c + b * c)) return false;
    if (!(a * b == b * a)) return false;
    if (!((a * b) * c == a * (b * c))) return false;
    // shifting twice composes additively
    Polynomial s1 = substitute_shift(substitute_shift(a, vs.z_index(1), Int(2)), vs.z_index(1), Int(-5));
    if (!(s1 == substitute_shift(a, vs.z_index(1), Int(-3)))) return false;
  }
  // permutation composition on three z variables
  VarSpace v3{0, 3};
  Polynomial p = rand_poly(rng, v3, 6, 4);
  std::vector<int> s1{2, 3, 1}, s2{2, 1, 3};
  std::vector<int> comp(3);
  // exponents move a -> sigma(a), so applying s1 then s2 composes as s2 . s1
  for (int i = 0; i < 3; ++i) comp[i] = s2[s1[i] - 1];
  return permute_z(permute_z(p, s1), s2) == permute_z(p, comp);
}

bool suite_diffcalc(std::ostream&, const SelftestOptions& opt) {
  std::mt19937_64 rng(202);
  // string concatenation [t]_{a+b} = [t]_a * shift^a([t]_b)
  for (long kap : {1L, 2L, 3L}) {
    VarSpace vs{1, 1};
    for (long a = 0; a <= 4; ++a)
      for (long b = 0; b <= 4; ++b) {
        Polynomial lhs = pochhammer_t(vs, 1, a + b, kap);
        Polynomial tail = substitute_shift(pochhammer_t(vs, 1, b, kap), vs.t_index(1), Int(-a * kap));
        if (!(lhs == pochhammer_t(vs, 1, a, kap) * tail)) return false;
      }
  }
  // round trip through the string basis
  for (int l : {1, 2}) {
    VarSpace vs{l, 2};
    for (int it = 0; it < 8; ++it) {
      Polynomial p = rand_poly(rng, vs, 5, 4);
      if (!(from_string_basis(to_string_basis(p, 2), 2) == p)) return false;
    }
  }
  // difference integrals annihilate discrete differentials mod N
  int reps = opt.grid == "small" ? 10 : 30;
  for (int it = 0; it < reps; ++it) {
    long N = (it % 2) ? 5 : 9;
    ModParams mp = compute_params(N, 2);
    VarSpace vs{1, 2};
    Polynomial p = rand_poly(rng, vs, 5, 6);
    Polynomial dp = discrete_derivative(p, vs.t_index(1), mp.kappa);
    for (const auto& [r, c] : to_string_basis_var(dp, vs.t_index(1), mp.kappa)) {
      (void)c;
      if (!reduce_mod(difference_r_integral(dp, {r}, mp), Int(N)).is_zero()) return false;
    }
  }
  return true;
}

bool suite_tensorrep(std::ostream&, const SelftestOptions&) {
  std::mt19937_64 rng(303);
  // unitarity of the cleared transposition action: (uP - 1)(-uP - 1) = (1 - u^2) id
  for (int n : {2, 3}) {
    VarSpace vs{0, n};
    for (int l = 0; l <= n; ++l) {
      VectorPolynomial v(n, l, vs);
      for (const Subset& I : all_subsets(n, l)) v.set(I, rand_poly(rng, vs, 3, 2));
      for (int a = 1; a + 1 <= n; ++a) {
        Polynomial u = Polynomial::z(vs, a) - Polynomial::z(vs, a + 1);
        VectorPolynomial inner = scalar_mul(u, apply_permutation(v, a, a + 1)) - v;
        VectorPolynomial outer = scalar_mul(Polynomial(vs, Int(0)) - u, apply_permutation(inner, a, a + 1)) - inner;
        VectorPolynomial want = scalar_mul(Polynomial(vs, Int(1)) - u * u, v);
        if (!(outer == want)) return false;
      }
      // [h, e] = 2e on the weight ladder
      if (l >= 1) {
        VectorPolynomial he = apply_h(apply_e(v)), eh = apply_e(apply_h(v));
        VectorPolynomial two_e = apply_e(v) + apply_e(v);
        if (!(he - eh == two_e)) return false;
      }
    }
  }
  return true;
}

bool suite_hyperqkz(std::ostream&, const SelftestOptions& opt) {
  // gold instance A
  {
    ModParams mp = compute_params(3, 2);
    SolveResult res = solve_r(mp, 3, 1, {2});
    VarSpace vz{0, 3};
    Polynomial one(vz, Int(1));
    for (int a = 1; a <= 3; ++a)
      if (!(res.f.coordinate({a}) == one)) return false;
    if (!(verify_symmetric_qkz(res.f, mp).all_pass() && verify_qkz(res.f, mp).all_pass() &&
          verify_singular(res.f, Int(3)).all_pass()))
      return false;
  }
  // gold instance B, with the deliberate-fault hook
  {
    ModParams mp = compute_params(5, 2);
    SolveResult res = solve_r(mp, 3, 1, {4});
    VarSpace vz{0, 3};
    if (!(res.f.coordinate({1}) == linear(vz, 14, {-1, -2, -2}))) return false;
    if (!(res.f.coordinate({2}) == linear(vz, 10, {-2, -1, -2}))) return false;
    if (!(res.f.coordinate({3}) == linear(vz, 6, {-2, -2, -1}))) return false;
    VectorPolynomial f = res.f;
    if (opt.inject_fault) f.add({1}, Polynomial(vz, Int(1)));
    if (!(verify_symmetric_qkz(f, mp).all_pass() && verify_qkz(f, mp).all_pass() &&
          verify_singular(f, Int(5)).all_pass()))
      return false;
  }
  if (opt.grid != "small") {
    for (auto [N, kappa, n] : {std::tuple<long, long, int>{7, 3, 3}, {9, 2, 3}}) {
      ModParams mp = compute_params(N, kappa);
      for (const RSeq& r : nontrivial_r_list(mp, n, 1)) {
        SolveResult res = solve_r(mp, n, 1, r);
        if (!(verify_symmetric_qkz(res.f, mp).all_pass() && verify_qkz(res.f, mp).all_pass() &&
              verify_singular(res.f, Int(N)).all_pass()))
          return false;
      }
    }
    // a weight-2 cell with nonzero solutions
    ModParams mp = compute_params(3, 1);
    for (const RSeq& r : {RSeq{2, 2}, RSeq{2, 5}}) {
      SolveResult res = solve_r(mp, 4, 2, r);
      if (reduce_mod(res.f, Int(3)).is_zero()) return false;
      if (!(verify_symmetric_qkz(res.f, mp).all_pass() && verify_qkz(res.f, mp).all_pass() &&
            verify_singular(res.f, Int(3)).all_pass()))
        return false;
    }
  }
  return true;
}

bool suite_kzlimit(std::ostream&, const SelftestOptions& opt) {
  {
    ModParams mp = compute_params(5, 2);
    VectorPolynomial f0 = solve_kz_r(mp, 3, 1, {4});
    VarSpace vz{0, 3};
    if (!(f0.coordinate({1}) == linear(vz, 0, {-1, -2, -2}))) return false;
    if (!verify_kz_mod_n(f0, mp).all_pass()) return false;
    SolveResult fq = solve_r(mp, 3, 1, {4});
    if (!compare_top_degree(fq.f, f0, mp, {4}).all_pass()) return false;
    if (top_degree_d_r(mp, 3, 1, {4}) != 1) return false;
  }
  {
    ModParams mp = compute_params(3, 2);
    VectorPolynomial f0 = solve_kz_r(mp, 3, 1, {2});
    SolveResult fq = solve_r(mp, 3, 1, {2});
    if (!(verify_kz_mod_n(f0, mp).all_pass() && compare_top_degree(fq.f, f0, mp, {2}).all_pass()))
      return false;
  }
  if (opt.grid != "small") {
    ModParams mp = compute_params(3, 1);
    VectorPolynomial f0 = solve_kz_r(mp, 4, 2, {2, 5});
    SolveResult fq = solve_r(mp, 4, 2, {2, 5});
    if (!(verify_kz_mod_n(f0, mp).all_pass() && compare_top_degree(fq.f, f0, mp, {2, 5}).all_pass()))
      return false;
  }
  return true;
}

bool suite_modsolve(std::ostream&, const SelftestOptions& opt) {
  {
    ModParams mp = compute_params(5, 2);
    DenseInstance inst(mp, 3, 1);
    SolveResult sparse = solve_r(mp, 3, 1, {4});
    if (!(dense_to_vector(inst.solve_mod({4})) == reduce_mod(sparse.f, Int(5)))) return false;
    DenseSolution d = inst.solve_mod({4});
    if (!(dense_check_symmetric(d, mp) && dense_check_qkz(d, mp) && dense_check_singular(d)))
      return false;
  }
  if (opt.grid != "small") {
    ModParams mp = compute_params(3, 1);
    DenseInstance inst(mp, 4, 2);
    SolveResult sparse = solve_r(mp, 4, 2, {2, 5});
    if (!(dense_to_vector(inst.solve_mod({2, 5})) == reduce_mod(sparse.f, Int(3)))) return false;
    VectorPolynomial f0 = solve_kz_r(mp, 4, 2, {2, 5});
    if (!(dense_to_vector(inst.solve_kz_mod({2, 5})) == reduce_mod(f0, Int(3)))) return false;
  }
  return true;
}

}  // namespace

int run_selftest(const SelftestOptions& opt, std::ostream& out, std::ostream& diag) {
  if (opt.grid != "small" && opt.grid != "default")
    throw std::invalid_argument("selftest: grid must be 'small' or 'default'");
  using Suite = std::function<bool(std::ostream&, const SelftestOptions&)>;
  std::vector<std::pair<std::string, Suite>> suites = {
      {"exactpoly", suite_exactpoly}, {"diffcalc", suite_diffcalc},
      {"tensorrep", suite_tensorrep}, {"hyperqkz", suite_hyperqkz},
      {"kzlimit", suite_kzlimit},     {"modsolve", suite_modsolve},
  };
  Json summary;
  summary["command"] = "selftest";
  summary["grid"] = opt.grid;
  summary["suites"] = Json::array();
  bool all = true;
  for (auto& [name, fn] : suites) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = fn(diag, opt);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    diag << "suite " << name << ": " << (pass ? "pass" : "FAIL") << " (" << secs << " s)\n";
    Json s;
    s["name"] = name;
    s["pass"] = pass;
    summary["suites"].push_back(s);
    all = all && pass;
  }
  summary["pass"] = all;
  out << summary.dump() << "\n";
  return all ? 0 : 1;
}

}  // namespace qkz
