#include "qkz/diffcalc.hpp"

#include <numeric>
#include <stdexcept>

namespace qkz {

namespace {

// Extended Euclid on machine integers; returns gcd, sets x with a*x == g (mod m0).
long mod_inverse(long a, long m) {
  long old_r = a % m, r = m;
  long old_s = 1, s = 0;
  while (r != 0) {
    const long q = old_r / r;
    std::swap(old_r -= q * r, r);
    std::swap(old_s -= q * s, s);
  }
  if (old_r != 1 && old_r != -1) throw std::invalid_argument("not invertible");
  long inv = (old_r == 1 ? old_s : -old_s) % m;
  return inv < 0 ? inv + m : inv;
}

}  // namespace

ModParams compute_params(long N, long kappa) {
  if (N < 3) throw std::invalid_argument("N must be at least 3");
  if (kappa <= 0 || kappa >= N) throw std::invalid_argument("kappa must satisfy 0 < kappa < N");
  if (std::gcd(kappa, N) != 1) throw std::invalid_argument("kappa must be coprime to N");
  const long inv = mod_inverse(kappa, N);
  ModParams mp;
  mp.N = N;
  mp.kappa = kappa;
  mp.k = (N - inv) % N;           // kappa*k == -1 (mod N); nonzero since inv < N
  mp.kprime = (2 * inv) % N;      // kappa*k' == 2 (mod N); nonzero for N >= 3
  return mp;
}

Polynomial pochhammer(const LinearForm& L, long m, long kappa) {
  if (m < 0) throw std::invalid_argument("string length must be non-negative");
  Polynomial out(L.space, 1L);
  const Polynomial base = L.to_polynomial();
  for (long i = 0; i < m; ++i) out *= base - Polynomial(L.space, i * kappa);
  return out;
}

Polynomial pochhammer_t(VarSpace vs, int i, long m, long kappa) {
  LinearForm L(vs);
  L.coeff[vs.t_index(i)] = 1;
  return pochhammer(L, m, kappa);
}

RSequence make_rsequence(const RSeq& r, long N) {
  RSequence s;
  s.r = r;
  s.N_r = n_r(r, N);
  s.M_r = N / s.N_r;
  return s;
}

long n_r(const RSeq& r, long N) {
  if (N < 1) throw std::invalid_argument("modulus must be positive");
  long g = N;
  for (long ri : r) {
    if (ri < 0) throw std::invalid_argument("r entries must be non-negative");
    g = std::gcd(g, ri + 1);
  }
  const long via_gcd = N / g;
  // Cross-check with the lcm form: N_r = lcm_i N/gcd(N, r_i+1).
  long via_lcm = 1;
  for (long ri : r) via_lcm = std::lcm(via_lcm, N / std::gcd(N, ri + 1));
  if (via_gcd != via_lcm) throw std::logic_error("N_r closed forms disagree");
  return via_gcd;
}

bool is_trivial_r(const RSeq& r, long N) { return n_r(r, N) == N; }
bool is_maximal_r(const RSeq& r, long N) { return n_r(r, N) == 1; }

Polynomial StringExpansion::coefficient(const RSeq& m) const {
  auto it = coeff.find(m);
  return it == coeff.end() ? Polynomial(space) : it->second;
}

std::map<long, Polynomial> to_string_basis_var(const Polynomial& p, int var, long kappa) {
  const VarSpace vs = p.space();
  if (var < 0 || var >= vs.dim()) throw std::invalid_argument("variable index out of range");
  const long D = std::max(p.degree_in(var), 0L);

  // Slices of p by the exponent of x = x_var (exponent zeroed out).
  std::vector<Polynomial> slice(D + 1, Polynomial(vs));
  for (const auto& [e, c] : p.terms()) {
    Exp f = e;
    const int d = f[var];
    f[var] = 0;
    slice[d].add_term(std::move(f), c);
  }

  // Integer coefficient rows of [x]_m = sum_j s[m][j] x^j.
  std::vector<std::vector<Int>> s(D + 1);
  s[0] = {Int(1)};
  for (long m = 1; m <= D; ++m) {
    s[m].assign(m + 1, Int(0));
    const Int shift = -Int((m - 1) * kappa);  // multiply by (x - (m-1)kappa)
    for (long j = 0; j < m; ++j) {
      s[m][j + 1] += s[m - 1][j];
      s[m][j] += s[m - 1][j] * shift;
    }
  }

  // Peel strings from the highest degree down; exact since strings are monic.
  std::map<long, Polynomial> out;
  for (long d = D; d >= 0; --d) {
    if (slice[d].is_zero()) continue;
    const Polynomial b = slice[d];
    for (long j = 0; j < d; ++j)
      if (s[d][j] != 0) slice[j] -= b * s[d][j];
    out.emplace(d, b);
  }
  return out;
}

StringExpansion to_string_basis(const Polynomial& p, long kappa) {
  const VarSpace vs = p.space();
  StringExpansion se;
  se.space = vs;
  // Expand variable by variable; keys grow one entry per t-variable.
  std::map<RSeq, Polynomial> work;
  work.emplace(RSeq{}, p);
  for (int i = 1; i <= vs.l; ++i) {
    std::map<RSeq, Polynomial> next;
    for (const auto& [key, poly] : work) {
      for (auto& [m, c] : to_string_basis_var(poly, vs.t_index(i), kappa)) {
        RSeq grown = key;
        grown.push_back(m);
        next.emplace(std::move(grown), std::move(c));
      }
    }
    work = std::move(next);
  }
  se.coeff = std::move(work);
  return se;
}

Polynomial from_string_basis(const StringExpansion& e, long kappa) {
  Polynomial out(e.space);
  for (const auto& [m, c] : e.coeff) {
    if (int(m.size()) != e.space.l) throw std::invalid_argument("string index length mismatch");
    Polynomial term = c;
    for (int i = 1; i <= e.space.l; ++i) term *= pochhammer_t(e.space, i, m[i - 1], kappa);
    out += term;
  }
  return out;
}

Polynomial discrete_derivative(const Polynomial& p, int var, long kappa) {
  return p - substitute_shift(p, var, Int(-kappa));
}

bool is_n_constant(const Polynomial& p, int var, long modulus, long kappa) {
  return reduce_mod(discrete_derivative(p, var, kappa), modulus).is_zero();
}

Polynomial difference_r_integral(const Polynomial& p, const RSeq& r, const ModParams& mp) {
  const VarSpace vs = p.space();
  if (int(r.size()) != vs.l) throw std::invalid_argument("r length must match the t-variable count");
  const RSequence rs = make_rsequence(r, mp.N);
  const StringExpansion se = to_string_basis(p, mp.kappa);
  return se.coefficient(r) * Int(rs.N_r);
}

Polynomial repeated_integral(const Polynomial& p, long r1, long r2, const ModParams& mp) {
  const VarSpace vs = p.space();
  if (vs.l < 2) throw std::invalid_argument("repeated integral needs two t-variables");
  const long N1 = n_r({r1}, mp.N), N2 = n_r({r2}, mp.N);
  auto in_t1 = to_string_basis_var(p, vs.t_index(1), mp.kappa);
  auto it = in_t1.find(r1);
  if (it == in_t1.end()) return Polynomial(vs);
  Polynomial stage = it->second * Int(N1);
  auto in_t2 = to_string_basis_var(stage, vs.t_index(2), mp.kappa);
  auto jt = in_t2.find(r2);
  if (jt == in_t2.end()) return Polynomial(vs);
  return jt->second * Int(N2);
}

std::vector<PeriodGenerator> period_module_generators(const Polynomial& p, const ModParams& mp) {
  const StringExpansion se = to_string_basis(p, mp.kappa);
  std::vector<PeriodGenerator> out;
  for (const auto& [r, c] : se.coeff) {
    const RSequence rs = make_rsequence(r, mp.N);
    if (rs.N_r == mp.N) continue;  // trivial: the integral is 0 mod N
    out.push_back({r, c * Int(rs.N_r), rs.M_r});
  }
  return out;  // map iteration keeps r sorted
}

}  // namespace qkz
