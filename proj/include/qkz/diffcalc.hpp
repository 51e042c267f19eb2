// Difference calculus with step kappa modulo N: Pochhammer strings, the
// string basis of Z[t,z] over Z[z], discrete derivatives, N-constants,
// difference r-integrals and period modules.
#pragma once

#include <map>
#include <vector>

#include "qkz/exactpoly.hpp"

namespace qkz {

struct ModParams {
  long N = 0;       // modulus, >= 3
  long kappa = 0;   // step, 0 < kappa < N, gcd(kappa, N) = 1
  long k = 0;       // unique 0 < k < N with kappa*k == -1 (mod N)
  long kprime = 0;  // unique 0 < k' < N with kappa*k' == 2 (mod N)
};

// Throws std::invalid_argument if N < 3 (no k' exists for N <= 2, since
// 2 == 0 there), kappa is out of range, or gcd(kappa, N) != 1.
ModParams compute_params(long N, long kappa);

// [L]_m = prod_{i=1}^{m} (L - (i-1)kappa); [L]_0 = 1.
Polynomial pochhammer(const LinearForm& L, long m, long kappa);
Polynomial pochhammer_t(VarSpace vs, int i, long m, long kappa);  // [t_i]_m

// Exponent sequences r = (r_1..r_l) over the t-variables.
using RSeq = std::vector<long>;

struct RSequence {
  RSeq r;
  long N_r = 0;  // least m > 0 with m*(r_i+1) == 0 (mod N) for every i
  long M_r = 0;  // N / N_r
};

RSequence make_rsequence(const RSeq& r, long N);
long n_r(const RSeq& r, long N);
bool is_trivial_r(const RSeq& r, long N);  // N_r == N
bool is_maximal_r(const RSeq& r, long N);  // N_r == 1

// p = sum_m coeff[m](z) * [t_1]_{m_1} ... [t_l]_{m_l}; absent key = zero.
struct StringExpansion {
  VarSpace space;
  std::map<RSeq, Polynomial> coeff;

  Polynomial coefficient(const RSeq& m) const;
};

StringExpansion to_string_basis(const Polynomial& p, long kappa);
Polynomial from_string_basis(const StringExpansion& e, long kappa);

// Expansion in [x]_m for a single flat variable index; coefficients may
// still involve every other variable.
std::map<long, Polynomial> to_string_basis_var(const Polynomial& p, int var, long kappa);

// D_x p = p(x) - p(x - kappa).
Polynomial discrete_derivative(const Polynomial& p, int var, long kappa);

// Whether D_var p == 0 modulo `modulus`.
bool is_n_constant(const Polynomial& p, int var, long modulus, long kappa);

// {p}^t_r = N_r * c_r(z), the string coefficient at r scaled by N_r.
Polynomial difference_r_integral(const Polynomial& p, const RSeq& r, const ModParams& mp);

// {{p}^{t_1}_{r1}}^{t_2}_{r2}; requires l >= 2.
Polynomial repeated_integral(const Polynomial& p, long r1, long r2, const ModParams& mp);

struct PeriodGenerator {
  RSeq r;
  Polynomial value;  // {p}_r
  long modulus;      // M_r, the constancy modulus for admissible multipliers
};

// One generator per non-trivial r in p's string support, sorted by r.
std::vector<PeriodGenerator> period_module_generators(const Polynomial& p, const ModParams& mp);

}  // namespace qkz
