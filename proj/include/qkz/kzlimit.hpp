// Companion construction for the KZ differential equations modulo N:
// the homogeneous master polynomial, its plain-symmetrized integrand,
// the monomial-coefficient solver for maximal sequences, the mod-N KZ
// verifier, and the top-degree comparison against the difference-equation
// solutions.
#pragma once

#include "qkz/hyperqkz.hpp"

namespace qkz {

// Phi0 = prod_{a,i} (t_i - z_a)^k * prod_{i<j} (t_i - t_j)^{k'},
// homogeneous of degree n l k + l(l-1)k'/2.
Polynomial master_polynomial_kz(const ModParams& mp, int n, int l);

// Coordinate at I: sum over tau of Phi0 with the exponent of
// (t_{tau(i)} - z_{a_i}) lowered to k-1 for each i.
VectorPolynomial integrand_kz(const ModParams& mp, int n, int l);

// f0_r: coefficient of the monomial t_1^{r_1} ... t_l^{r_l} in the integrand,
// coordinate-wise. Only maximal sequences (every r_i == -1 mod N) are
// accepted; others throw std::invalid_argument. No N_r factor is applied.
VectorPolynomial solve_kz_r(const ModParams& mp, int n, int l, const RSeq& r);

// Cleared KZ congruences
//   kappa * prod_{s != a} (z_a - z_s) * df/dz_a
//     == sum_{s != a} prod_{s' != a,s} (z_a - z_{s'}) (P^{(a,s)} - 1) f (mod N)
// for each a, plus the singular-vector congruence e f == 0 (mod N).
VerificationReport verify_kz_mod_n(const VectorPolynomial& f, const ModParams& mp);

// d_r = n l k + l(l-1)k'/2 - l - sum r_i.
long top_degree_d_r(const ModParams& mp, int n, int l, const RSeq& r);

// Exact coordinate-wise equality of the degree-d_r homogeneous part of f_qkz
// with f_kz; requires a maximal r.
VerificationReport compare_top_degree(const VectorPolynomial& f_qkz, const VectorPolynomial& f_kz,
                                      const ModParams& mp, const RSeq& r);

}  // namespace qkz
