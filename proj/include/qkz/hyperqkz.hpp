// The core construction: master polynomial, weight summands as explicit
// string products, the vector-valued integrand U(t,z), the difference
// r-integral solver, and the congruence verifiers for the symmetric qKZ
// equations, the plain qKZ equations, and the singular-vector property.
#pragma once

#include <vector>

#include "qkz/diffcalc.hpp"
#include "qkz/tensorrep.hpp"

namespace qkz {

// One-line notations of S_l in lexicographic order; S_0 = { () }.
std::vector<std::vector<int>> all_permutations(int l);

// Phi = prod_{a<=n} prod_{i<=l} [t_i - z_a]_k * prod_{i<j} [t_i - t_j + 1]_{k'}
Polynomial master_polynomial(const ModParams& mp, int n, int l);

struct SummandFactor {
  Polynomial poly;
  long length;  // string length: k', k, or k-1
};

// The string factors of U_I^tau, in construction order: first the
// t-t strings over pairs i<j ([t_i-t_j+1]_{k'} if tau(i)<tau(j), else
// [t_i-t_j+1-kappa]_{k'}), then per i the z-strings attached to a_i:
// [t_{tau(i)}-z_s-kappa]_k for s<a_i, [t_{tau(i)}-z_{a_i}-kappa]_{k-1},
// and [t_{tau(i)}-z_s]_k for s>a_i.
std::vector<SummandFactor> weight_summand_factors(const Subset& I, const std::vector<int>& tau,
                                                  const ModParams& mp, int n);

Polynomial weight_summand(const Subset& I, const std::vector<int>& tau, const ModParams& mp,
                          int n);

// W_I = sum over tau of U_I^tau.
Polynomial weight_function(const Subset& I, const ModParams& mp, int n, int l);

// U(t,z) = sum_I W_I(t,z) v_I over all l-subsets of {1..n}.
VectorPolynomial integrand(const ModParams& mp, int n, int l);

struct SolveResult {
  VectorPolynomial f;  // z-only coordinates
  RSequence seq;
  bool trivial = false;  // N_r == N: the result is 0 mod N
};

// f_r = {U}^t_r, the coordinate-wise difference r-integral of the integrand.
SolveResult solve_r(const ModParams& mp, int n, int l, const RSeq& r);

// For a = 1..n-1 the cleared swap congruence
//   (z_a - z_{a+1} - 1) f(..., z_{a+1}, z_a, ...)
//     == ((z_a - z_{a+1}) P^{(a,a+1)} - 1) f(z)  (mod N),
// and the cyclic equation f(z_1-kappa, z_2, ..., z_n) == P^{(mu)} f(mu z).
VerificationReport verify_symmetric_qkz(const VectorPolynomial& f, const ModParams& mp);

// Swap congruences at the level of the integrand, jointly in t and z.
VerificationReport verify_integrand_symmetry(const ModParams& mp, int n, int l);

// den_a * f(..., z_a - kappa, ...) == num_a(f) (mod N) for every a,
// with num/den from qkz_cleared_action.
VerificationReport verify_qkz(const VectorPolynomial& f, const ModParams& mp);

// e f == 0 (mod N).
VerificationReport verify_singular(const VectorPolynomial& f, const Int& N);

// g * f for g an M_r-constant in every z variable; throws
// std::invalid_argument naming the offending variable otherwise.
VectorPolynomial multiply_by_period(const VectorPolynomial& f, const Polynomial& g,
                                    const RSeq& r, const ModParams& mp);

}  // namespace qkz
