// High-throughput mod-N engine for the property grids: dense
// exponent-indexed arrays over the z variables, per-position t-blocks of
// the integrand, string/monomial coefficient extraction, and dense
// verifiers for the congruence systems. Results agree with the sparse
// reference engine (cross-checked in the tests); convolutions are exact
// (single NTT prime with a proven coefficient bound).
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "qkz/hyperqkz.hpp"

namespace qkz {

// Dense exponent grid: uniform per-axis cap, exponent e_a in [0, cap].
struct ZGrid {
  int n = 0;
  int cap = 0;
  std::size_t size = 1;  // (cap+1)^n

  static ZGrid make(int n, int cap);
  std::size_t index(const std::vector<int>& e) const;
};

using DVec = std::vector<std::uint8_t>;  // coefficients mod m, m <= 255

// f mod m with z-only coordinates on a shared grid.
struct DenseSolution {
  int n = 0, l = 0;
  long mod = 0;
  ZGrid grid;
  std::map<Subset, DVec> coords;
};

// Per-variable t-degree of the integrand: k(n-1) + (k-1) + k'(l-1).
long integrand_t_degree(const ModParams& mp, int n, int l);

// All r with 0 <= r_i < integrand_t_degree and N_r < N (resp. N_r == 1),
// in lexicographic order.
std::vector<RSeq> nontrivial_r_list(const ModParams& mp, int n, int l);
std::vector<RSeq> maximal_r_list(const ModParams& mp, int n, int l);

// One (N, kappa, n, l) instance. Building the constructor precomputes the
// n t-blocks (product over s of the z_s-strings with distinguished
// position a) in dense form mod N, plus their string-basis conversions.
class DenseInstance {
 public:
  DenseInstance(const ModParams& mp, int n, int l);

  // f_r mod N (string coefficient times N_r) / f0_r mod N (monomial
  // coefficient, maximal r only).
  DenseSolution solve_mod(const RSeq& r) const;
  DenseSolution solve_kz_mod(const RSeq& r) const;

  // Rough working-set estimate in bytes for feasibility gating.
  static std::size_t estimated_bytes(const ModParams& mp, int n, int l);

  const ModParams& params() const { return mp_; }

  // Test hook: grids with at most this many entries use plain schoolbook
  // convolution instead of the cached-transform path.
  void set_basic_threshold(std::size_t t) { basic_threshold_ = t; }

 private:
  struct Block {  // coefficients of prod_s [t - z_s - *]_* for position a
    long tdeg = 0;
    std::vector<std::uint8_t> mono;  // [d * zsize + zidx], monomial t^d rows
    std::vector<std::uint8_t> str;   // string-basis [t]_d rows
  };

  DVec string_row(int a, long shift, long m) const;    // row of t^shift * block_a at [t]_m
  DVec monomial_row(int a, long shift, long m) const;  // row of t^shift * block_a at t^m
  // Forward transform of one assembly row, memoized across subsets,
  // permutations and targets.  kind 1: [t]_m row of t^e * block_a.  kind 2:
  // the e2-contraction of block_a rows against the two-string coefficients q
  // for orientation tt.  Returned buffers stay alive through the shared_ptr
  // even if the cache is evicted between calls.
  std::shared_ptr<const std::vector<std::uint32_t>> cached_ntt(int kind, int a, long e, int tt,
                                                               long m,
                                                               const std::vector<long>& q) const;

  ModParams mp_;
  int n_ = 0, l_ = 0;
  ZGrid zg_;  // block grid: cap = k (l=1: whole-integrand rows; l=2: per-block)
  std::vector<Block> blocks_;
  std::size_t basic_threshold_ = 2048;
  mutable std::map<std::array<long, 5>, std::shared_ptr<const std::vector<std::uint32_t>>>
      ntt_cache_;
  mutable std::size_t ntt_cache_bytes_ = 0;
};

// Dense congruence checks mod mp.N; each returns true iff every residue
// vanishes. The solution grids must carry enough headroom (margin n+1 is
// allocated by the solvers above).
bool dense_check_symmetric(const DenseSolution& f, const ModParams& mp);
bool dense_check_qkz(const DenseSolution& f, const ModParams& mp);
bool dense_check_singular(const DenseSolution& f);
bool dense_check_kz(const DenseSolution& f, const ModParams& mp);

// Bridges to the sparse reference engine.
DenseSolution dense_from_vector(const VectorPolynomial& v, long mod, int cap);
VectorPolynomial dense_to_vector(const DenseSolution& d);

// Exact convolution helper, exposed for direct testing. Both inputs live on
// `g`; the result lives on a grid with cap 2g.cap. Entries are reduced mod m.
DVec dense_convolve(const DVec& a, const DVec& b, const ZGrid& g, long m);

}  // namespace qkz
