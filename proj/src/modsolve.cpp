#include "qkz/modsolve.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <tuple>

namespace qkz {

namespace {

using std::size_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

// NTT prime with 2^25 | p-1; primitive root 3. Convolutions are exact as
// long as every true coefficient stays below p, which we assert per call.
constexpr u64 kNttP = 167772161;
constexpr u64 kNttG = 3;

long modpow(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = (long)((u64)r * b % (u64)m);
    b = (long)((u64)b * b % (u64)m);
    e >>= 1;
  }
  return r;
}

long normal(long v, long m) {
  v %= m;
  return v < 0 ? v + m : v;
}

std::vector<int> decompose(size_t idx, const ZGrid& g) {
  std::vector<int> e(g.n);
  size_t base = g.cap + 1;
  for (int a = g.n - 1; a >= 0; --a) {
    e[a] = (int)(idx % base);
    idx /= base;
  }
  return e;
}

size_t stride_of(const ZGrid& g, int axis0) {  // 0-based axis
  size_t s = 1;
  for (int a = g.n - 1; a > axis0; --a) s *= (size_t)(g.cap + 1);
  return s;
}

bool vec_zero(const DVec& v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

void add_scaled(DVec& dst, const DVec& src, long c, long m) {
  c = normal(c, m);
  if (c == 0) return;
  for (size_t i = 0; i < dst.size(); ++i)
    dst[i] = (std::uint8_t)(((u64)dst[i] + (u64)c * src[i]) % (u64)m);
}

// Copy into a grid with a larger cap (same n).
DVec embed(const DVec& v, const ZGrid& gs, const ZGrid& gd) {
  if (gs.n != gd.n || gs.cap > gd.cap) throw std::logic_error("embed: bad grids");
  DVec out(gd.size, 0);
  std::vector<int> e(gs.n, 0);
  for (size_t i = 0; i < gs.size; ++i) {
    if (v[i]) {
      size_t j = 0;
      for (int a = 0; a < gs.n; ++a) j = j * (size_t)(gd.cap + 1) + (size_t)e[a];
      out[j] = v[i];
    }
    for (int a = gs.n - 1; a >= 0; --a) {
      if (++e[a] <= gs.cap) break;
      e[a] = 0;
    }
  }
  return out;
}

// out exponent on z_{sigma(a)} = in exponent on z_a (same as the sparse
// permute_z).
DVec permute_axes(const DVec& v, const ZGrid& g, const std::vector<int>& sigma) {
  DVec out(g.size, 0);
  std::vector<size_t> str(g.n);
  for (int a = 0; a < g.n; ++a) str[a] = stride_of(g, a);
  std::vector<int> e(g.n, 0);
  for (size_t i = 0; i < g.size; ++i) {
    if (v[i]) {
      size_t j = 0;
      for (int a = 0; a < g.n; ++a) j += (size_t)e[a] * str[sigma[a] - 1];
      out[j] = v[i];
    }
    for (int a = g.n - 1; a >= 0; --a) {
      if (++e[a] <= g.cap) break;
      e[a] = 0;
    }
  }
  return out;
}

// Substitute z_axis -> z_axis + delta (binomial transform along one axis).
DVec shift_axis(const DVec& v, const ZGrid& g, int axis1, long delta, long m) {
  int L = g.cap + 1;
  std::vector<std::vector<long>> T(L, std::vector<long>(L, 0));
  // T[d][e] = C(d, e) delta^{d-e} mod m, via Pascal on (x + delta)^d.
  T[0][0] = 1 % m;
  for (int d = 1; d < L; ++d)
    for (int e = 0; e <= d; ++e) {
      long lo = (e <= d - 1) ? (long)((u64)T[d - 1][e] * normal(delta, m) % (u64)m) : 0;
      long hi = (e >= 1) ? T[d - 1][e - 1] : 0;
      T[d][e] = (lo + hi) % m;
    }
  DVec out(g.size, 0);
  size_t s = stride_of(g, axis1 - 1);
  size_t block = s * (size_t)L;
  std::vector<long> row(L);
  for (size_t start = 0; start < g.size; start += block)
    for (size_t off = start; off < start + s; ++off) {
      bool any = false;
      for (int j = 0; j < L; ++j) {
        row[j] = v[off + (size_t)j * s];
        any = any || row[j];
      }
      if (!any) continue;
      for (int e = 0; e < L; ++e) {
        u64 acc = 0;
        for (int d = e; d < L; ++d) acc += (u64)T[d][e] * (u64)row[d];
        out[off + (size_t)e * s] = (std::uint8_t)(acc % (u64)m);
      }
    }
  return out;
}

// d/dz_axis.
DVec derive_axis(const DVec& v, const ZGrid& g, int axis1, long m) {
  DVec out(g.size, 0);
  size_t s = stride_of(g, axis1 - 1);
  int L = g.cap + 1;
  size_t block = s * (size_t)L;
  for (size_t start = 0; start < g.size; start += block)
    for (size_t off = start; off < start + s; ++off)
      for (int d = 1; d < L; ++d)
        out[off + (size_t)(d - 1) * s] =
            (std::uint8_t)((u64)d * v[off + (size_t)d * s] % (u64)m);
  return out;
}

struct LinTerm {
  int axis1 = 0;  // 0 = constant term
  long c = 0;
};

// Multiply by sum of terms (c * z_axis or plain c). Throws if a nonzero
// coefficient would overflow the grid cap.
DVec mul_linear(const DVec& v, const ZGrid& g, const std::vector<LinTerm>& ts, long m) {
  DVec out(g.size, 0);
  std::vector<size_t> str(g.n);
  for (int a = 0; a < g.n; ++a) str[a] = stride_of(g, a);
  std::vector<int> e(g.n, 0);
  for (size_t i = 0; i < g.size; ++i) {
    if (v[i]) {
      for (const LinTerm& t : ts) {
        long c = normal(t.c, m);
        if (!c) continue;
        size_t j = i;
        if (t.axis1 > 0) {
          if (e[t.axis1 - 1] >= g.cap) throw std::logic_error("mul_linear: cap overflow");
          j += str[t.axis1 - 1];
        }
        out[j] = (std::uint8_t)(((u64)out[j] + (u64)c * v[i]) % (u64)m);
      }
    }
    for (int a = g.n - 1; a >= 0; --a) {
      if (++e[a] <= g.cap) break;
      e[a] = 0;
    }
  }
  return out;
}

void ntt_axis(std::vector<u32>& buf, size_t total, size_t L, size_t stride, bool invert) {
  // Roots of unity for length L.
  std::vector<u32> roots(L);
  u64 w = (u64)modpow((long)kNttG, (long)((kNttP - 1) / L), (long)kNttP);
  if (invert) w = (u64)modpow((long)w, (long)(kNttP - 2), (long)kNttP);
  roots[0] = 1;
  for (size_t j = 1; j < L; ++j) roots[j] = (u32)((u64)roots[j - 1] * w % kNttP);

  size_t block = stride * L;
  std::vector<u32> row(L);
  for (size_t start = 0; start < total; start += block)
    for (size_t off = start; off < start + stride; ++off) {
      for (size_t j = 0; j < L; ++j) row[j] = buf[off + j * stride];
      // bit-reverse
      for (size_t j = 1, rev = 0; j < L; ++j) {
        size_t bit = L >> 1;
        for (; rev & bit; bit >>= 1) rev ^= bit;
        rev ^= bit;
        if (j < rev) std::swap(row[j], row[rev]);
      }
      for (size_t len = 2; len <= L; len <<= 1) {
        size_t step = L / len;
        for (size_t s0 = 0; s0 < L; s0 += len)
          for (size_t j = 0; j < len / 2; ++j) {
            u64 u = row[s0 + j];
            u64 t = (u64)row[s0 + j + len / 2] * roots[j * step] % kNttP;
            row[s0 + j] = (u32)((u + t) % kNttP);
            row[s0 + j + len / 2] = (u32)((u + kNttP - t) % kNttP);
          }
      }
      for (size_t j = 0; j < L; ++j) buf[off + j * stride] = row[j];
    }
}

DVec conv_schoolbook(const DVec& a, const DVec& b, const ZGrid& g, const ZGrid& go, long m) {
  std::vector<u64> acc(go.size, 0);
  std::vector<int> ea(g.n, 0);
  for (size_t i = 0; i < g.size; ++i) {
    if (a[i]) {
      std::vector<int> eb(g.n, 0);
      for (size_t j = 0; j < g.size; ++j) {
        if (b[j]) {
          size_t idx = 0;
          for (int x = 0; x < g.n; ++x) idx = idx * (size_t)(go.cap + 1) + (size_t)(ea[x] + eb[x]);
          acc[idx] += (u64)a[i] * b[j];
        }
        for (int x = g.n - 1; x >= 0; --x) {
          if (++eb[x] <= g.cap) break;
          eb[x] = 0;
        }
      }
    }
    for (int x = g.n - 1; x >= 0; --x) {
      if (++ea[x] <= g.cap) break;
      ea[x] = 0;
    }
  }
  DVec out(go.size);
  for (size_t i = 0; i < go.size; ++i) out[i] = (std::uint8_t)(acc[i] % (u64)m);
  return out;
}

void spread(const DVec& v, const ZGrid& g, std::vector<u32>& buf, size_t pad, int n) {
  std::fill(buf.begin(), buf.end(), 0);
  std::vector<int> e(n, 0);
  for (size_t i = 0; i < g.size; ++i) {
    if (v[i]) {
      size_t j = 0;
      for (int a = 0; a < n; ++a) j = j * pad + (size_t)e[a];
      buf[j] = v[i];
    }
    for (int a = n - 1; a >= 0; --a) {
      if (++e[a] <= g.cap) break;
      e[a] = 0;
    }
  }
}

struct NttShape {
  int n = 0;
  size_t pad = 1, total = 1;
};

NttShape ntt_shape(const ZGrid& g) {
  NttShape s;
  s.n = g.n;
  while (s.pad < (size_t)(2 * g.cap + 1)) s.pad <<= 1;
  for (int x = 0; x < g.n; ++x) {
    s.total *= s.pad;
    if (s.total > (size_t(1) << 27)) throw std::length_error("ntt: grid too large");
  }
  return s;
}

void ntt_forward(const DVec& v, const ZGrid& g, const NttShape& s, std::vector<u32>& buf) {
  buf.resize(s.total);
  spread(v, g, buf, s.pad, g.n);
  for (int ax = 0; ax < g.n; ++ax) {
    size_t stride = 1;
    for (int x = g.n - 1; x > ax; --x) stride *= s.pad;
    ntt_axis(buf, s.total, s.pad, stride, false);
  }
}

// Inverse transform, then read the residues of the product grid out of the
// padded cube.  Mutates buf.
DVec ntt_inverse_extract(std::vector<u32>& buf, const NttShape& s, const ZGrid& go, long m) {
  for (int ax = 0; ax < s.n; ++ax) {
    size_t stride = 1;
    for (int x = s.n - 1; x > ax; --x) stride *= s.pad;
    ntt_axis(buf, s.total, s.pad, stride, true);
  }
  u64 inv_total = (u64)modpow((long)(s.total % kNttP), (long)(kNttP - 2), (long)kNttP);
  DVec out(go.size, 0);
  std::vector<int> e(s.n, 0);
  for (size_t i = 0; i < go.size; ++i) {
    size_t j = 0;
    for (int x = 0; x < s.n; ++x) j = j * s.pad + (size_t)e[x];
    out[i] = (std::uint8_t)((u64)buf[j] * inv_total % kNttP % (u64)m);
    for (int x = s.n - 1; x >= 0; --x) {
      if (++e[x] <= go.cap) break;
      e[x] = 0;
    }
  }
  return out;
}

}  // namespace

ZGrid ZGrid::make(int n, int cap) {
  if (n < 0 || cap < 0) throw std::invalid_argument("ZGrid: bad shape");
  ZGrid g;
  g.n = n;
  g.cap = cap;
  g.size = 1;
  for (int a = 0; a < n; ++a) {
    g.size *= (size_t)(cap + 1);
    if (g.size > (size_t(1) << 31)) throw std::length_error("ZGrid: too large");
  }
  return g;
}

size_t ZGrid::index(const std::vector<int>& e) const {
  if ((int)e.size() != n) throw std::invalid_argument("ZGrid::index: arity");
  size_t idx = 0;
  for (int a = 0; a < n; ++a) {
    if (e[a] < 0 || e[a] > cap) throw std::out_of_range("ZGrid::index: exponent");
    idx = idx * (size_t)(cap + 1) + (size_t)e[a];
  }
  return idx;
}

DVec dense_convolve(const DVec& a, const DVec& b, const ZGrid& g, long m) {
  if (a.size() != g.size || b.size() != g.size) throw std::invalid_argument("dense_convolve: size");
  ZGrid go = ZGrid::make(g.n, 2 * g.cap);
  if (g.size <= 2048 || g.n == 0) return conv_schoolbook(a, b, g, go, m);
  // Exactness: every true coefficient is below (m-1)^2 * g.size.
  if ((u64)(m - 1) * (u64)(m - 1) * (u64)g.size >= kNttP)
    throw std::logic_error("dense_convolve: coefficient bound exceeds NTT prime");
  NttShape s = ntt_shape(g);
  std::vector<u32> fa, fb;
  ntt_forward(a, g, s, fa);
  ntt_forward(b, g, s, fb);
  for (size_t i = 0; i < s.total; ++i) fa[i] = (u32)((u64)fa[i] * fb[i] % kNttP);
  return ntt_inverse_extract(fa, s, go, m);
}

long integrand_t_degree(const ModParams& mp, int n, int l) {
  return mp.k * (n - 1) + (mp.k - 1) + mp.kprime * (l - 1);
}

namespace {

std::vector<RSeq> r_list(const ModParams& mp, int n, int l, bool maximal) {
  long T = integrand_t_degree(mp, n, l);
  std::vector<RSeq> out;
  RSeq r(l, 0);
  while (true) {
    bool keep = maximal ? is_maximal_r(r, mp.N) : !is_trivial_r(r, mp.N);
    if (keep) out.push_back(r);
    int a = l - 1;
    for (; a >= 0; --a) {
      if (++r[a] < T) break;
      r[a] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

}  // namespace

std::vector<RSeq> nontrivial_r_list(const ModParams& mp, int n, int l) {
  return r_list(mp, n, l, false);
}

std::vector<RSeq> maximal_r_list(const ModParams& mp, int n, int l) {
  return r_list(mp, n, l, true);
}

// ---------------------------------------------------------------------------
// DenseInstance

namespace {

// Dense (t, z) coefficients of [t - z - c]_len for step kap, as
// biv[dt][dz] mod m; kap = 0 gives the plain power (t - z - c)^len.
std::vector<std::vector<long>> string_bivariate(long c, long len, long kap, long m) {
  std::vector<std::vector<long>> cur{{1 % m}};
  for (long j = 0; j < len; ++j) {
    long sh = normal(-(c + j * kap), m);  // constant of (t - z - c - j kap)
    std::vector<std::vector<long>> nxt(cur.size() + 1,
                                       std::vector<long>(cur[0].size() + 1, 0));
    for (size_t dt = 0; dt < cur.size(); ++dt)
      for (size_t dz = 0; dz < cur[dt].size(); ++dz) {
        long v = cur[dt][dz];
        if (!v) continue;
        nxt[dt + 1][dz] = (nxt[dt + 1][dz] + v) % m;                       // * t
        nxt[dt][dz + 1] = (nxt[dt][dz + 1] + (m - 1) * v) % m;             // * (-z)
        nxt[dt][dz] = (long)((nxt[dt][dz] + (u64)sh * v) % (u64)m);        // * const
      }
    cur = std::move(nxt);
  }
  return cur;
}

}  // namespace

DenseInstance::DenseInstance(const ModParams& mp, int n, int l) : mp_(mp), n_(n), l_(l) {
  if (n < 1 || l < 0 || 2 * l > n) throw std::invalid_argument("DenseInstance: bad (n, l)");
  zg_ = ZGrid::make(n, (int)mp.k);
  if (l == 0) return;
  long m = mp.N;
  long tdeg = mp.k * (n - 1) + (mp.k - 1);
  blocks_.resize(n);
  for (int a = 1; a <= n; ++a) {
    Block blk;
    blk.tdeg = tdeg;
    // product over s of the z_s-string attached to the distinguished slot a
    std::vector<std::uint8_t> cur(zg_.size, 0);
    cur[0] = (std::uint8_t)(1 % m);
    long curdeg = 0;
    for (int s = 1; s <= n; ++s) {
      long len = (s == a) ? mp.k - 1 : mp.k;
      long c = (s <= a) ? mp.kappa : 0;
      auto biv = string_bivariate(c, len, mp.kappa, m);
      size_t zstr = stride_of(zg_, s - 1);
      size_t zsz = zg_.size;
      std::vector<u32> nxt((size_t)(curdeg + len + 1) * zsz, 0);
      for (long d = 0; d <= curdeg; ++d) {
        const std::uint8_t* row = cur.data() + (size_t)d * zsz;
        for (size_t i = 0; i < zsz; ++i) {
          if (!row[i]) continue;
          u64 v = row[i];
          for (size_t dt = 0; dt < biv.size(); ++dt)
            for (size_t dz = 0; dz < biv[dt].size(); ++dz) {
              if (!biv[dt][dz]) continue;
              nxt[((size_t)d + dt) * zsz + i + dz * zstr] += (u32)((u64)biv[dt][dz] * v);
            }
        }
      }
      curdeg += len;
      cur.assign(nxt.size(), 0);
      for (size_t i = 0; i < nxt.size(); ++i) cur[i] = (std::uint8_t)(nxt[i] % (u64)m);
    }
    blk.mono = cur;
    // monomial -> string basis along t: peel from the top degree down.
    std::vector<std::vector<long>> S(tdeg + 1);  // S[d][j]: t^j coeff of [t]_d
    S[0] = {1 % m};
    for (long d = 1; d <= tdeg; ++d) {
      S[d].assign(d + 1, 0);
      long sh = normal(-(d - 1) * mp.kappa, m);
      for (long j = 0; j < d; ++j) {
        S[d][j + 1] = (S[d][j + 1] + S[d - 1][j]) % m;
        S[d][j] = (long)((S[d][j] + (u64)sh * S[d - 1][j]) % (u64)m);
      }
    }
    std::vector<std::uint8_t> work = blk.mono;
    blk.str.assign(work.size(), 0);
    for (long d = tdeg; d >= 0; --d) {
      std::uint8_t* top = work.data() + (size_t)d * zg_.size;
      std::memcpy(blk.str.data() + (size_t)d * zg_.size, top, zg_.size);
      for (long j = 0; j < d; ++j) {
        long cS = S[d][j];
        if (!cS) continue;
        long neg = (m - cS) % m;
        std::uint8_t* dst = work.data() + (size_t)j * zg_.size;
        for (size_t i = 0; i < zg_.size; ++i)
          dst[i] = (std::uint8_t)(((u64)dst[i] + (u64)neg * top[i]) % (u64)m);
      }
    }
    blocks_[a - 1] = std::move(blk);
  }
}

DVec DenseInstance::string_row(int a, long shift, long mtarget) const {
  const Block& blk = blocks_[a - 1];
  long m = mp_.N;
  long lo = std::max<long>(0, mtarget - shift);
  std::map<long, DVec> rows;
  for (long j = lo; j <= mtarget; ++j) {
    if (j <= blk.tdeg)
      rows[j] = DVec(blk.str.begin() + (size_t)j * zg_.size,
                     blk.str.begin() + (size_t)(j + 1) * zg_.size);
    else
      rows[j] = DVec(zg_.size, 0);
  }
  // c_m(t * f) = c_{m-1}(f) + m kappa c_m(f), applied `shift` times.  Rows
  // below m - remaining steps can no longer influence the target and are
  // skipped; when shift > mtarget the window floors at row 0, whose update
  // degenerates to c_0(t * f) = 0.
  for (long step = 1; step <= shift; ++step) {
    long jlo = std::max<long>(0, mtarget - shift + step);
    for (long j = mtarget; j >= jlo; --j) {
      DVec& rj = rows[j];
      if (j == 0) {
        std::fill(rj.begin(), rj.end(), 0);
        continue;
      }
      long fac = normal(j * mp_.kappa, m);
      const DVec& prev = rows[j - 1];
      for (size_t i = 0; i < zg_.size; ++i)
        rj[i] = (std::uint8_t)(((u64)prev[i] + (u64)fac * rj[i]) % (u64)m);
    }
  }
  return rows[mtarget];
}

DVec DenseInstance::monomial_row(int a, long shift, long mtarget) const {
  const Block& blk = blocks_[a - 1];
  long j = mtarget - shift;
  if (j < 0 || j > blk.tdeg) return DVec(zg_.size, 0);
  return DVec(blk.mono.begin() + (size_t)j * zg_.size,
              blk.mono.begin() + (size_t)(j + 1) * zg_.size);
}

namespace {

// Univariate mod-m coefficients of [X + 1 - c0]_{k'} in X.
std::vector<long> tt_string_coeffs(long c0, long kprime, long kap, long m) {
  std::vector<long> cur{1 % m};
  for (long j = 0; j < kprime; ++j) {
    long sh = normal(1 - c0 - j * kap, m);
    std::vector<long> nxt(cur.size() + 1, 0);
    for (size_t d = 0; d < cur.size(); ++d) {
      nxt[d + 1] = (nxt[d + 1] + cur[d]) % m;
      nxt[d] = (long)((nxt[d] + (u64)sh * cur[d]) % (u64)m);
    }
    cur = std::move(nxt);
  }
  return cur;
}

std::vector<long> binomials(long d, long m) {
  std::vector<long> c(d + 1, 0);
  c[0] = 1 % m;
  for (long i = 1; i <= d; ++i)
    for (long j = i; j >= 1; --j) c[j] = (c[j] + c[j - 1]) % m;
  return c;
}

constexpr size_t kNttCacheCap = size_t(1600) << 20;  // evict-all beyond ~1.6 GB

}  // namespace

std::shared_ptr<const std::vector<std::uint32_t>> DenseInstance::cached_ntt(
    int kind, int a, long e, int tt, long mtarget, const std::vector<long>& q) const {
  std::array<long, 5> key{kind, a, e, tt, mtarget};
  auto it = ntt_cache_.find(key);
  if (it != ntt_cache_.end()) return it->second;
  long m = mp_.N;
  DVec row;
  if (kind == 1) {
    row = string_row(a, e, mtarget);
  } else {
    // contraction over the second string exponent: sum_{e2} g(e,e2) row(a,e2)
    // with g = q_{e+e2} C(e+e2, e) (-1)^{e2}
    row.assign(zg_.size, 0);
    for (long e2 = 0; e + e2 <= mp_.kprime; ++e2) {
      long d = e + e2;
      long g = (long)((u64)q[d] * binomials(d, m)[e] % (u64)m);
      if (e2 & 1) g = (m - g) % m;
      if (!g) continue;
      add_scaled(row, string_row(a, e2, mtarget), g, m);
    }
  }
  std::shared_ptr<const std::vector<u32>> entry;  // null marks an all-zero row
  if (!vec_zero(row)) {
    NttShape s = ntt_shape(zg_);
    auto buf = std::make_shared<std::vector<u32>>();
    ntt_forward(row, zg_, s, *buf);
    size_t sz = buf->size() * sizeof(u32);
    if (ntt_cache_bytes_ + sz > kNttCacheCap) {
      ntt_cache_.clear();  // live rows survive via their shared_ptr holders
      ntt_cache_bytes_ = 0;
    }
    ntt_cache_bytes_ += sz;
    entry = std::move(buf);
  }
  ntt_cache_.emplace(key, entry);
  return entry;
}

DenseSolution DenseInstance::solve_mod(const RSeq& r) const {
  if ((int)r.size() != l_) throw std::invalid_argument("solve_mod: |r| != l");
  RSequence seq = make_rsequence(r, mp_.N);
  long m = mp_.N;
  int margin = n_ + 2;
  DenseSolution out;
  out.n = n_;
  out.l = l_;
  out.mod = m;
  if (l_ == 0) {
    out.grid = ZGrid::make(n_, margin);
    DVec one(out.grid.size, 0);
    one[0] = (std::uint8_t)(seq.N_r % m);
    out.coords[Subset{}] = one;
    return out;
  }
  if (l_ == 1) {
    out.grid = ZGrid::make(n_, (int)mp_.k + margin);
    for (int a = 1; a <= n_; ++a) {
      DVec row = string_row(a, 0, r[0]);
      DVec scaled(zg_.size, 0);
      add_scaled(scaled, row, seq.N_r, m);
      out.coords[Subset{a}] = embed(scaled, zg_, out.grid);
    }
    return out;
  }
  if (l_ != 2) throw std::invalid_argument("solve_mod: only l <= 2 supported");
  ZGrid convg = ZGrid::make(n_, 2 * (int)mp_.k);
  out.grid = ZGrid::make(n_, 2 * (int)mp_.k + margin);
  bool basic = zg_.size <= basic_threshold_ || n_ == 0;
  NttShape sh;
  bool fused = false;
  if (!basic) {
    if ((u64)(m - 1) * (u64)(m - 1) * (u64)zg_.size >= kNttP)
      throw std::logic_error("solve_mod: coefficient bound exceeds NTT prime");
    sh = ntt_shape(zg_);
    // Accumulating in the transform domain stays exact only while the summed
    // integer coefficients over all 2(k'+1) pairs remain below the prime.
    u64 pairs = 2 * (u64)(mp_.kprime + 1);
    fused = (u64)(m - 1) * (u64)(m - 1) * (u64)zg_.size * pairs < kNttP;
  }
  for (const Subset& I : all_subsets(n_, 2)) {
    DVec acc(convg.size, 0);
    std::vector<u64> facc;
    if (fused) facc.assign(sh.total, 0);
    for (int t = 0; t < 2; ++t) {
      bool swapped = (t == 1);
      // t_1 carries the strings of a_{tau^{-1}(1)}, t_2 the other member.
      int a1 = swapped ? I[1] : I[0];
      int a2 = swapped ? I[0] : I[1];
      // tau(1) < tau(2) for identity: [t1-t2+1]_{k'}; else shifted by kappa
      std::vector<long> q = tt_string_coeffs(swapped ? mp_.kappa : 0, mp_.kprime, mp_.kappa, m);
      for (long e1 = 0; e1 <= mp_.kprime; ++e1) {
        if (basic) {
          // combo = sum_{e2} g(e1,e2) * row2(e2), g = q_{e1+e2} C(e1+e2, e1) (-1)^{e2}
          DVec combo(zg_.size, 0);
          bool any = false;
          for (long e2 = 0; e1 + e2 <= mp_.kprime; ++e2) {
            long d = e1 + e2;
            long g = (long)((u64)q[d] * binomials(d, m)[e1] % (u64)m);
            if (e2 & 1) g = (m - g) % m;
            if (!g) continue;
            add_scaled(combo, string_row(a2, e2, r[1]), g, m);
            any = true;
          }
          if (!any || vec_zero(combo)) continue;
          DVec row1 = string_row(a1, e1, r[0]);
          if (vec_zero(row1)) continue;
          DVec conv = dense_convolve(row1, combo, zg_, m);
          for (size_t i = 0; i < convg.size; ++i)
            acc[i] = (std::uint8_t)(((u64)acc[i] + conv[i]) % (u64)m);
          continue;
        }
        auto f2 = cached_ntt(2, a2, e1, t, r[1], q);
        if (!f2) continue;
        auto f1 = cached_ntt(1, a1, e1, 0, r[0], q);
        if (!f1) continue;
        const std::vector<u32>& v1 = *f1;
        const std::vector<u32>& v2 = *f2;
        if (fused) {
          // raw u64 sum is safe: 2(k'+1) terms, each below kNttP^2
          for (size_t i = 0; i < sh.total; ++i) facc[i] += (u64)v1[i] * v2[i] % kNttP;
        } else {
          std::vector<u32> prod(sh.total);
          for (size_t i = 0; i < sh.total; ++i) prod[i] = (u32)((u64)v1[i] * v2[i] % kNttP);
          DVec conv = ntt_inverse_extract(prod, sh, convg, m);
          for (size_t i = 0; i < convg.size; ++i)
            acc[i] = (std::uint8_t)(((u64)acc[i] + conv[i]) % (u64)m);
        }
      }
    }
    if (fused) {
      std::vector<u32> buf(sh.total);
      for (size_t i = 0; i < sh.total; ++i) buf[i] = (u32)(facc[i] % kNttP);
      acc = ntt_inverse_extract(buf, sh, convg, m);
    }
    DVec scaled(convg.size, 0);
    add_scaled(scaled, acc, seq.N_r, m);
    out.coords[I] = embed(scaled, convg, out.grid);
  }
  return out;
}

DenseSolution DenseInstance::solve_kz_mod(const RSeq& r) const {
  if ((int)r.size() != l_) throw std::invalid_argument("solve_kz_mod: |r| != l");
  if (!is_maximal_r(r, mp_.N)) throw std::invalid_argument("solve_kz_mod: r not maximal");
  long m = mp_.N;
  int margin = n_ + 2;
  DenseSolution out;
  out.n = n_;
  out.l = l_;
  out.mod = m;
  // The homogeneous blocks are the kappa = 0 strings; build them on demand.
  ModParams mp0 = mp_;
  if (l_ == 0) {
    out.grid = ZGrid::make(n_, margin);
    DVec one(out.grid.size, 0);
    one[0] = (std::uint8_t)(1 % m);
    out.coords[Subset{}] = one;
    return out;
  }
  // Dense homogeneous block for position a: prod_s (t - z_s)^k with the
  // distinguished exponent k-1; reuse the string machinery with kappa = 0.
  auto kz_block = [&](int a) {
    std::vector<std::uint8_t> cur(zg_.size, 0);
    cur[0] = (std::uint8_t)(1 % m);
    long curdeg = 0;
    for (int s = 1; s <= n_; ++s) {
      long len = (s == a) ? mp0.k - 1 : mp0.k;
      auto biv = string_bivariate(0, len, 0, m);
      size_t zstr = stride_of(zg_, s - 1);
      size_t zsz = zg_.size;
      std::vector<u32> nxt((size_t)(curdeg + len + 1) * zsz, 0);
      for (long d = 0; d <= curdeg; ++d) {
        const std::uint8_t* row = cur.data() + (size_t)d * zsz;
        for (size_t i = 0; i < zsz; ++i) {
          if (!row[i]) continue;
          u64 v = row[i];
          for (size_t dt = 0; dt < biv.size(); ++dt)
            for (size_t dz = 0; dz < biv[dt].size(); ++dz) {
              if (!biv[dt][dz]) continue;
              nxt[((size_t)d + dt) * zsz + i + dz * zstr] += (u32)((u64)biv[dt][dz] * v);
            }
        }
      }
      curdeg += len;
      cur.assign(nxt.size(), 0);
      for (size_t i = 0; i < nxt.size(); ++i) cur[i] = (std::uint8_t)(nxt[i] % (u64)m);
    }
    return cur;
  };
  long tdeg = mp_.k * (n_ - 1) + (mp_.k - 1);
  auto kz_row = [&](const std::vector<std::uint8_t>& blk, long d) {
    if (d < 0 || d > tdeg) return DVec(zg_.size, 0);
    return DVec(blk.begin() + (size_t)d * zg_.size, blk.begin() + (size_t)(d + 1) * zg_.size);
  };
  if (l_ == 1) {
    out.grid = ZGrid::make(n_, (int)mp_.k + margin);
    for (int a = 1; a <= n_; ++a) {
      auto blk = kz_block(a);
      out.coords[Subset{a}] = embed(kz_row(blk, r[0]), zg_, out.grid);
    }
    return out;
  }
  if (l_ != 2) throw std::invalid_argument("solve_kz_mod: only l <= 2 supported");
  ZGrid convg = ZGrid::make(n_, 2 * (int)mp_.k);
  out.grid = ZGrid::make(n_, 2 * (int)mp_.k + margin);
  std::vector<std::vector<std::uint8_t>> blks(n_ + 1);
  for (int a = 1; a <= n_; ++a) blks[a] = kz_block(a);
  std::vector<long> binom = binomials(mp_.kprime, m);
  for (const Subset& I : all_subsets(n_, 2)) {
    DVec acc(convg.size, 0);
    for (int t = 0; t < 2; ++t) {
      int a1 = t ? I[1] : I[0];
      int a2 = t ? I[0] : I[1];
      // (t1 - t2)^{k'} = sum_{e1+e2=k'} C(k',e1) (-1)^{e2} t1^{e1} t2^{e2}
      for (long e1 = 0; e1 <= mp_.kprime; ++e1) {
        long e2 = mp_.kprime - e1;
        long g = binom[e1];
        if (e2 & 1) g = (m - g) % m;
        if (!g) continue;
        DVec row1 = kz_row(blks[a1], r[0] - e1);
        DVec row2 = kz_row(blks[a2], r[1] - e2);
        if (vec_zero(row1) || vec_zero(row2)) continue;
        DVec conv = dense_convolve(row1, row2, zg_, m);
        add_scaled(acc, conv, g, m);
      }
    }
    out.coords[I] = embed(acc, convg, out.grid);
  }
  return out;
}

std::size_t DenseInstance::estimated_bytes(const ModParams& mp, int n, int l) {
  size_t zsz = 1;
  for (int a = 0; a < n; ++a) zsz *= (size_t)(mp.k + 1);
  size_t tdim = (size_t)(mp.k * (n - 1) + mp.k);
  size_t blocks = (size_t)n * tdim * zsz * 2;  // mono + str
  size_t outsz = 1;
  int outcap = (l == 2 ? 2 : 1) * (int)mp.k + n + 2;
  for (int a = 0; a < n; ++a) outsz *= (size_t)(outcap + 1);
  size_t coords = 1;
  for (int a = 0; a < l; ++a) coords = coords * (size_t)(n - a) / (size_t)(a + 1);
  size_t ntt = 0;
  if (l == 2) {
    size_t padtot = 1;
    size_t pad = 1;
    while (pad < (size_t)(2 * mp.k + 1)) pad <<= 1;
    for (int a = 0; a < n; ++a) padtot *= pad;
    // working buffers (accumulator + scratch) plus the capped transform cache
    size_t cache = 3 * (size_t)n * (size_t)(mp.kprime + 1) * padtot * 4;
    ntt = padtot * 16 + std::min(cache, size_t(1600) << 20);
  }
  return blocks + coords * outsz * 4 + ntt;
}

// ---------------------------------------------------------------------------
// Dense verifiers

namespace {

DenseSolution ds_like(const DenseSolution& f) {
  DenseSolution out;
  out.n = f.n;
  out.l = f.l;
  out.mod = f.mod;
  out.grid = f.grid;
  return out;
}

void ds_add(DenseSolution& dst, const Subset& I, const DVec& v, long sign) {
  auto it = dst.coords.find(I);
  if (it == dst.coords.end()) it = dst.coords.emplace(I, DVec(dst.grid.size, 0)).first;
  long c = sign < 0 ? dst.mod - 1 : 1;
  add_scaled(it->second, v, c, dst.mod);
}

bool ds_zero(const DenseSolution& f) {
  for (const auto& [I, v] : f.coords)
    for (auto x : v)
      if (x) return false;
  return true;
}

DenseSolution ds_sub(const DenseSolution& a, const DenseSolution& b) {
  DenseSolution out = a;
  for (const auto& [I, v] : b.coords) ds_add(out, I, v, -1);
  return out;
}

DenseSolution ds_permute_z(const DenseSolution& f, const std::vector<int>& sigma) {
  DenseSolution out = ds_like(f);
  for (const auto& [I, v] : f.coords) out.coords[I] = permute_axes(v, f.grid, sigma);
  return out;
}

DenseSolution ds_slot_perm(const DenseSolution& f, const std::vector<int>& sigma) {
  DenseSolution out = ds_like(f);
  for (const auto& [I, v] : f.coords) ds_add(out, subset_apply(I, sigma), v, +1);
  return out;
}

DenseSolution ds_swap_slots(const DenseSolution& f, int a, int b) {
  DenseSolution out = ds_like(f);
  for (const auto& [I, v] : f.coords) ds_add(out, subset_swap(I, a, b), v, +1);
  return out;
}

DenseSolution ds_shift(const DenseSolution& f, int axis1, long delta) {
  DenseSolution out = ds_like(f);
  for (const auto& [I, v] : f.coords) out.coords[I] = shift_axis(v, f.grid, axis1, delta, f.mod);
  return out;
}

DenseSolution ds_mul(const DenseSolution& f, const std::vector<LinTerm>& ts) {
  DenseSolution out = ds_like(f);
  for (const auto& [I, v] : f.coords) out.coords[I] = mul_linear(v, f.grid, ts, f.mod);
  return out;
}

DenseSolution ds_apply_e(const DenseSolution& f) {
  DenseSolution out = ds_like(f);
  out.l = f.l - 1;
  for (const auto& [I, v] : f.coords)
    for (size_t drop = 0; drop < I.size(); ++drop) {
      Subset J;
      for (size_t i = 0; i < I.size(); ++i)
        if (i != drop) J.push_back(I[i]);
      ds_add(out, J, v, +1);
    }
  return out;
}

std::vector<int> swap_perm(int n, int a) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = i + 1;
  std::swap(s[a - 1], s[a]);
  return s;
}

}  // namespace

bool dense_check_symmetric(const DenseSolution& f, const ModParams& mp) {
  int n = f.n;
  for (int a = 1; a + 1 <= n; ++a) {
    std::vector<LinTerm> u{{a, 1}, {a + 1, -1}};
    std::vector<LinTerm> um1{{a, 1}, {a + 1, -1}, {0, -1}};
    DenseSolution lhs = ds_mul(ds_permute_z(f, swap_perm(n, a)), um1);
    DenseSolution rhs = ds_sub(ds_mul(ds_swap_slots(f, a, a + 1), u), f);
    if (!ds_zero(ds_sub(lhs, rhs))) return false;
  }
  DenseSolution lhs = ds_shift(f, 1, -mp.kappa);
  std::vector<int> mu = mu_cycle(n);
  DenseSolution rhs = ds_slot_perm(ds_permute_z(f, mu), mu);
  return ds_zero(ds_sub(lhs, rhs));
}

bool dense_check_qkz(const DenseSolution& f, const ModParams& mp) {
  int n = f.n;
  for (int a = 1; a <= n; ++a) {
    DenseSolution num = f;
    DenseSolution den = ds_shift(f, a, -mp.kappa);
    auto factor = [&](int b, long c) {
      // num <- (z_a - z_b - c) num - P^{(a,b)} num; den side picks up
      // (z_a - z_b - c - 1).
      std::vector<LinTerm> u{{a, 1}, {b, -1}, {0, -c}};
      std::vector<LinTerm> um1{{a, 1}, {b, -1}, {0, -c - 1}};
      num = ds_sub(ds_mul(num, u), ds_swap_slots(num, a, b));
      den = ds_mul(den, um1);
    };
    for (int b = a + 1; b <= n; ++b) factor(b, 0);
    for (int b = 1; b < a; ++b) factor(b, mp.kappa);
    if (!ds_zero(ds_sub(den, num))) return false;
  }
  return true;
}

bool dense_check_singular(const DenseSolution& f) { return ds_zero(ds_apply_e(f)); }

bool dense_check_kz(const DenseSolution& f, const ModParams& mp) {
  int n = f.n;
  for (int a = 1; a <= n; ++a) {
    DenseSolution lhs = ds_like(f);
    for (const auto& [I, v] : f.coords) {
      DVec d = derive_axis(v, f.grid, a, f.mod);
      lhs.coords[I] = std::move(d);
    }
    std::vector<LinTerm> kap{{0, mp.kappa}};
    lhs = ds_mul(lhs, kap);
    for (int s = 1; s <= n; ++s)
      if (s != a) lhs = ds_mul(lhs, std::vector<LinTerm>{{a, 1}, {s, -1}});
    DenseSolution rhs = ds_like(f);
    for (int s = 1; s <= n; ++s) {
      if (s == a) continue;
      DenseSolution part = ds_sub(ds_swap_slots(f, a, s), f);
      for (int s2 = 1; s2 <= n; ++s2)
        if (s2 != a && s2 != s) part = ds_mul(part, std::vector<LinTerm>{{a, 1}, {s2, -1}});
      for (const auto& [I, v] : part.coords) ds_add(rhs, I, v, +1);
    }
    if (!ds_zero(ds_sub(lhs, rhs))) return false;
  }
  return ds_zero(ds_apply_e(f));
}

// ---------------------------------------------------------------------------
// Bridges

DenseSolution dense_from_vector(const VectorPolynomial& v, long mod, int cap) {
  if (v.space.l != 0) throw std::invalid_argument("dense_from_vector: expected z-only space");
  DenseSolution out;
  out.n = v.n;
  out.l = v.l;
  out.mod = mod;
  out.grid = ZGrid::make(v.space.n, cap);
  for (const auto& [I, p] : v.coords) {
    DVec d(out.grid.size, 0);
    for (const auto& [e, c] : p.terms()) {
      std::vector<int> idx(e.begin(), e.end());
      size_t j = out.grid.index(idx);
      long cm = (long)mpz_fdiv_ui(c.get_mpz_t(), (unsigned long)mod);
      d[j] = (std::uint8_t)((d[j] + cm) % mod);
    }
    out.coords[I] = std::move(d);
  }
  return out;
}

VectorPolynomial dense_to_vector(const DenseSolution& d) {
  VarSpace vs{0, d.grid.n};
  VectorPolynomial out(d.n, d.l, vs);
  for (const auto& [I, v] : d.coords) {
    Polynomial p(vs);
    std::vector<int> e(d.grid.n, 0);
    for (size_t i = 0; i < d.grid.size; ++i) {
      if (v[i]) {
        Exp ex(e.begin(), e.end());
        p.add_term(std::move(ex), Int((long)v[i]));
      }
      for (int a = d.grid.n - 1; a >= 0; --a) {
        if (++e[a] <= d.grid.cap) break;
        e[a] = 0;
      }
    }
    if (!p.is_zero()) out.set(I, std::move(p));
  }
  return out;
}

}  // namespace qkz
