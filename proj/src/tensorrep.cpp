#include "qkz/tensorrep.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace qkz {

bool subset_valid(const Subset& I, int n) {
  for (size_t i = 0; i < I.size(); ++i) {
    if (I[i] < 1 || I[i] > n) return false;
    if (i > 0 && I[i] <= I[i - 1]) return false;
  }
  return true;
}

Subset subset_swap(const Subset& I, int a, int b) {
  Subset J;
  J.reserve(I.size());
  for (int s : I) {
    if (s == a) s = b;
    else if (s == b) s = a;
    J.push_back(s);
  }
  std::sort(J.begin(), J.end());
  return J;
}

Subset subset_apply(const Subset& I, const std::vector<int>& sigma) {
  Subset J;
  J.reserve(I.size());
  for (int s : I) {
    if (s < 1 || s > (int)sigma.size()) throw std::invalid_argument("subset_apply: slot out of range");
    J.push_back(sigma[s - 1]);
  }
  std::sort(J.begin(), J.end());
  return J;
}

std::vector<Subset> all_subsets(int n, int l) {
  if (l < 0 || l > n) return {};
  std::vector<Subset> out;
  Subset cur;
  // lexicographic enumeration by smallest-first members
  std::function<void(int)> rec = [&](int next) {
    if ((int)cur.size() == l) {
      out.push_back(cur);
      return;
    }
    for (int s = next; s <= n - (l - (int)cur.size()) + 1; ++s) {
      cur.push_back(s);
      rec(s + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

std::vector<int> mu_cycle(int n) {
  std::vector<int> mu(n);
  for (int j = 1; j < n; ++j) mu[j - 1] = j + 1;
  mu[n - 1] = 1;
  return mu;
}

Polynomial VectorPolynomial::coordinate(const Subset& I) const {
  auto it = coords.find(I);
  if (it == coords.end()) return Polynomial(space);
  return it->second;
}

void VectorPolynomial::set(const Subset& I, Polynomial p) {
  if (!subset_valid(I, n) || (int)I.size() != l)
    throw std::invalid_argument("VectorPolynomial::set: bad subset");
  if (p.is_zero()) coords.erase(I);
  else coords[I] = std::move(p);
}

void VectorPolynomial::add(const Subset& I, const Polynomial& p) {
  if (!subset_valid(I, n) || (int)I.size() != l)
    throw std::invalid_argument("VectorPolynomial::add: bad subset");
  auto it = coords.find(I);
  if (it == coords.end()) {
    if (!p.is_zero()) coords.emplace(I, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) coords.erase(it);
}

bool VectorPolynomial::is_zero() const { return coords.empty(); }

VectorPolynomial& VectorPolynomial::operator+=(const VectorPolynomial& o) {
  for (const auto& [I, p] : o.coords) add(I, p);
  return *this;
}

VectorPolynomial& VectorPolynomial::operator-=(const VectorPolynomial& o) {
  for (const auto& [I, p] : o.coords) add(I, -p);
  return *this;
}

bool VectorPolynomial::operator==(const VectorPolynomial& o) const {
  return n == o.n && l == o.l && coords == o.coords;
}

VectorPolynomial scalar_mul(const Polynomial& p, const VectorPolynomial& v) {
  VectorPolynomial out(v.n, v.l, v.space);
  for (const auto& [I, q] : v.coords) out.set(I, p * q);
  return out;
}

VectorPolynomial reduce_mod(const VectorPolynomial& v, const Int& N) {
  VectorPolynomial out(v.n, v.l, v.space);
  for (const auto& [I, q] : v.coords) out.set(I, reduce_mod(q, N));
  return out;
}

VectorPolynomial substitute_shift(const VectorPolynomial& v, int var, const Int& c) {
  VectorPolynomial out(v.n, v.l, v.space);
  for (const auto& [I, q] : v.coords) out.set(I, substitute_shift(q, var, c));
  return out;
}

VectorPolynomial permute_z(const VectorPolynomial& v, const std::vector<int>& sigma) {
  VectorPolynomial out(v.n, v.l, v.space);
  for (const auto& [I, q] : v.coords) out.set(I, permute_z(q, sigma));
  return out;
}

VectorPolynomial apply_e(const VectorPolynomial& v) {
  if (v.l < 1) return VectorPolynomial(v.n, v.l - 1, v.space);
  VectorPolynomial out(v.n, v.l - 1, v.space);
  for (const auto& [I, p] : v.coords) {
    for (size_t i = 0; i < I.size(); ++i) {
      Subset J = I;
      J.erase(J.begin() + i);
      out.add(J, p);
    }
  }
  return out;
}

VectorPolynomial apply_h(const VectorPolynomial& v) {
  VectorPolynomial out(v.n, v.l, v.space);
  Int eig = v.n - 2 * v.l;
  for (const auto& [I, p] : v.coords) out.set(I, Polynomial(v.space, eig) * p);
  return out;
}

VectorPolynomial apply_permutation(const VectorPolynomial& v, int a, int b) {
  if (a < 1 || a > v.n || b < 1 || b > v.n || a == b)
    throw std::invalid_argument("apply_permutation: bad slot pair");
  VectorPolynomial out(v.n, v.l, v.space);
  for (const auto& [I, p] : v.coords) out.add(subset_swap(I, a, b), p);
  return out;
}

VectorPolynomial apply_slot_permutation(const VectorPolynomial& v, const std::vector<int>& sigma) {
  if ((int)sigma.size() != v.n)
    throw std::invalid_argument("apply_slot_permutation: size mismatch");
  VectorPolynomial out(v.n, v.l, v.space);
  for (const auto& [I, p] : v.coords) out.add(subset_apply(I, sigma), p);
  return out;
}

VectorPolynomial pr_cleared_action(const VectorPolynomial& v, int a) {
  if (a < 1 || a + 1 > v.n) throw std::invalid_argument("pr_cleared_action: bad a");
  if (v.space.n != v.n) throw std::invalid_argument("pr_cleared_action: slot/variable mismatch");
  Polynomial u = Polynomial::z(v.space, a) - Polynomial::z(v.space, a + 1);
  VectorPolynomial out = scalar_mul(u, apply_permutation(v, a, a + 1));
  out -= v;
  return out;
}

namespace {

// (u - P^{(a,b)}) v, the cleared numerator of a single R factor.
VectorPolynomial r_factor(const VectorPolynomial& v, int a, int b, const Polynomial& u) {
  VectorPolynomial out = scalar_mul(u, v);
  out -= apply_permutation(v, a, b);
  return out;
}

}  // namespace

ClearedAction qkz_cleared_action(const VectorPolynomial& v, int a, const ModParams& mp) {
  int n = v.n;
  if (a < 1 || a > n) throw std::invalid_argument("qkz_cleared_action: bad a");
  if (v.space.n != n) throw std::invalid_argument("qkz_cleared_action: slot/variable mismatch");
  const VarSpace& vs = v.space;
  auto z = [&](int c) { return Polynomial::z(vs, c); };
  Polynomial kap(vs, Int(mp.kappa));
  Polynomial one(vs, Int(1));

  ClearedAction act;
  act.num = v;
  act.den = one;
  // rightmost factor first: b = a+1, ..., n with argument z_a - z_b,
  // then b = 1, ..., a-1 with argument z_a - z_b - kappa
  for (int b = a + 1; b <= n; ++b) {
    Polynomial u = z(a) - z(b);
    act.num = r_factor(act.num, a, b, u);
    act.den *= u - one;
  }
  for (int b = 1; b < a; ++b) {
    Polynomial u = z(a) - z(b) - kap;
    act.num = r_factor(act.num, a, b, u);
    act.den *= u - one;
  }
  return act;
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace qkz
