// Acceptance battery: nine end-to-end checks, one PASS/FAIL line each on
// stdout, exit 0 iff every selected check passes.  Progress diagnostics go
// to stderr.  The property grids (checks 3, 6, 7) run cheapest cells first
// under a wall-clock budget and report exact coverage; --exhaustive lifts
// the budget (the largest n = 5, l = 2 cells then take many hours on one
// core).  The gold-instance checks need the CLI binary, taken from --bin or
// the QKZ_BIN environment variable.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkz/hyperqkz.hpp"
#include "qkz/kzlimit.hpp"
#include "qkz/modsolve.hpp"

using namespace qkz;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

long rnd(Rng& g, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(g);
}

// ---------------------------------------------------------------------------
// CLI subprocess helpers (checks 1 and 2)

struct RunResult {
  std::string out;
  int code = -1;
  double secs = 0;
};

RunResult run_cli(const std::string& bin, const std::string& args) {
  std::string cmd = bin + " " + args + " 2>/dev/null";
  auto t0 = Clock::now();
  FILE* p = popen(cmd.c_str(), "r");
  RunResult r;
  if (!p) return r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int status = pclose(p);
  r.secs = seconds_since(t0);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool gold_instance(const std::string& bin, const std::string& args, const char* expected_f,
                   std::string& detail) {
  RunResult r = run_cli(bin, args);
  if (r.code != 0) {
    detail = "CLI exited with code " + std::to_string(r.code);
    return false;
  }
  Json j, want;
  try {
    j = Json::parse(r.out);
    want = Json::parse(expected_f);
  } catch (const std::exception& e) {
    detail = std::string("JSON parse: ") + e.what();
    return false;
  }
  if (j["f"] != want) {
    detail = "coordinates differ from the expected solution";
    return false;
  }
  if (!(j["verified"].is_boolean() && j["verified"].get<bool>())) {
    detail = "solver did not report verified=true";
    return false;
  }
  if (r.secs >= 1.0) {
    detail = "took " + std::to_string(r.secs) + " s (limit 1 s)";
    return false;
  }
  std::ostringstream os;
  os << "bit-exact match in " << std::fixed << r.secs << " s";
  detail = os.str();
  return true;
}

// The two reference solutions, in the CLI's canonical serialization:
// (1,1,1) on v_{1},v_{2},v_{3}, and the three linear forms
// 14-z1-2z2-2z3, 10-z2-2z1-2z3, 6-z3-2z1-2z2.
const char* kGoldAF =
    R"({"n":3,"l":1,"coords":[{"I":[1],"poly":[{"exp":[0,0,0],"coef":"1"}]},)"
    R"({"I":[2],"poly":[{"exp":[0,0,0],"coef":"1"}]},)"
    R"({"I":[3],"poly":[{"exp":[0,0,0],"coef":"1"}]}]})";
const char* kGoldBF =
    R"({"n":3,"l":1,"coords":[)"
    R"({"I":[1],"poly":[{"exp":[1,0,0],"coef":"-1"},{"exp":[0,1,0],"coef":"-2"},)"
    R"({"exp":[0,0,1],"coef":"-2"},{"exp":[0,0,0],"coef":"14"}]},)"
    R"({"I":[2],"poly":[{"exp":[1,0,0],"coef":"-2"},{"exp":[0,1,0],"coef":"-1"},)"
    R"({"exp":[0,0,1],"coef":"-2"},{"exp":[0,0,0],"coef":"10"}]},)"
    R"({"I":[3],"poly":[{"exp":[1,0,0],"coef":"-2"},{"exp":[0,1,0],"coef":"-2"},)"
    R"({"exp":[0,0,1],"coef":"-1"},{"exp":[0,0,0],"coef":"6"}]}]})";

// ---------------------------------------------------------------------------
// The shared parameter grid (checks 3, 6, 7)

struct Cell {
  ModParams mp;
  int n = 0, l = 0;
};

std::string cell_tag(const Cell& c) {
  std::ostringstream os;
  os << "N=" << c.mp.N << " kappa=" << c.mp.kappa << " n=" << c.n << " l=" << c.l;
  return os.str();
}

std::string r_tag(const RSeq& r) {
  std::ostringstream os;
  os << "r=(";
  for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
  os << ")";
  return os.str();
}

std::vector<Cell> acceptance_grid() {
  std::vector<Cell> cells;
  for (long N : {3L, 5L, 7L, 9L, 13L})
    for (long kap = 1; kap < N; ++kap) {
      if (std::gcd(kap, N) != 1) continue;
      ModParams mp = compute_params(N, kap);
      for (int n = 2; n <= 5; ++n)
        for (int l = 1; 2 * l <= n && l <= 2; ++l) cells.push_back({mp, n, l});
    }
  return cells;
}

// Coarse per-cell work proxy used only to order cells cheapest-first.
double cell_cost(const Cell& c, size_t pairs) {
  double zg = std::pow((double)(c.mp.k + 1), (double)c.n);
  double per;
  if (c.l <= 1) {
    per = zg * (double)(c.mp.k + 1);
  } else if (zg <= 2048.0) {
    per = zg * zg;
  } else {
    size_t pad = 1;
    while (pad < (size_t)(2 * c.mp.k + 1)) pad <<= 1;
    per = std::pow((double)pad, (double)c.n) * (double)(c.mp.kprime + 2);
  }
  return per * (double)(pairs + 1);
}

// The sparse engine expands the integrand symbolically; gate it by the
// dominant term-count factor so no cell can exhaust memory.
bool sparse_affordable(const Cell& c) {
  return std::pow((double)(c.mp.k + 1), (double)(c.n * c.l)) <= 3.0e4;
}

constexpr std::size_t kDenseMemGate = std::size_t(5) << 29;  // 2.5 GB

struct GridSummary {
  size_t pairs_total = 0, pairs_done = 0, fails = 0;
  size_t cells = 0, cells_full = 0, cells_gated = 0;
  std::string first_fail;
  double secs = 0;

  bool complete() const { return pairs_done == pairs_total; }
  std::string coverage(const char* what) const {
    std::ostringstream os;
    os << pairs_done << "/" << pairs_total << " " << what << " across " << cells_full << "/"
       << cells << " cells";
    return os.str();
  }
};

// Runs `check` on every listed r of every cell, cheapest cells first, until
// the budget runs out.  `check` returns pass/fail; exceptions fail the cell.
GridSummary run_grid(const char* name, double budget, std::ostream& diag,
                     const std::function<std::vector<RSeq>(const Cell&)>& rlist,
                     const std::function<bool(const Cell&)>& runnable,
                     const std::function<bool(const Cell&, const std::vector<RSeq>&,
                                              std::vector<bool>&, const std::function<bool()>&)>&
                         run_cell) {
  auto t0 = Clock::now();
  std::vector<Cell> cells = acceptance_grid();
  std::vector<std::pair<double, size_t>> order;
  std::vector<std::vector<RSeq>> lists(cells.size());
  GridSummary s;
  s.cells = cells.size();
  std::vector<char> gated(cells.size(), 0);
  for (size_t i = 0; i < cells.size(); ++i) {
    lists[i] = rlist(cells[i]);
    s.pairs_total += lists[i].size();
    order.push_back({cell_cost(cells[i], lists[i].size()), i});
    if (!lists[i].empty() && !runnable(cells[i])) {
      gated[i] = 1;
      ++s.cells_gated;
      diag << "  " << name << " [" << cell_tag(cells[i]) << "] gated (resource estimate)\n";
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [cost, i] : order) {
    const Cell& c = cells[i];
    const std::vector<RSeq>& rs = lists[i];
    if (rs.empty()) {
      ++s.cells_full;
      continue;
    }
    if (gated[i]) continue;
    if (seconds_since(t0) > budget) break;
    std::vector<bool> verdicts;
    auto over = [&] { return seconds_since(t0) > budget; };
    auto c0 = Clock::now();
    bool threw = false;
    std::string err;
    try {
      run_cell(c, rs, verdicts, over);
    } catch (const std::exception& e) {
      threw = true;
      err = e.what();
    }
    size_t done = verdicts.size();
    size_t bad = 0;
    for (size_t j = 0; j < done; ++j)
      if (!verdicts[j]) {
        ++bad;
        if (s.first_fail.empty()) s.first_fail = cell_tag(c) + " " + r_tag(rs[j]);
      }
    s.pairs_done += done;
    s.fails += bad;
    if (done == rs.size() && !bad) ++s.cells_full;
    diag << "  " << name << " [" << cell_tag(c) << "] " << done << "/" << rs.size()
         << (bad ? " with FAILURES" : " ok") << " (" << std::fixed << std::setprecision(1)
         << seconds_since(c0) << " s)" << (threw ? std::string(" exception: ") + err : "")
         << "\n";
    diag.flush();
  }
  s.secs = seconds_since(t0);
  return s;
}

// ---------------------------------------------------------------------------
// Random polynomials

Polynomial random_poly(VarSpace vs, int terms, long maxdeg, long cmax, Rng& rng) {
  Polynomial p(vs);
  for (int t = 0; t < terms; ++t) {
    Exp e(vs.dim(), 0);
    long left = maxdeg;
    for (int v = 0; v < vs.dim(); ++v) {
      long d = rnd(rng, 0, std::min(left, maxdeg / 2 + 1));
      e[v] = (std::uint16_t)d;
      left -= d;
    }
    long c = rnd(rng, -cmax, cmax);
    if (c == 0) c = 1;
    p.add_term(e, Int(c));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Criterion 3: difference-equation property suite over the grid

bool criterion3(double budget, std::string& detail, std::ostream& diag) {
  size_t xchecks = 0;
  bool xfail = false;
  double xspent = 0, xcap = 0.15 * budget;
  GridSummary s = run_grid(
      "c3", budget, diag,
      [](const Cell& c) { return nontrivial_r_list(c.mp, c.n, c.l); },
      [](const Cell& c) {
        return DenseInstance::estimated_bytes(c.mp, c.n, c.l) <= kDenseMemGate ||
               sparse_affordable(c);
      },
      [&](const Cell& c, const std::vector<RSeq>& rs, std::vector<bool>& verdicts,
          const std::function<bool()>& over) {
        bool dense_ok = DenseInstance::estimated_bytes(c.mp, c.n, c.l) <= kDenseMemGate;
        if (!dense_ok) {
          for (const RSeq& r : rs) {
            if (over()) break;
            SolveResult sol = solve_r(c.mp, c.n, c.l, r);
            verdicts.push_back(verify_symmetric_qkz(sol.f, c.mp).all_pass() &&
                               verify_qkz(sol.f, c.mp).all_pass() &&
                               verify_singular(sol.f, Int(c.mp.N)).all_pass());
          }
          return true;
        }
        DenseInstance inst(c.mp, c.n, c.l);
        for (const RSeq& r : rs) {
          if (over()) break;
          DenseSolution f = inst.solve_mod(r);
          bool ok = dense_check_symmetric(f, c.mp) && dense_check_qkz(f, c.mp) &&
                    dense_check_singular(f);
          // on the first pair of each affordable cell, the reference engine
          // runs the full verifier stack and must agree; these reruns share
          // a small slice of the budget
          if (verdicts.empty() && sparse_affordable(c) && xspent < xcap) {
            auto x0 = Clock::now();
            SolveResult sol = solve_r(c.mp, c.n, c.l, r);
            bool sp = verify_symmetric_qkz(sol.f, c.mp).all_pass() &&
                      verify_qkz(sol.f, c.mp).all_pass() &&
                      verify_singular(sol.f, Int(c.mp.N)).all_pass();
            if (sp != ok) xfail = true;
            ++xchecks;
            xspent += seconds_since(x0);
          }
          verdicts.push_back(ok);
        }
        return true;
      });
  std::ostringstream os;
  if (xfail) {
    detail = "modular and exact verifier verdicts disagree";
    return false;
  }
  if (s.fails) {
    os << s.fails << " instances failed (first: " << s.first_fail << ")";
    detail = os.str();
    return false;
  }
  if (!s.complete()) {
    os << "no counterexamples, but only " << s.coverage("(N,kappa,n,l,r) instances")
       << " fit the " << (long)budget << " s budget (" << xchecks
       << " exact-engine cross-checks agree); rerun with --exhaustive";
    detail = os.str();
    return false;
  }
  os << "all " << s.coverage("(N,kappa,n,l,r) instances") << " verified (" << xchecks
     << " exact-engine cross-checks agree) in " << std::fixed << std::setprecision(0) << s.secs
     << " s";
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: difference r-integrals annihilate discrete differentials

bool criterion4(std::string& detail, std::ostream& diag) {
  Rng rng(0x9e3779b97f4a7c15ull);
  const std::array<long, 5> mods{3, 5, 7, 9, 13};
  size_t checked = 0, api_checked = 0;
  auto t0 = Clock::now();
  for (int it = 0; it < 1000; ++it) {
    long N = mods[it % mods.size()];
    long kap = rnd(rng, 1, N - 1);
    while (std::gcd(kap, N) != 1) kap = rnd(rng, 1, N - 1);
    ModParams mp = compute_params(N, kap);
    int l = 1 + (it & 1);
    VarSpace vs{l, 2};
    Polynomial p = random_poly(vs, (int)rnd(rng, 3, 8), 10, 50, rng);
    for (int j = 1; j <= l; ++j) {
      Polynomial q = discrete_derivative(p, vs.t_index(j), mp.kappa);
      StringExpansion se = to_string_basis(q, mp.kappa);
      std::vector<RSeq> support;
      for (const auto& [r, c] : se.coeff) {
        support.push_back(r);
        // {q}_r = N_r * c_r; the scaled coefficient must vanish mod N
        Polynomial scaled = c * Int(n_r(r, N));
        if (!reduce_mod(scaled, Int(N)).is_zero()) {
          detail = "nonzero integral at N=" + std::to_string(N) + " j=" + std::to_string(j) +
                   " " + r_tag(r);
          return false;
        }
        ++checked;
      }
      // spot-check the public integral entry point against the expansion
      for (int pick = 0; pick < 3 && !support.empty(); ++pick) {
        const RSeq& r = support[(size_t)rnd(rng, 0, (long)support.size() - 1)];
        if (!reduce_mod(difference_r_integral(q, r, mp), Int(N)).is_zero()) {
          detail = "difference_r_integral nonzero at N=" + std::to_string(N) + " " + r_tag(r);
          return false;
        }
        ++api_checked;
      }
    }
  }
  std::ostringstream os;
  os << "1000 random polynomials, " << checked << " supported (j,r) integrals vanish mod N ("
     << api_checked << " via the public entry point) in " << std::fixed << std::setprecision(1)
     << seconds_since(t0) << " s";
  detail = os.str();
  diag << "  c4 " << detail << "\n";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 5: string products equal master polynomial times rational weight

bool criterion5(std::string& detail, std::ostream& diag) {
  Rng rng(0xc2b2ae3d27d4eb4full);
  const std::array<long, 5> mods{3, 5, 7, 9, 13};
  const std::array<std::pair<int, int>, 6> shapes{{{2, 1}, {3, 1}, {4, 1}, {5, 1}, {4, 2}, {5, 2}}};
  auto t0 = Clock::now();
  size_t points_checked = 0, poly_crosschecks = 0;
  for (int it = 0; it < 200; ++it) {
    auto [n, l] = shapes[it % shapes.size()];
    long N = mods[(size_t)rnd(rng, 0, (long)mods.size() - 1)];
    long kap = rnd(rng, 1, N - 1);
    while (std::gcd(kap, N) != 1) kap = rnd(rng, 1, N - 1);
    ModParams mp = compute_params(N, kap);
    VarSpace vs{l, n};
    // random l-subset I and permutation tau
    std::vector<int> slots(n);
    std::iota(slots.begin(), slots.end(), 1);
    std::shuffle(slots.begin(), slots.end(), rng);
    Subset I(slots.begin(), slots.begin() + l);
    std::sort(I.begin(), I.end());
    std::vector<int> tau(l);
    std::iota(tau.begin(), tau.end(), 1);
    std::shuffle(tau.begin(), tau.end(), rng);

    std::vector<SummandFactor> factors = weight_summand_factors(I, tau, mp, n);
    // the master polynomial as its defining list of string factors
    std::vector<Polynomial> phi;
    for (int i = 1; i <= l; ++i)
      for (int a = 1; a <= n; ++a) {
        LinearForm lf(vs);
        lf.coeff[vs.t_index(i)] = 1;
        lf.coeff[vs.z_index(a)] = -1;
        phi.push_back(pochhammer(lf, mp.k, mp.kappa));
      }
    for (int i = 1; i <= l; ++i)
      for (int j = i + 1; j <= l; ++j) {
        LinearForm lf(vs);
        lf.coeff[vs.t_index(i)] = 1;
        lf.coeff[vs.t_index(j)] = -1;
        lf.constant = 1;
        phi.push_back(pochhammer(lf, mp.kprime, mp.kappa));
      }
    if (mp.k <= 3 && n <= 3) {
      // cheap cells: the factor lists must multiply to the library products
      Polynomial u(vs, 1), m(vs, 1);
      for (const auto& f : factors) u = u * f.poly;
      for (const auto& f : phi) m = m * f;
      if (u != weight_summand(I, tau, mp, n) || m != master_polynomial(mp, n, l)) {
        detail = "factorized products disagree with the expanded library forms";
        return false;
      }
      ++poly_crosschecks;
    }
    long kk = mp.k * mp.kappa, kpk = mp.kprime * mp.kappa;
    for (int pt = 0; pt < 20; ++pt) {
      std::vector<Rat> point(vs.dim());
      bool admissible = false;
      for (int attempt = 0; attempt < 100 && !admissible; ++attempt) {
        for (auto& q : point) {
          Rat v(rnd(rng, -40, 40), rnd(rng, 1, 6));
          v.canonicalize();
          q = v;
        }
        admissible = true;
        for (int i = 1; i <= l && admissible; ++i)
          for (int j = i + 1; j <= l && admissible; ++j)
            if (tau[i - 1] > tau[j - 1] &&
                point[vs.t_index(i)] - point[vs.t_index(j)] + 1 == 0)
              admissible = false;
        for (int i = 1; i <= l && admissible; ++i)
          for (int ss = 1; ss <= I[i - 1] && admissible; ++ss)
            if (point[vs.t_index(tau[i - 1])] - point[vs.z_index(ss)] == 0) admissible = false;
      }
      if (!admissible) {
        detail = "could not sample an admissible point";
        return false;
      }
      Rat u(1), m(1), w(1);
      for (const auto& f : factors) u *= evaluate_rational(f.poly, point);
      for (const auto& f : phi) m *= evaluate_rational(f, point);
      // the rational weight: inverted t-pairs contribute (t_i-t_j+1-k'kappa)
      // over (t_i-t_j+1); slot i contributes 1/(t_{tau(i)}-z_{a_i}) and
      // (t_{tau(i)}-z_s-k kappa)/(t_{tau(i)}-z_s) for each s < a_i
      for (int i = 1; i <= l; ++i)
        for (int j = i + 1; j <= l; ++j)
          if (tau[i - 1] > tau[j - 1]) {
            Rat x = point[vs.t_index(i)] - point[vs.t_index(j)] + 1;
            w *= (x - kpk) / x;
          }
      for (int i = 1; i <= l; ++i) {
        Rat t = point[vs.t_index(tau[i - 1])];
        int a = I[i - 1];
        for (int ss = 1; ss < a; ++ss) {
          Rat d = t - point[vs.z_index(ss)];
          w *= (d - kk) / d;
        }
        w /= t - point[vs.z_index(a)];
      }
      if (u != m * w) {
        detail = "U != Phi * w at a rational point (" + cell_tag({mp, n, l}) + ")";
        return false;
      }
      ++points_checked;
    }
  }
  std::ostringstream os;
  os << "200 random (I,tau) instances, " << points_checked
     << " rational points match exactly (" << poly_crosschecks
     << " full polynomial cross-checks) in " << std::fixed << std::setprecision(1)
     << seconds_since(t0) << " s";
  detail = os.str();
  diag << "  c5 " << detail << "\n";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 6: differential-equation suite over the grid

bool criterion6(double budget, std::string& detail, std::ostream& diag) {
  size_t xchecks = 0;
  bool xfail = false;
  double xspent = 0, xcap = 0.15 * budget;
  GridSummary s = run_grid(
      "c6", budget, diag,
      [](const Cell& c) { return maximal_r_list(c.mp, c.n, c.l); },
      [](const Cell& c) {
        return DenseInstance::estimated_bytes(c.mp, c.n, c.l) <= kDenseMemGate ||
               sparse_affordable(c);
      },
      [&](const Cell& c, const std::vector<RSeq>& rs, std::vector<bool>& verdicts,
          const std::function<bool()>& over) {
        bool dense_ok = DenseInstance::estimated_bytes(c.mp, c.n, c.l) <= kDenseMemGate;
        if (!dense_ok) {
          for (const RSeq& r : rs) {
            if (over()) break;
            VectorPolynomial f = solve_kz_r(c.mp, c.n, c.l, r);
            verdicts.push_back(verify_kz_mod_n(f, c.mp).all_pass());
          }
          return true;
        }
        DenseInstance inst(c.mp, c.n, c.l);
        for (const RSeq& r : rs) {
          if (over()) break;
          DenseSolution f = inst.solve_kz_mod(r);
          bool ok = dense_check_kz(f, c.mp);
          if (verdicts.empty() && sparse_affordable(c) && xspent < xcap) {
            auto x0 = Clock::now();
            bool sp = verify_kz_mod_n(solve_kz_r(c.mp, c.n, c.l, r), c.mp).all_pass();
            if (sp != ok) xfail = true;
            ++xchecks;
            xspent += seconds_since(x0);
          }
          verdicts.push_back(ok);
        }
        return true;
      });
  std::ostringstream os;
  if (xfail) {
    detail = "modular and exact verifier verdicts disagree";
    return false;
  }
  if (s.fails) {
    os << s.fails << " instances failed (first: " << s.first_fail << ")";
    detail = os.str();
    return false;
  }
  if (!s.complete()) {
    os << "no counterexamples, but only " << s.coverage("maximal-r instances") << " fit the "
       << (long)budget << " s budget (" << xchecks
       << " exact-engine cross-checks agree); rerun with --exhaustive";
    detail = os.str();
    return false;
  }
  os << "all " << s.coverage("maximal-r instances") << " verified (" << xchecks
     << " exact-engine cross-checks agree) in " << std::fixed << std::setprecision(0) << s.secs
     << " s";
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: top-degree comparison of the two solution families

bool criterion7(double budget, std::string& detail, std::ostream& diag) {
  // the degree-1 reference pair first: N=5, kappa=2, n=3, l=1, r=4
  {
    ModParams mp = compute_params(5, 2);
    RSeq r{4};
    if (top_degree_d_r(mp, 3, 1, r) != 1) {
      detail = "reference pair does not sit at degree 1";
      return false;
    }
    SolveResult fq = solve_r(mp, 3, 1, r);
    VectorPolynomial fk = solve_kz_r(mp, 3, 1, r);
    if (!compare_top_degree(fq.f, fk, mp, r).all_pass()) {
      detail = "reference pair fails the degree-1 comparison";
      return false;
    }
  }
  // exact integer coefficients are needed on both sides, so only the sparse
  // engine applies; cells past its memory envelope stay uncovered
  GridSummary s = run_grid(
      "c7", budget, diag,
      [](const Cell& c) { return maximal_r_list(c.mp, c.n, c.l); },
      [](const Cell& c) { return sparse_affordable(c); },
      [](const Cell& c, const std::vector<RSeq>& rs, std::vector<bool>& verdicts,
         const std::function<bool()>& over) {
        for (const RSeq& r : rs) {
          if (over()) break;
          SolveResult fq = solve_r(c.mp, c.n, c.l, r);
          VectorPolynomial fk = solve_kz_r(c.mp, c.n, c.l, r);
          verdicts.push_back(compare_top_degree(fq.f, fk, c.mp, r).all_pass());
        }
        return true;
      });
  std::ostringstream os;
  if (s.fails) {
    os << s.fails << " comparisons failed (first: " << s.first_fail << ")";
    detail = os.str();
    return false;
  }
  if (!s.complete()) {
    os << "degree-1 reference pair matches; no counterexamples, but only "
       << s.coverage("maximal-r comparisons") << " are reachable (budget " << (long)budget
       << " s, " << s.cells_gated << " cells beyond the exact-arithmetic memory envelope)";
    detail = os.str();
    return false;
  }
  os << "degree-1 reference pair plus " << s.coverage("maximal-r comparisons") << " in "
     << std::fixed << std::setprecision(0) << s.secs << " s";
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 8: algebraic identity battery

Polynomial poly_pow(Polynomial b, long e) {
  Polynomial r(b.space(), 1);
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool criterion8(std::string& detail, std::ostream& diag) {
  auto t0 = Clock::now();
  VarSpace uv{0, 2};
  Polynomial u = Polynomial::z(uv, 1), v = Polynomial::z(uv, 2);
  auto op = [](const VectorPolynomial& w, const Polynomial& scal, int a, int b) {
    return scalar_mul(scal, w) - apply_permutation(w, a, b);
  };
  size_t yb = 0, unit = 0;
  for (int lw = 0; lw <= 3; ++lw)
    for (const Subset& I : all_subsets(3, lw)) {
      VectorPolynomial w(3, lw, uv);
      w.set(I, Polynomial(uv, 1));
      // cleared braid relation: (u-v-P12)(u-P13)(v-P23) = (v-P23)(u-P13)(u-v-P12)
      VectorPolynomial lhs = op(op(op(w, v, 2, 3), u, 1, 3), u - v, 1, 2);
      VectorPolynomial rhs = op(op(op(w, u - v, 1, 2), u, 1, 3), v, 2, 3);
      if (!(lhs == rhs)) {
        detail = "braid relation fails on a basis vector";
        return false;
      }
      ++yb;
      // cleared inversion: (u-P)(-u-P) = (1-u^2) id, for every transposition
      for (auto [a, b] : {std::pair<int, int>{1, 2}, {1, 3}, {2, 3}}) {
        VectorPolynomial res = op(op(w, u, a, b), -u, a, b);
        if (!(res == scalar_mul(Polynomial(uv, 1) - u * u, w))) {
          detail = "inversion relation fails";
          return false;
        }
        ++unit;
      }
    }
  // product rule: D(fg) = f Dg + (Df) s(g), s the step-down shift of g
  Rng rng(0xa0761d6478bd642full);
  size_t leib = 0;
  for (int it = 0; it < 50; ++it) {
    VarSpace vs{1, 1};
    long kap = rnd(rng, 1, 3);
    Polynomial f = random_poly(vs, 4, 6, 9, rng);
    Polynomial g = random_poly(vs, 4, 6, 9, rng);
    int tv = vs.t_index(1);
    Polynomial lhs = discrete_derivative(f * g, tv, kap);
    Polynomial rhs = f * discrete_derivative(g, tv, kap) +
                     discrete_derivative(f, tv, kap) * substitute_shift(g, tv, Int(-kap));
    if (lhs != rhs) {
      detail = "product rule fails";
      return false;
    }
    ++leib;
  }
  // string binomial expansion: [x+y]_m = sum_j C(m,j) [x]_j [y]_{m-j}
  VarSpace xy{0, 2};
  size_t vdm = 0;
  for (long kap = 1; kap <= 3; ++kap)
    for (long m = 0; m <= 8; ++m) {
      LinearForm lxy(xy), lx(xy), ly(xy);
      lxy.coeff[0] = lxy.coeff[1] = 1;
      lx.coeff[0] = 1;
      ly.coeff[1] = 1;
      Polynomial lhs = pochhammer(lxy, m, kap);
      Polynomial rhs(xy);
      for (long j = 0; j <= m; ++j)
        rhs += pochhammer(lx, j, kap) * pochhammer(ly, m - j, kap) *
               binomial((unsigned long)m, (unsigned long)j);
      if (lhs != rhs) {
        detail = "string binomial expansion fails at m=" + std::to_string(m);
        return false;
      }
      ++vdm;
    }
  // prime-length strings collapse: [t]_p == t^p - t mod p for gcd(kappa,p)=1
  VarSpace tt{1, 0};
  size_t flt = 0;
  for (long p : {3L, 5L, 7L})
    for (long kap = 1; kap < p; ++kap) {
      Polynomial t = Polynomial::t(tt, 1);
      Polynomial diff = pochhammer_t(tt, 1, p, kap) - (poly_pow(t, p) - t);
      if (!reduce_mod(diff, Int(p)).is_zero()) {
        detail = "prime string collapse fails at p=" + std::to_string(p);
        return false;
      }
      ++flt;
    }
  // constancy criterion: D(sum_m c_m [x]_m) == 0 mod N iff N | m c_m for all m
  VarSpace xx{0, 1};
  size_t ncs = 0;
  for (long N : {3L, 4L, 5L, 6L, 7L, 8L, 9L, 12L, 13L})
    for (long kap = 1; kap < N; ++kap) {
      if (std::gcd(kap, N) != 1) continue;
      LinearForm lx(xx);
      lx.coeff[0] = 1;
      for (long m = 0; m <= 2 * N; ++m) {
        bool expect = (m % N == 0);
        if (is_n_constant(pochhammer(lx, m, kap), 0, N, kap) != expect) {
          detail = "string constancy fails at N=" + std::to_string(N) + " m=" + std::to_string(m);
          return false;
        }
        ++ncs;
      }
      // mixed combinations, predicted from the coefficient criterion
      for (int it = 0; it < 4; ++it) {
        Polynomial g(xx);
        bool expect = true;
        for (long m = 0; m <= N + 2; ++m) {
          long c = rnd(rng, 0, N - 1);
          if (rnd(rng, 0, 2) == 0) c = 0;
          if (!c) continue;
          g += pochhammer(lx, m, kap) * Int(c);
          if ((m * c) % N != 0) expect = false;
        }
        if (is_n_constant(g, 0, N, kap) != expect) {
          detail = "constancy criterion fails at N=" + std::to_string(N);
          return false;
        }
        ++ncs;
      }
    }
  std::ostringstream os;
  os << "braid " << yb << ", inversion " << unit << ", product rule " << leib
     << ", string binomial " << vdm << ", prime collapse " << flt << ", constancy " << ncs
     << " checks, all exact in " << std::fixed << std::setprecision(1) << seconds_since(t0)
     << " s";
  detail = os.str();
  diag << "  c8 " << detail << "\n";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 9: repeated versus joint difference integrals

bool criterion9(std::string& detail, std::ostream& diag) {
  Rng rng(0xe7037ed1a0b428dbull);
  const std::array<long, 5> mods{4, 6, 8, 9, 12};
  auto t0 = Clock::now();
  size_t nonvacuous = 0;
  for (int it = 0; it < 200; ++it) {
    long N = mods[it % mods.size()];
    long kap = rnd(rng, 1, N - 1);
    while (std::gcd(kap, N) != 1) kap = rnd(rng, 1, N - 1);
    ModParams mp = compute_params(N, kap);
    VarSpace vs{2, 1};
    // draw the t-exponents per variable so the string support reaches the
    // sampled (r1, r2) often enough for the identity to bite
    Polynomial p(vs);
    for (int t = (int)rnd(rng, 3, 6); t > 0; --t) {
      Exp e{(std::uint16_t)rnd(rng, 0, 12), (std::uint16_t)rnd(rng, 0, 12),
            (std::uint16_t)rnd(rng, 0, 3)};
      long c = rnd(rng, -30, 30);
      p.add_term(e, Int(c ? c : 1));
    }
    long r1 = rnd(rng, 0, 13), r2 = rnd(rng, 0, 13);
    // The repeated integral scales the joint string coefficient by
    // N_{r1} N_{r2}, the joint integral by N_{(r1,r2)} = lcm(N_{r1}, N_{r2}),
    // so the exact conversion factor is their quotient gcd(N_{r1}, N_{r2}).
    // A familiar alternative statement of this relation scales the joint
    // integral by N_{r1} N_{r2} / gcd = lcm instead; on these instances that
    // overshoots by lcm/gcd, so it is recorded here and not asserted.
    Polynomial rep = repeated_integral(p, r1, r2, mp);
    Polynomial joint = difference_r_integral(p, {r1, r2}, mp);
    long g = std::gcd(n_r({r1}, N), n_r({r2}, N));
    if (rep != joint * Int(g)) {
      detail = "mismatch at N=" + std::to_string(N) + " r1=" + std::to_string(r1) +
               " r2=" + std::to_string(r2);
      return false;
    }
    if (!joint.is_zero()) ++nonvacuous;
  }
  if (nonvacuous < 50) {
    detail = "only " + std::to_string(nonvacuous) + " instances had a nonzero joint integral";
    return false;
  }
  std::ostringstream os;
  os << "200 instances (" << nonvacuous
     << " with nonzero joint integral): repeated == gcd(N_r1,N_r2) * joint exactly, in "
     << std::fixed << std::setprecision(1) << seconds_since(t0) << " s";
  detail = os.str();
  diag << "  c9 " << detail << "\n";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance battery: nine end-to-end checks, one line each"};
  double budget = 540;
  bool exhaustive = false;
  std::string only;
  std::string bin = std::getenv("QKZ_BIN") ? std::getenv("QKZ_BIN") : "";
  app.add_option("--budget-seconds", budget,
                 "wall-clock budget for the main property grid (half for each of the "
                 "two companion grids)");
  app.add_flag("--exhaustive", exhaustive, "lift all grid budgets (hours to days)");
  app.add_option("--only", only, "comma-separated criterion numbers to run, e.g. 1,2,8");
  app.add_option("--bin", bin, "path to the qkz binary (default: $QKZ_BIN)");
  CLI11_PARSE(app, argc, argv);
  if (exhaustive) budget = 1e18;

  std::set<int> selected;
  if (!only.empty()) {
    std::stringstream ss(only);
    std::string tok;
    while (std::getline(ss, tok, ',')) selected.insert(std::atoi(tok.c_str()));
  }
  auto wanted = [&](int k) { return selected.empty() || selected.count(k) > 0; };

  std::ostream& diag = std::cerr;
  bool all = true;
  auto report = [&](int k, bool pass, const std::string& detail) {
    std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << " - " << detail
              << std::endl;
    if (!pass) all = false;
  };

  if (wanted(1)) {
    std::string d;
    bool ok = !bin.empty()
                  ? gold_instance(bin, "solve --N 3 --kappa 2 --n 3 --l 1 --r 2", kGoldAF, d)
                  : (d = "no CLI binary (set QKZ_BIN or --bin)", false);
    report(1, ok, ok ? "gold instance A (N=3): " + d : d);
  }
  if (wanted(2)) {
    std::string d;
    bool ok = !bin.empty()
                  ? gold_instance(bin, "solve --N 5 --kappa 2 --n 3 --l 1 --r 4", kGoldBF, d)
                  : (d = "no CLI binary (set QKZ_BIN or --bin)", false);
    report(2, ok, ok ? "gold instance B (N=5): " + d : d);
  }
  if (wanted(3)) {
    std::string d;
    diag << "criterion 3: difference-equation suite\n";
    report(3, criterion3(budget, d, diag), d);
  }
  if (wanted(4)) {
    std::string d;
    report(4, criterion4(d, diag), d);
  }
  if (wanted(5)) {
    std::string d;
    report(5, criterion5(d, diag), d);
  }
  if (wanted(6)) {
    std::string d;
    diag << "criterion 6: differential-equation suite\n";
    report(6, criterion6(budget / 2, d, diag), d);
  }
  if (wanted(7)) {
    std::string d;
    diag << "criterion 7: top-degree comparison\n";
    report(7, criterion7(budget / 2, d, diag), d);
  }
  if (wanted(8)) {
    std::string d;
    report(8, criterion8(d, diag), d);
  }
  if (wanted(9)) {
    std::string d;
    report(9, criterion9(d, diag), d);
  }
  return all ? 0 : 1;
}
