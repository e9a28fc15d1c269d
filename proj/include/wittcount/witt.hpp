#pragma once

// Witt structure polynomials over Z. For r summands the canonical variable
// layout is x_{01},...,x_{0r}; x_{11},...,x_{1r}; ... with flat index
// i*r + j for level i and summand j (0-based). The sum polynomials S_n are
// produced by the ghost-component recursion
//   S_n = (sum_j w_n(X_j) - sum_{i<n} p^i S_i^(p^(n-i))) / p^n,
// whose divisions are exact; inexact division would signal a generation bug
// and aborts. Generation is guarded by a hard term-count budget and results
// are cached per (p, r).

#include <map>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wittcount/common.hpp"
#include "wittcount/mpoly.hpp"

namespace wittcount {

struct WittVarLayout {
  int r = 0;     // summands
  int nmax = 0;  // highest level

  int index(int level, int summand) const { return level * r + summand; }
  int arity() const { return (nmax + 1) * r; }
};

inline constexpr std::size_t kDefaultWittBudget = 1500000;

// w_n = x_0^(p^n) + p x_1^(p^(n-1)) + ... + p^n x_n, arity n+1.
inline ZZPoly ghost_poly(long long p, int n) {
  if (n < 0) throw InvariantError("ghost_poly: level must be nonnegative");
  ZZPoly g(ZZRing{}, n + 1);
  mpz_class pw = 1;
  for (int i = 0; i <= n; ++i) {
    Monomial m{std::vector<uint32_t>(static_cast<std::size_t>(n + 1), 0)};
    unsigned long e = 1;
    for (int k = 0; k < n - i; ++k) e = static_cast<unsigned long>(e * p);
    m.e[static_cast<std::size_t>(i)] = static_cast<uint32_t>(e);
    g.add_term(m, pw);
    pw *= to_mpz(p);
  }
  return g;
}

namespace detail {

inline void check_budget(const ZZPoly& poly, std::size_t budget, const std::string& what) {
  if (poly.term_count() > budget) {
    throw BudgetError(what + ": term count " + std::to_string(poly.term_count()) +
                      " exceeds budget " + std::to_string(budget));
  }
}

inline ZZPoly pow_budgeted(const ZZPoly& a, unsigned long e, std::size_t budget,
                           const std::string& what) {
  ZZPoly acc = ZZPoly::constant(a.ring(), a.arity(), 1);
  ZZPoly base = a;
  while (e > 0) {
    if (e & 1UL) {
      acc = acc * base;
      check_budget(acc, budget, what);
    }
    e >>= 1UL;
    if (e > 0) {
      base = base * base;
      check_budget(base, budget, what);
    }
  }
  return acc;
}

// S_0..S_nmax, each at its natural arity (n+1)*r. The layout is a prefix of
// any larger layout with the same r, so lower polys extend by zero padding.
inline std::vector<ZZPoly> gen_sum_polys(long long p, int r, int nmax, std::size_t budget) {
  std::vector<ZZPoly> s;
  ZZRing zz;
  ZZPoly s0(zz, r);
  for (int j = 0; j < r; ++j) s0 = s0 + ZZPoly::variable(zz, r, j);
  s.push_back(s0);
  for (int n = 1; n <= nmax; ++n) {
    std::string what = "witt_sum_polys(p=" + std::to_string(p) + ", r=" + std::to_string(r) +
                       ", n=" + std::to_string(n) + ")";
    WittVarLayout layout{r, n};
    int arity = layout.arity();
    ZZPoly acc(zz, arity);
    ZZPoly ghost = ghost_poly(p, n);
    for (int j = 0; j < r; ++j) {
      std::vector<int> var_map(static_cast<std::size_t>(n + 1));
      for (int i = 0; i <= n; ++i) var_map[static_cast<std::size_t>(i)] = layout.index(i, j);
      acc = acc + ghost.embed(arity, var_map);
    }
    mpz_class pi = 1;
    for (int i = 0; i < n; ++i) {
      unsigned long e = 1;
      for (int k = 0; k < n - i; ++k) e = static_cast<unsigned long>(e * p);
      ZZPoly term = pow_budgeted(s[static_cast<std::size_t>(i)].extend_arity(arity), e, budget, what);
      acc = acc - term.scale(pi);
      check_budget(acc, budget, what);
      pi *= to_mpz(p);
    }
    acc = exact_div_int(acc, pi);  // pi == p^n here
    check_budget(acc, budget, what);
    s.push_back(std::move(acc));
  }
  return s;
}

// Binary product polynomials M_0..M_nmax via
//   M_n = (w_n(X) w_n(Y) - sum_{i<n} p^i M_i^(p^(n-i))) / p^n,
// layout r = 2 with x_i at index 2i and y_i at 2i+1.
inline std::vector<ZZPoly> gen_prod_polys(long long p, int nmax, std::size_t budget) {
  std::vector<ZZPoly> m;
  ZZRing zz;
  m.push_back(ZZPoly::variable(zz, 2, 0) * ZZPoly::variable(zz, 2, 1));
  for (int n = 1; n <= nmax; ++n) {
    std::string what = "witt_prod_polys(p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")";
    WittVarLayout layout{2, n};
    int arity = layout.arity();
    ZZPoly ghost = ghost_poly(p, n);
    std::vector<int> xs(static_cast<std::size_t>(n + 1)), ys(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
      xs[static_cast<std::size_t>(i)] = layout.index(i, 0);
      ys[static_cast<std::size_t>(i)] = layout.index(i, 1);
    }
    ZZPoly acc = ghost.embed(arity, xs) * ghost.embed(arity, ys);
    check_budget(acc, budget, what);
    mpz_class pi = 1;
    for (int i = 0; i < n; ++i) {
      unsigned long e = 1;
      for (int k = 0; k < n - i; ++k) e = static_cast<unsigned long>(e * p);
      ZZPoly term = pow_budgeted(m[static_cast<std::size_t>(i)].extend_arity(arity), e, budget, what);
      acc = acc - term.scale(pi);
      check_budget(acc, budget, what);
      pi *= to_mpz(p);
    }
    acc = exact_div_int(acc, pi);
    check_budget(acc, budget, what);
    m.push_back(std::move(acc));
  }
  return m;
}

class StructurePolyCache {
 public:
  static StructurePolyCache& instance() {
    static StructurePolyCache c;
    return c;
  }

  std::vector<ZZPoly> sums(long long p, int r, int nmax, std::size_t budget) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(p, r);
    auto it = sums_.find(key);
    if (it == sums_.end() || static_cast<int>(it->second.size()) <= nmax) {
      auto polys = gen_sum_polys(p, r, nmax, budget);
      it = sums_.insert_or_assign(key, std::move(polys)).first;
    }
    return std::vector<ZZPoly>(it->second.begin(), it->second.begin() + nmax + 1);
  }

  std::vector<ZZPoly> prods(long long p, int nmax, std::size_t budget) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = prods_.find(p);
    if (it == prods_.end() || static_cast<int>(it->second.size()) <= nmax) {
      auto polys = gen_prod_polys(p, nmax, budget);
      it = prods_.insert_or_assign(p, std::move(polys)).first;
    }
    return std::vector<ZZPoly>(it->second.begin(), it->second.begin() + nmax + 1);
  }

 private:
  std::mutex mu_;
  std::map<std::pair<long long, int>, std::vector<ZZPoly>> sums_;
  std::map<long long, std::vector<ZZPoly>> prods_;
};

}  // namespace detail

inline std::vector<ZZPoly> witt_sum_polys(long long p, int r, int nmax,
                                          std::size_t budget = kDefaultWittBudget) {
  if (!is_prime_u64(static_cast<unsigned long long>(p > 0 ? p : 0))) {
    throw InvariantError("witt_sum_polys: p must be prime");
  }
  if (r < 1 || nmax < 0) throw InvariantError("witt_sum_polys: need r >= 1, nmax >= 0");
  return detail::StructurePolyCache::instance().sums(p, r, nmax, budget);
}

inline std::vector<ZZPoly> witt_prod_polys(long long p, int nmax,
                                           std::size_t budget = kDefaultWittBudget) {
  if (!is_prime_u64(static_cast<unsigned long long>(p > 0 ? p : 0))) {
    throw InvariantError("witt_prod_polys: p must be prime");
  }
  if (nmax < 0) throw InvariantError("witt_prod_polys: nmax must be nonnegative");
  return detail::StructurePolyCache::instance().prods(p, nmax, budget);
}

// s_n = S_n with x_{ij} replaced by x_{ij}^(p^i). The exponent map is
// injective on monomials, so this is a plain term rewrite.
inline std::vector<ZZPoly> substituted_sum_polys(long long p, int r, int nmax,
                                                 std::size_t budget = kDefaultWittBudget) {
  std::vector<ZZPoly> s = witt_sum_polys(p, r, nmax, budget);
  std::vector<ZZPoly> out;
  out.reserve(s.size());
  for (int n = 0; n <= nmax; ++n) {
    WittVarLayout layout{r, n};
    std::vector<unsigned long> scale(static_cast<std::size_t>(layout.arity()), 1);
    for (int i = 0; i <= n; ++i) {
      unsigned long pi = 1;
      for (int k = 0; k < i; ++k) pi = static_cast<unsigned long>(pi * p);
      for (int j = 0; j < r; ++j) scale[static_cast<std::size_t>(layout.index(i, j))] = pi;
    }
    ZZPoly t(ZZRing{}, layout.arity());
    for (const auto& [m, v] : s[static_cast<std::size_t>(n)].terms()) {
      Monomial mm = m;
      for (std::size_t j = 0; j < mm.e.size(); ++j) {
        mm.e[j] = static_cast<uint32_t>(mm.e[j] * scale[j]);
      }
      t.add_term(mm, v);
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Reduce integer coefficients mod p into the prime subfield of the target.
inline FqPoly to_fq_poly(const ZZPoly& a, const FqRing& ring) {
  long long p = ring.f->p();
  FqPoly r(ring, a.arity());
  for (const auto& [m, v] : a.terms()) {
    mpz_class red = v % to_mpz(p);
    long long c = red.get_si();
    if (c < 0) c += p;
    if (c == 0) continue;
    r.add_term(m, ring.f->from_int(c));
  }
  return r;
}

struct GhostCheckReport {
  bool ok = true;
  int trials = 0;
  std::string detail;  // first failing configuration, if any
};

// Exact integer check that the ghost map turns Witt sums into plain sums:
// w_n(S_0..S_n evaluated) == sum_j w_n(a_j) for random integer vectors.
inline GhostCheckReport check_ghost_additivity(long long p, int r, int nmax, int trials,
                                               unsigned long long seed,
                                               std::size_t budget = kDefaultWittBudget) {
  GhostCheckReport rep;
  std::vector<ZZPoly> s = witt_sum_polys(p, r, nmax, budget);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    // coordinates in [-9, 9]
    std::vector<mpz_class> flat(static_cast<std::size_t>((nmax + 1) * r));
    for (auto& v : flat) v = static_cast<long>(rng() % 19) - 9;
    std::vector<mpz_class> sums(static_cast<std::size_t>(nmax + 1));
    for (int n = 0; n <= nmax; ++n) {
      std::vector<mpz_class> point(flat.begin(), flat.begin() + (n + 1) * r);
      sums[static_cast<std::size_t>(n)] = s[static_cast<std::size_t>(n)].eval(point);
    }
    for (int n = 0; n <= nmax; ++n) {
      ZZPoly ghost = ghost_poly(p, n);
      mpz_class lhs = ghost.eval(std::vector<mpz_class>(sums.begin(), sums.begin() + n + 1));
      mpz_class rhs = 0;
      WittVarLayout layout{r, n};
      for (int j = 0; j < r; ++j) {
        std::vector<mpz_class> aj(static_cast<std::size_t>(n + 1));
        for (int i = 0; i <= n; ++i) aj[static_cast<std::size_t>(i)] = flat[static_cast<std::size_t>(layout.index(i, j))];
        rhs += ghost.eval(aj);
      }
      if (lhs != rhs) {
        rep.ok = false;
        rep.detail = "additivity failed at trial " + std::to_string(t) + ", level " + std::to_string(n);
        rep.trials = t + 1;
        return rep;
      }
    }
    rep.trials = t + 1;
  }
  return rep;
}

// Same shape of check for the binary product polynomials:
// w_n(M_0..M_n evaluated) == w_n(a) * w_n(b).
inline GhostCheckReport check_ghost_multiplicativity(long long p, int nmax, int trials,
                                                     unsigned long long seed,
                                                     std::size_t budget = kDefaultWittBudget) {
  GhostCheckReport rep;
  std::vector<ZZPoly> m = witt_prod_polys(p, nmax, budget);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<mpz_class> a(static_cast<std::size_t>(nmax + 1)), b(static_cast<std::size_t>(nmax + 1));
    for (auto& v : a) v = static_cast<long>(rng() % 19) - 9;
    for (auto& v : b) v = static_cast<long>(rng() % 19) - 9;
    std::vector<mpz_class> prods(static_cast<std::size_t>(nmax + 1));
    for (int n = 0; n <= nmax; ++n) {
      WittVarLayout layout{2, n};
      std::vector<mpz_class> point(static_cast<std::size_t>(layout.arity()));
      for (int i = 0; i <= n; ++i) {
        point[static_cast<std::size_t>(layout.index(i, 0))] = a[static_cast<std::size_t>(i)];
        point[static_cast<std::size_t>(layout.index(i, 1))] = b[static_cast<std::size_t>(i)];
      }
      prods[static_cast<std::size_t>(n)] = m[static_cast<std::size_t>(n)].eval(point);
    }
    for (int n = 0; n <= nmax; ++n) {
      ZZPoly ghost = ghost_poly(p, n);
      mpz_class lhs = ghost.eval(std::vector<mpz_class>(prods.begin(), prods.begin() + n + 1));
      mpz_class rhs = ghost.eval(std::vector<mpz_class>(a.begin(), a.begin() + n + 1)) *
                      ghost.eval(std::vector<mpz_class>(b.begin(), b.begin() + n + 1));
      if (lhs != rhs) {
        rep.ok = false;
        rep.detail = "multiplicativity failed at trial " + std::to_string(t) + ", level " + std::to_string(n);
        rep.trials = t + 1;
        return rep;
      }
    }
    rep.trials = t + 1;
  }
  return rep;
}

}  // namespace wittcount
