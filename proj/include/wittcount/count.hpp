#pragma once

// Solution counting for systems of congruences f_k(Y) = 0 mod p^(m_k) with Y
// ranging over a box, together with the q-divisibility bound machinery.
// Two independent counters are provided: direct enumeration of the box, and
// reduction to a polynomial system over F_q obtained from the Witt
// coordinates of f_k along the box lifting. Their agreement is asserted by
// verify(), and a failed divisibility bound under a verified hypothesis is a
// fatal error, never a warning.

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wittcount/boxes.hpp"
#include "wittcount/common.hpp"
#include "wittcount/ff.hpp"
#include "wittcount/mpoly.hpp"
#include "wittcount/witt.hpp"
#include "wittcount/zq.hpp"

namespace wittcount {

struct ConstraintInput {
  ZqPoly f;
  int m_k = 1;
  std::optional<long long> d_k;  // declared degree bound; defaults to deg f_k
};

struct Constraint {
  ZqPoly f;
  int m_k = 1;
  long long d_k = 1;                  // resolved declared bound, >= 1
  bool d_declared = false;
  std::optional<long long> deg_mod;   // deg of f with coefficients mod p^(m_k)
  bool vanishes = false;              // f = 0 mod p^(m_k)
};

class Instance {
 public:
  Instance(std::shared_ptr<const ZqCtx> ring, BoxSpec box, std::vector<ConstraintInput> polys)
      : ring_(std::move(ring)), box_(std::move(box)), n_(box_.n()) {
    if (!ring_) throw InvariantError("instance: null ring context");
    if (!ZqRing{ring_}.same(ZqRing{box_.ring()})) {
      throw InvariantError("instance: box ring disagrees with the instance ring");
    }
    // An empty system is allowed and counts the whole box.
    int max_mk = 0;
    for (auto& in : polys) {
      if (in.m_k < 1 || in.m_k > ring_->m()) {
        throw InvariantError("instance: constraint precision m_k = " + std::to_string(in.m_k) +
                             " outside [1, m]");
      }
      max_mk = std::max(max_mk, in.m_k);
      if (in.f.arity() != n_) throw InvariantError("instance: constraint arity disagrees with n");
      if (!in.f.ring().same(ZqRing{ring_})) {
        throw InvariantError("instance: constraint polynomial over the wrong ring");
      }
      if (in.f.is_zero()) throw InvariantError("instance: constraint polynomial is zero");
      long long pmk = 1;
      for (int i = 0; i < in.m_k; ++i) pmk *= ring_->p();
      std::optional<long long> deg_mod;
      for (const auto& [mono, coef] : in.f.terms()) {
        bool nonzero = false;
        for (int64_t v : coef.c) {
          if (v % pmk != 0) nonzero = true;
        }
        if (nonzero) {
          long long d = mono.total_degree();
          if (!deg_mod || d > *deg_mod) deg_mod = d;
        }
      }
      long long dk;
      bool declared = in.d_k.has_value();
      if (declared) {
        if (*in.d_k < 1) throw InvariantError("instance: declared degree bound must be >= 1");
        dk = *in.d_k;
      } else {
        dk = std::max<long long>(1, deg_mod.value_or(1));
      }
      cons_.push_back(
          Constraint{std::move(in.f), in.m_k, dk, declared, deg_mod, !deg_mod.has_value()});
    }
    if (!cons_.empty() && ring_->m() != max_mk) {
      throw InvariantError("instance: ring precision m = " + std::to_string(ring_->m()) +
                           " must equal max m_k = " + std::to_string(max_mk));
    }
  }

  const std::shared_ptr<const ZqCtx>& ring() const { return ring_; }
  const BoxSpec& box() const { return box_; }
  int n() const { return n_; }
  const std::vector<Constraint>& constraints() const { return cons_; }

 private:
  std::shared_ptr<const ZqCtx> ring_;
  BoxSpec box_;
  int n_;
  std::vector<Constraint> cons_;
};

struct CountOptions {
  long long cap = 10000000;        // enumeration cap on q^n
  int workers = 1;                 // contiguous chunks, deterministic totals
  std::size_t witt_budget = kDefaultWittBudget;
  long long interp_cap = kDefaultInterpolationCap;
};

// Teichmuller coefficient expansion of f into levels 0..upto-1, with levels
// as F_q polynomials carrying the original exponent vectors.
inline std::vector<FqPoly> teich_expand(const ZqPoly& f, int upto) {
  const ZqCtx& R = *f.ring().r;
  if (upto < 0 || upto > R.m()) throw InvariantError("teich_expand: level range outside [0, m]");
  FqRing ring{R.field()};
  std::vector<FqPoly> levels(static_cast<std::size_t>(upto), FqPoly(ring, f.arity()));
  for (const auto& [mono, coef] : f.terms()) {
    DigitVector dv = R.digits(coef);
    for (int i = 0; i < upto; ++i) {
      levels[static_cast<std::size_t>(i)].add_term(mono, dv.d[static_cast<std::size_t>(i)]);
    }
  }
  return levels;
}

namespace detail {

inline std::vector<long long> coords_of_index(long long idx, long long q, int n) {
  std::vector<long long> c(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    c[static_cast<std::size_t>(j)] = idx % q;
    idx /= q;
  }
  return c;
}

template <class Fn>
long long run_chunked(long long total, int workers, Fn&& body) {
  if (workers < 1) workers = 1;
  if (workers == 1 || total < 1024) return body(0, total);
  long long chunk = (total + workers - 1) / workers;
  std::vector<long long> partial(static_cast<std::size_t>(workers), 0);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    long long lo = w * chunk;
    long long hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&partial, &body, w, lo, hi]() { partial[static_cast<std::size_t>(w)] = body(lo, hi); });
  }
  for (auto& t : threads) t.join();
  long long sum = 0;
  for (long long v : partial) sum += v;  // fixed chunk order
  return sum;
}

}  // namespace detail

inline long long count_bruteforce(const Instance& inst, const CountOptions& opts = {}) {
  const ZqCtx& R = *inst.ring();
  const FieldCtx& f = *R.field();
  int n = inst.n();
  long long q = f.q();
  long long total = box_size(q, n);
  if (total > opts.cap) {
    throw BudgetError("count_bruteforce: q^n = " + std::to_string(total) + " exceeds cap " +
                      std::to_string(opts.cap));
  }
  // Separable box kinds admit per-coordinate lift tables.
  BoxKind kind = inst.box().kind();
  std::vector<std::vector<ZqElem>> lift_tab;
  if (kind == BoxKind::kTeichmuller || kind == BoxKind::kSplit) {
    lift_tab.assign(static_cast<std::size_t>(n), std::vector<ZqElem>(static_cast<std::size_t>(q)));
    for (int j = 0; j < n; ++j) {
      for (long long v = 0; v < q; ++v) {
        std::vector<FqElem> x(static_cast<std::size_t>(n), f.element(0));
        x[static_cast<std::size_t>(j)] = f.element(v);
        lift_tab[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)] =
            inst.box().lift_point(x)[static_cast<std::size_t>(j)];
      }
    }
  }
  std::vector<long long> pmk;
  uint32_t maxe = 1;
  for (const auto& c : inst.constraints()) {
    long long v = 1;
    for (int i = 0; i < c.m_k; ++i) v *= R.p();
    pmk.push_back(v);
    for (const auto& [mono, coef] : c.f.terms()) {
      for (uint32_t e : mono.e) maxe = std::max(maxe, e);
    }
  }
  const auto& cons = inst.constraints();
  auto body = [&](long long lo, long long hi) -> long long {
    long long cnt = 0;
    std::vector<ZqElem> y(static_cast<std::size_t>(n));
    std::vector<std::vector<ZqElem>> pows(static_cast<std::size_t>(n),
                                          std::vector<ZqElem>(static_cast<std::size_t>(maxe) + 1));
    for (long long idx = lo; idx < hi; ++idx) {
      std::vector<long long> ci = detail::coords_of_index(idx, q, n);
      if (!lift_tab.empty()) {
        for (int j = 0; j < n; ++j) {
          y[static_cast<std::size_t>(j)] =
              lift_tab[static_cast<std::size_t>(j)][static_cast<std::size_t>(ci[static_cast<std::size_t>(j)])];
        }
      } else {
        std::vector<FqElem> x(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = f.element(ci[static_cast<std::size_t>(j)]);
        y = inst.box().lift_point(x);
      }
      for (int j = 0; j < n; ++j) {
        pows[static_cast<std::size_t>(j)][0] = R.one();
        for (uint32_t e = 1; e <= maxe; ++e) {
          pows[static_cast<std::size_t>(j)][e] =
              R.mul(pows[static_cast<std::size_t>(j)][e - 1], y[static_cast<std::size_t>(j)]);
        }
      }
      bool all_zero = true;
      for (std::size_t k = 0; k < cons.size() && all_zero; ++k) {
        ZqElem acc = R.zero();
        for (const auto& [mono, coef] : cons[k].f.terms()) {
          ZqElem t = coef;
          for (int j = 0; j < n; ++j) {
            uint32_t e = mono.e[static_cast<std::size_t>(j)];
            if (e) t = R.mul(t, pows[static_cast<std::size_t>(j)][e]);
          }
          acc = R.add(acc, t);
        }
        for (int64_t v : acc.c) {
          if (v % pmk[k] != 0) all_zero = false;
        }
      }
      if (all_zero) ++cnt;
    }
    return cnt;
  };
  return detail::run_chunked(total, opts.workers, body);
}

struct FqSystemEntry {
  int k = 0;      // constraint index
  int level = 0;  // Witt coordinate level t in [0, m_k)
  FqPoly g;
};

struct FqSystem {
  FqRing ring;
  int n = 0;
  std::vector<FqSystemEntry> polys;
};

namespace detail {

// Witt coordinate vectors of functions F_q^n -> Z_q/p^m: entry t is the
// reduced polynomial for coordinate t, i.e. the t-th digit twisted by the
// t-fold pointwise Frobenius.
using WittVec = std::vector<FqPoly>;

inline WittVec wconst(const ZqCtx& R, const FqRing& ring, int arity, const ZqElem& c, int upto) {
  DigitVector dv = R.digits(c);
  WittVec w;
  w.reserve(static_cast<std::size_t>(upto));
  for (int t = 0; t < upto; ++t) {
    FqElem coord = R.field()->frobenius(dv.d[static_cast<std::size_t>(t)], t);
    w.push_back(FqPoly::constant(ring, arity, coord));
  }
  return w;
}

inline WittVec wfold(const std::vector<FqPoly>& structure, const WittVec& u, const WittVec& v,
                     int upto) {
  WittVec out;
  out.reserve(static_cast<std::size_t>(upto));
  for (int t = 0; t < upto; ++t) {
    WittVarLayout layout{2, t};
    std::vector<FqPoly> args;
    args.reserve(static_cast<std::size_t>(layout.arity()));
    for (int i = 0; i <= t; ++i) {
      args.push_back(u[static_cast<std::size_t>(i)]);
      args.push_back(v[static_cast<std::size_t>(i)]);
    }
    out.push_back(compose_reduced(structure[static_cast<std::size_t>(t)], args));
  }
  return out;
}

inline WittVec wpow(const std::vector<FqPoly>& prod_structure, const ZqCtx& R, const FqRing& ring,
                    int arity, const WittVec& u, uint32_t e, int upto) {
  WittVec acc = wconst(R, ring, arity, R.one(), upto);
  WittVec base = u;
  while (e > 0) {
    if (e & 1U) acc = wfold(prod_structure, acc, base, upto);
    e >>= 1U;
    if (e > 0) base = wfold(prod_structure, base, base, upto);
  }
  return acc;
}

}  // namespace detail

// Reduce the instance to sum_k m_k polynomials over F_q whose common zero
// set in F_q^n is in bijection with the solutions counted over the box. For
// a Teichmuller box the level-t polynomial of constraint k is the t-th sum
// polynomial for all Teichmuller terms of f_k, evaluated on the twisted term
// array and exponent-reduced. General boxes fold the Witt coordinate vectors
// of the coordinate digit series term by term with the binary structure
// polynomials, reducing after every fold.
inline FqSystem reduce_to_fq(const Instance& inst, const CountOptions& opts = {}) {
  const ZqCtx& R = *inst.ring();
  const FieldCtx& f = *R.field();
  int n = inst.n();
  FqRing ring{R.field()};
  FqSystem sys{ring, n, {}};
  long long p = R.p();
  int h = f.h();
  if (inst.box().kind() == BoxKind::kTeichmuller) {
    for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
      const Constraint& c = inst.constraints()[k];
      std::vector<FqPoly> levels = teich_expand(c.f, c.m_k);
      // Flatten to one summand per Teichmuller term, keeping its level.
      std::vector<int> level_of;
      std::vector<FqPoly> twisted;
      for (int i = 0; i < c.m_k; ++i) {
        unsigned long tw = 1;
        for (int t = 0; t < i % h; ++t) tw = static_cast<unsigned long>(tw * p);
        for (const auto& [mono, coef] : levels[static_cast<std::size_t>(i)].terms()) {
          FqPoly term(ring, n);
          term.add_term(mono, coef);
          level_of.push_back(i);
          twisted.push_back(function_reduce(term.pow(tw)));
        }
      }
      int r = static_cast<int>(twisted.size());
      if (r == 0) {
        for (int t = 0; t < c.m_k; ++t) {
          sys.polys.push_back({static_cast<int>(k), t, FqPoly(ring, n)});
        }
        continue;
      }
      std::vector<ZZPoly> s = witt_sum_polys(p, r, c.m_k - 1, opts.witt_budget);
      FqPoly zero(ring, n);
      for (int t = 0; t < c.m_k; ++t) {
        WittVarLayout layout{r, t};
        std::vector<FqPoly> args(static_cast<std::size_t>(layout.arity()), zero);
        for (int i = 0; i <= t; ++i) {
          for (int j = 0; j < r; ++j) {
            if (level_of[static_cast<std::size_t>(j)] == i) {
              args[static_cast<std::size_t>(layout.index(i, j))] = twisted[static_cast<std::size_t>(j)];
            }
          }
        }
        FqPoly st = to_fq_poly(s[static_cast<std::size_t>(t)], ring);
        sys.polys.push_back({static_cast<int>(k), t, compose_reduced(st, args)});
      }
    }
    return sys;
  }
  // General box: digit series from the box algebra, folded in Witt
  // coordinate space.
  BoxAlgebra alg = interpolate_box(inst.box(), opts.interp_cap);
  int m = R.m();
  std::vector<FqPoly> sum_fq, prod_fq;
  {
    auto s = witt_sum_polys(p, 2, m - 1, opts.witt_budget);
    auto mm = witt_prod_polys(p, m - 1, opts.witt_budget);
    for (const auto& t : s) sum_fq.push_back(to_fq_poly(t, ring));
    for (const auto& t : mm) prod_fq.push_back(to_fq_poly(t, ring));
  }
  // Coordinate j as a Witt vector: digit t of y_j is g_tj(X), so coordinate
  // t is g_tj^(p^(t mod h)) reduced.
  std::vector<detail::WittVec> var_coords(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    detail::WittVec w;
    w.push_back(FqPoly::variable(ring, n, j));
    for (int t = 1; t < m; ++t) {
      unsigned long tw = 1;
      for (int i = 0; i < t % h; ++i) tw = static_cast<unsigned long>(tw * p);
      w.push_back(function_reduce(alg.at(t, j).pow(tw)));
    }
    var_coords[static_cast<std::size_t>(j)] = std::move(w);
  }
  for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
    const Constraint& c = inst.constraints()[k];
    int upto = c.m_k;
    detail::WittVec acc = detail::wconst(R, ring, n, R.zero(), upto);
    for (const auto& [mono, coef] : c.f.terms()) {
      detail::WittVec term = detail::wconst(R, ring, n, coef, upto);
      for (int j = 0; j < n; ++j) {
        uint32_t e = mono.e[static_cast<std::size_t>(j)];
        if (e == 0) continue;
        detail::WittVec truncated(var_coords[static_cast<std::size_t>(j)].begin(),
                                  var_coords[static_cast<std::size_t>(j)].begin() + upto);
        detail::WittVec vp = detail::wpow(prod_fq, R, ring, n, truncated, e, upto);
        term = detail::wfold(prod_fq, term, vp, upto);
      }
      acc = detail::wfold(sum_fq, acc, term, upto);
    }
    for (int t = 0; t < upto; ++t) {
      sys.polys.push_back({static_cast<int>(k), t, acc[static_cast<std::size_t>(t)]});
    }
  }
  return sys;
}

inline long long count_fq_system(const FqSystem& sys, const CountOptions& opts = {}) {
  const FieldCtx& f = *sys.ring.f;
  long long q = f.q();
  int n = sys.n;
  long long total = box_size(q, n);
  if (total > opts.cap) {
    throw BudgetError("count_fq_system: q^n = " + std::to_string(total) + " exceeds cap " +
                      std::to_string(opts.cap));
  }
  // Zero polynomials never reject a point.
  std::vector<const FqPoly*> live;
  for (const auto& e : sys.polys) {
    if (!e.g.is_zero()) live.push_back(&e.g);
  }
  if (live.empty()) return total;
  if (f.has_tables()) {
    struct CompiledTerm {
      int32_t coeff;
      std::vector<uint32_t> e;
    };
    std::vector<std::vector<CompiledTerm>> polys;
    uint32_t maxe = 1;
    for (const FqPoly* g : live) {
      std::vector<CompiledTerm> terms;
      for (const auto& [mono, coef] : g->terms()) {
        terms.push_back({static_cast<int32_t>(f.index_of(coef)), mono.e});
        for (uint32_t e : mono.e) maxe = std::max(maxe, e);
      }
      polys.push_back(std::move(terms));
    }
    auto body = [&](long long lo, long long hi) -> long long {
      long long cnt = 0;
      std::vector<int32_t> pow_idx(static_cast<std::size_t>(n) * (maxe + 1));
      for (long long idx = lo; idx < hi; ++idx) {
        long long rest = idx;
        for (int j = 0; j < n; ++j) {
          int32_t v = static_cast<int32_t>(rest % q);
          rest /= q;
          int32_t* row = &pow_idx[static_cast<std::size_t>(j) * (maxe + 1)];
          row[0] = static_cast<int32_t>(f.index_of(f.one()));
          for (uint32_t e = 1; e <= maxe; ++e) row[e] = f.mul_idx(row[e - 1], v);
        }
        bool all_zero = true;
        for (const auto& terms : polys) {
          int32_t acc = 0;
          for (const auto& t : terms) {
            int32_t v = t.coeff;
            for (int j = 0; j < n; ++j) {
              uint32_t e = t.e[static_cast<std::size_t>(j)];
              if (e) v = f.mul_idx(v, pow_idx[static_cast<std::size_t>(j) * (maxe + 1) + e]);
            }
            acc = f.add_idx(acc, v);
          }
          if (acc != 0) {
            all_zero = false;
            break;
          }
        }
        if (all_zero) ++cnt;
      }
      return cnt;
    };
    return detail::run_chunked(total, opts.workers, body);
  }
  auto body = [&](long long lo, long long hi) -> long long {
    long long cnt = 0;
    for (long long idx = lo; idx < hi; ++idx) {
      std::vector<FqElem> x = point_at(f, n, idx);
      bool all_zero = true;
      for (const FqPoly* g : live) {
        if (!f.is_zero(g->eval(x))) {
          all_zero = false;
          break;
        }
      }
      if (all_zero) ++cnt;
    }
    return cnt;
  };
  return detail::run_chunked(total, opts.workers, body);
}

// Least nonnegative integer >= t, computed exactly.
inline long long ceil_star(const mpq_class& t) {
  if (t <= 0) return 0;
  mpz_class num = t.get_num(), den = t.get_den();
  mpz_class c = (num + den - 1) / den;
  return c.get_si();
}

// The divisibility lower bound on ord_q of the count:
// ceil*((n - sum_k ((p^(m_k) - 1)/(p - 1)) d_k) / max_k p^(m_k - 1) d_k).
inline long long bound_main(long long p, long long n,
                            const std::vector<std::pair<long long, int>>& dk_mk) {
  if (dk_mk.empty()) return 0;
  mpz_class num = to_mpz(n);
  mpz_class den = 0;
  for (const auto& [d, m_k] : dk_mk) {
    if (d < 1 || m_k < 1) throw InvariantError("bound_main: need d_k >= 1 and m_k >= 1");
    mpz_class pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(m_k));
    num -= (pm - 1) / to_mpz(p - 1) * to_mpz(d);
    mpz_class cand = pm / to_mpz(p) * to_mpz(d);
    if (cand > den) den = cand;
  }
  return ceil_star(mpq_class(num) / mpq_class(den));
}

struct StrongViolation {
  int k = 0;
  int level = 0;                              // level i of the term
  Monomial mono;                              // exponent vector of the term
  std::vector<std::pair<int, int>> factors;   // (digit level >= 1, coord) factors of beta
  long long degree = 0;
  long long threshold = 0;
};

struct HypothesisReport {
  bool strong_ok = true;
  std::vector<StrongViolation> strong_violations;
};

namespace detail {

// Enumerate per-coordinate multisets of digit levels for a term exponent
// vector, bounded by remaining weight, and check the product degree bound.
inline void strong_check_term(const Instance& inst, const BoxAlgebra& alg, int k, int i,
                              const Monomial& mono, const Constraint& c,
                              HypothesisReport& rep) {
  const ZqCtx& R = *inst.ring();
  long long p = R.p();
  int h = R.h();
  int budget = c.m_k - 1 - i;  // max |beta|
  int n = inst.n();
  std::vector<std::pair<int, int>> factors;
  // Depth-first over assignments: move slots of each coordinate from level 0
  // to some level b >= 1, in nondecreasing level order per coordinate.
  std::function<void(int, uint32_t, int, int, long long)> rec =
      [&](int coord, uint32_t slots_left, int min_level, int weight_used, long long deg_acc) {
        if (coord == n) {
          int total_weight = i + weight_used;
          long long threshold = c.d_k;
          for (int t = 0; t < h * (total_weight / h); ++t) threshold *= p;
          if (deg_acc > threshold) {
            rep.strong_ok = false;
            rep.strong_violations.push_back(
                StrongViolation{k, i, mono, factors, deg_acc, threshold});
          }
          return;
        }
        if (slots_left == 0) {
          uint32_t next_slots = coord + 1 < n ? mono.e[static_cast<std::size_t>(coord + 1)] : 0;
          rec(coord + 1, next_slots, 1, weight_used, deg_acc);
          return;
        }
        // leave the remaining slots of this coordinate at level 0
        {
          uint32_t next_slots = coord + 1 < n ? mono.e[static_cast<std::size_t>(coord + 1)] : 0;
          rec(coord + 1, next_slots, 1, weight_used, deg_acc + slots_left);
        }
        for (int b = min_level; weight_used + b <= budget; ++b) {
          const FqPoly& g = alg.at(b, coord);
          std::optional<long long> dg = g.total_degree();
          if (!dg) continue;  // zero factor kills the product
          factors.push_back({b, coord});
          rec(coord, slots_left - 1, b, weight_used + b, deg_acc + *dg);
          factors.pop_back();
        }
      };
  uint32_t first_slots = n > 0 ? mono.e[0] : 0;
  rec(0, first_slots, 1, 0, 0);
}

}  // namespace detail

// The per-term degree conditions: for every Teichmuller term of f_k at level
// i with exponent vector u, and every way beta of promoting slots of u to
// positive digit levels with i + |beta| < m_k,
//   deg(a * prod g_{beta}) <= d_k * p^(h * floor((i + |beta|)/h)).
// A Teichmuller box reduces this to deg(f_{k,i}) <= d_k * p^(h*floor(i/h)).
inline HypothesisReport check_strong_hypothesis(const Instance& inst, const BoxAlgebra& alg) {
  HypothesisReport rep;
  for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
    const Constraint& c = inst.constraints()[k];
    std::vector<FqPoly> levels = teich_expand(c.f, c.m_k);
    for (int i = 0; i < c.m_k; ++i) {
      for (const auto& [mono, coef] : levels[static_cast<std::size_t>(i)].terms()) {
        detail::strong_check_term(inst, alg, static_cast<int>(k), i, mono, c, rep);
      }
    }
  }
  return rep;
}

struct VerifyReport {
  long long count = 0;
  std::optional<long long> ord_p;  // empty when count = 0 (infinite order)
  long long bound = 0;             // ord_q lower bound
  long long hbound = 0;            // h * bound, compared against ord_p
  enum class Tier { kNone, kWeak, kStrong } tier = Tier::kNone;
  bool weak_ok = false;
  BoxCheckReport box_check;
  HypothesisReport strong;
  long long count_reduced = -1;
  bool vacuous = false;
  bool holds = false;
  std::vector<int> vanishing_constraints;
  double brute_ms = 0, reduce_ms = 0, fq_count_ms = 0;
};

inline std::optional<long long> ord_p_int(long long v, long long p) {
  if (v == 0) return std::nullopt;
  long long ord = 0;
  while (v % p == 0) {
    v /= p;
    ++ord;
  }
  return ord;
}

// Count by both methods, check the hypotheses, and assert the divisibility
// bound whenever a hypothesis tier holds. Disagreement of the counters or a
// bound failure under a verified hypothesis is fatal.
inline VerifyReport verify(const Instance& inst, const CountOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  VerifyReport rep;
  const ZqCtx& R = *inst.ring();
  auto t0 = clock::now();
  rep.count = count_bruteforce(inst, opts);
  auto t1 = clock::now();
  FqSystem sys = reduce_to_fq(inst, opts);
  auto t2 = clock::now();
  rep.count_reduced = count_fq_system(sys, opts);
  auto t3 = clock::now();
  rep.brute_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.reduce_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  rep.fq_count_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();
  if (rep.count_reduced != rep.count) {
    throw OracleMismatchError("counter disagreement: direct enumeration found " +
                              std::to_string(rep.count) + ", the reduced system " +
                              std::to_string(rep.count_reduced));
  }
  for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
    if (inst.constraints()[k].vanishes) rep.vanishing_constraints.push_back(static_cast<int>(k));
  }
  BoxAlgebra alg = interpolate_box(inst.box(), opts.interp_cap);
  rep.box_check = check_box_hypothesis(alg, BoxCheckVariant::kWeak);
  rep.weak_ok = rep.box_check.ok;
  for (const auto& c : inst.constraints()) {
    if (!c.vanishes && c.deg_mod && c.d_k < *c.deg_mod) rep.weak_ok = false;
  }
  rep.strong = check_strong_hypothesis(inst, alg);
  rep.tier = rep.strong.strong_ok
                 ? VerifyReport::Tier::kStrong
                 : (rep.weak_ok ? VerifyReport::Tier::kWeak : VerifyReport::Tier::kNone);
  std::vector<std::pair<long long, int>> dk_mk;
  for (const auto& c : inst.constraints()) {
    if (!c.vanishes) dk_mk.push_back({c.d_k, c.m_k});
  }
  rep.bound = bound_main(R.p(), inst.n(), dk_mk);
  rep.hbound = static_cast<long long>(R.h()) * rep.bound;
  rep.ord_p = ord_p_int(rep.count, R.p());
  rep.vacuous = rep.count == 0;
  rep.holds = rep.vacuous || (rep.ord_p && *rep.ord_p >= rep.hbound);
  if (rep.tier != VerifyReport::Tier::kNone) {
    // Degree law of the reduction under the tier's degree bounds.
    for (const auto& e : sys.polys) {
      const Constraint& c = inst.constraints()[static_cast<std::size_t>(e.k)];
      long long law_d = rep.tier == VerifyReport::Tier::kStrong ? c.d_k
                                                                : c.deg_mod.value_or(c.d_k);
      long long limit = law_d;
      for (int t = 0; t < e.level; ++t) limit *= R.p();
      std::optional<long long> dg = e.g.total_degree();
      if (dg && *dg > limit) {
        throw RefutationError("degree law violated: constraint " + std::to_string(e.k) +
                              " level " + std::to_string(e.level) + " has degree " +
                              std::to_string(*dg) + " > " + std::to_string(limit));
      }
    }
    if (!rep.holds) {
      throw RefutationError(
          "divisibility bound violated under a verified hypothesis: count = " +
          std::to_string(rep.count) + ", ord_p = " +
          (rep.ord_p ? std::to_string(*rep.ord_p) : std::string("inf")) +
          ", required >= " + std::to_string(rep.hbound));
    }
  }
  return rep;
}

}  // namespace wittcount
