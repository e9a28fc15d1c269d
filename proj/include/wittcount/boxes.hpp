#pragma once

// Combinatorial boxes: subsets of (Z_q/p^m)^n that biject onto F_q^n under
// reduction mod p. A box is described by how each coordinate of the lifted
// point above X depends on X, as a vector of Teichmuller digits
//   y_j = teich(x_j) + teich(g_1j(X)) p + ... + teich(g_{m-1,j}(X)) p^{m-1},
// so the point above X has digit vector (x_j, g_1j(X), ..., g_{m-1,j}(X)) in
// coordinate j, with the g_ij reduced polynomials over F_q. The algebra of a
// box is exactly this digit polynomial matrix, recovered by interpolation.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wittcount/common.hpp"
#include "wittcount/ff.hpp"
#include "wittcount/mpoly.hpp"
#include "wittcount/zq.hpp"

namespace wittcount {

enum class BoxKind { kTeichmuller, kSplit, kPolyDefined, kEnumerated };

inline const char* box_kind_name(BoxKind k) {
  switch (k) {
    case BoxKind::kTeichmuller: return "teichmuller";
    case BoxKind::kSplit: return "split";
    case BoxKind::kPolyDefined: return "poly";
    case BoxKind::kEnumerated: return "enumerated";
  }
  return "?";
}

// Number of points q^n, guarded against overflow.
inline long long box_size(long long q, int n) {
  long long total = 1;
  for (int j = 0; j < n; ++j) {
    if (total > (1LL << 62) / q) throw BudgetError("q^n overflows a machine integer");
    total *= q;
  }
  return total;
}

// Odometer indexing of F_q^n: coordinate 0 varies fastest.
inline std::vector<FqElem> point_at(const FieldCtx& f, int n, long long idx) {
  std::vector<FqElem> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    x.push_back(f.element(idx % f.q()));
    idx /= f.q();
  }
  return x;
}

inline long long index_of_point(const FieldCtx& f, const std::vector<FqElem>& x) {
  long long idx = 0;
  for (int j = static_cast<int>(x.size()) - 1; j >= 0; --j) {
    idx = idx * f.q() + f.index_of(x[static_cast<std::size_t>(j)]);
  }
  return idx;
}

class BoxSpec {
 public:
  static BoxSpec teichmuller(std::shared_ptr<const ZqCtx> ring, int n) {
    BoxSpec b(BoxKind::kTeichmuller, std::move(ring), n);
    return b;
  }

  // digit_polys[j][i-1] is the univariate level-i digit polynomial of
  // coordinate j, applied to x_j alone. Polynomials are stored reduced.
  static BoxSpec split(std::shared_ptr<const ZqCtx> ring, int n,
                       std::vector<std::vector<FqPoly>> digit_polys) {
    BoxSpec b(BoxKind::kSplit, std::move(ring), n);
    if (static_cast<int>(digit_polys.size()) != n) {
      throw InvariantError("split box: need one digit polynomial list per coordinate");
    }
    for (auto& per_coord : digit_polys) {
      if (static_cast<int>(per_coord.size()) != b.ring_->m() - 1) {
        throw InvariantError("split box: need m-1 digit polynomials per coordinate");
      }
      for (auto& g : per_coord) {
        if (g.arity() != 1) throw InvariantError("split box: digit polynomials must be univariate");
        if (!g.ring().same(FqRing{b.ring_->field()})) {
          throw InvariantError("split box: digit polynomial over the wrong field");
        }
        g = function_reduce(g);
      }
    }
    b.split_polys_ = std::move(digit_polys);
    return b;
  }

  // g[i-1][j] is the level-i digit polynomial of coordinate j in all n
  // variables. Polynomials are stored reduced.
  static BoxSpec poly_defined(std::shared_ptr<const ZqCtx> ring, int n,
                              std::vector<std::vector<FqPoly>> g) {
    BoxSpec b(BoxKind::kPolyDefined, std::move(ring), n);
    if (static_cast<int>(g.size()) != b.ring_->m() - 1) {
      throw InvariantError("poly box: need one level per precision digit above the first");
    }
    for (auto& level : g) {
      if (static_cast<int>(level.size()) != n) {
        throw InvariantError("poly box: need one polynomial per coordinate at every level");
      }
      for (auto& gij : level) {
        if (gij.arity() != n) throw InvariantError("poly box: digit polynomials must have arity n");
        if (!gij.ring().same(FqRing{b.ring_->field()})) {
          throw InvariantError("poly box: digit polynomial over the wrong field");
        }
        gij = function_reduce(gij);
      }
    }
    b.poly_g_ = std::move(g);
    return b;
  }

  // Explicit point list; must hit every residue class of F_q^n exactly once.
  static BoxSpec enumerated(std::shared_ptr<const ZqCtx> ring, int n,
                            std::vector<std::vector<ZqElem>> points) {
    BoxSpec b(BoxKind::kEnumerated, std::move(ring), n);
    long long total = box_size(b.ring_->q(), n);
    if (static_cast<long long>(points.size()) != total) {
      throw InvariantError("enumerated box: expected q^n = " + std::to_string(total) +
                           " points, got " + std::to_string(points.size()));
    }
    b.points_by_residue_.assign(static_cast<std::size_t>(total), -1);
    const FieldCtx& f = *b.ring_->field();
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (static_cast<int>(points[k].size()) != n) {
        throw InvariantError("enumerated box: point " + std::to_string(k) + " has wrong arity");
      }
      std::vector<FqElem> red;
      red.reserve(static_cast<std::size_t>(n));
      for (const ZqElem& y : points[k]) {
        b.ring_->validate(y);
        red.push_back(b.ring_->reduce_mod_p(y));
      }
      long long key = index_of_point(f, red);
      if (b.points_by_residue_[static_cast<std::size_t>(key)] != -1) {
        throw InvariantError("enumerated box: residue class " + std::to_string(key) +
                             " covered twice (points " +
                             std::to_string(b.points_by_residue_[static_cast<std::size_t>(key)]) +
                             " and " + std::to_string(k) + ")");
      }
      b.points_by_residue_[static_cast<std::size_t>(key)] = static_cast<long long>(k);
    }
    b.points_ = std::move(points);
    return b;
  }

  BoxKind kind() const { return kind_; }
  const std::shared_ptr<const ZqCtx>& ring() const { return ring_; }
  int n() const { return n_; }
  const std::vector<std::vector<FqPoly>>& split_polys() const { return split_polys_; }
  const std::vector<std::vector<FqPoly>>& poly_g() const { return poly_g_; }
  const std::vector<std::vector<ZqElem>>& points() const { return points_; }

  // The box point above x; its reduction mod p is x again.
  std::vector<ZqElem> lift_point(const std::vector<FqElem>& x) const {
    if (static_cast<int>(x.size()) != n_) throw InvariantError("lift_point: wrong arity");
    const ZqCtx& R = *ring_;
    int m = R.m();
    std::vector<ZqElem> y;
    y.reserve(static_cast<std::size_t>(n_));
    switch (kind_) {
      case BoxKind::kTeichmuller:
        for (const FqElem& xj : x) y.push_back(R.teichmuller_lift(xj));
        break;
      case BoxKind::kSplit:
        for (int j = 0; j < n_; ++j) {
          DigitVector dv;
          dv.d.reserve(static_cast<std::size_t>(m));
          dv.d.push_back(x[static_cast<std::size_t>(j)]);
          for (int i = 1; i < m; ++i) {
            dv.d.push_back(split_polys_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i - 1)].eval(
                {x[static_cast<std::size_t>(j)]}));
          }
          y.push_back(R.from_digits(dv));
        }
        break;
      case BoxKind::kPolyDefined:
        for (int j = 0; j < n_; ++j) {
          DigitVector dv;
          dv.d.reserve(static_cast<std::size_t>(m));
          dv.d.push_back(x[static_cast<std::size_t>(j)]);
          for (int i = 1; i < m; ++i) {
            dv.d.push_back(poly_g_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)].eval(x));
          }
          y.push_back(R.from_digits(dv));
        }
        break;
      case BoxKind::kEnumerated: {
        long long key = index_of_point(*R.field(), x);
        long long pos = points_by_residue_[static_cast<std::size_t>(key)];
        y = points_[static_cast<std::size_t>(pos)];
        break;
      }
    }
    return y;
  }

 private:
  BoxSpec(BoxKind kind, std::shared_ptr<const ZqCtx> ring, int n)
      : kind_(kind), ring_(std::move(ring)), n_(n) {
    if (!ring_) throw InvariantError("box: null ring context");
    if (n_ < 1) throw InvariantError("box: need at least one coordinate");
  }

  BoxKind kind_;
  std::shared_ptr<const ZqCtx> ring_;
  int n_;
  std::vector<std::vector<FqPoly>> split_polys_;   // [coord][level-1], univariate
  std::vector<std::vector<FqPoly>> poly_g_;        // [level-1][coord], arity n
  std::vector<std::vector<ZqElem>> points_;        // enumerated points as given
  std::vector<long long> points_by_residue_;       // residue index -> position
};

// The digit polynomial matrix of a box: g[i-1][j] is the unique reduced
// polynomial with g_ij(X) = digit i of coordinate j of the point above X.
struct BoxAlgebra {
  std::shared_ptr<const ZqCtx> ring;
  int n = 0;
  std::vector<std::vector<FqPoly>> g;  // [level-1][coord]

  const FqPoly& at(int level, int coord) const {
    return g[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(coord)];
  }
};

inline constexpr long long kDefaultInterpolationCap = 1000000;

inline BoxAlgebra interpolate_box(const BoxSpec& box, long long cap = kDefaultInterpolationCap) {
  const ZqCtx& R = *box.ring();
  const FieldCtx& f = *R.field();
  int n = box.n();
  int m = R.m();
  BoxAlgebra alg;
  alg.ring = box.ring();
  alg.n = n;
  FqRing ring{R.field()};
  if (box.kind() == BoxKind::kTeichmuller) {
    alg.g.assign(static_cast<std::size_t>(m - 1),
                 std::vector<FqPoly>(static_cast<std::size_t>(n), FqPoly(ring, n)));
    return alg;
  }
  long long total = box_size(f.q(), n);
  if (total > cap) {
    throw BudgetError("interpolate_box: q^n = " + std::to_string(total) +
                      " exceeds the interpolation cap " + std::to_string(cap));
  }
  std::vector<std::vector<std::vector<FqElem>>> tables(
      static_cast<std::size_t>(m - 1),
      std::vector<std::vector<FqElem>>(static_cast<std::size_t>(n),
                                       std::vector<FqElem>(static_cast<std::size_t>(total))));
  for (long long idx = 0; idx < total; ++idx) {
    std::vector<FqElem> x = point_at(f, n, idx);
    std::vector<ZqElem> y = box.lift_point(x);
    for (int j = 0; j < n; ++j) {
      DigitVector dv = R.digits(y[static_cast<std::size_t>(j)]);
      if (dv.d[0] != x[static_cast<std::size_t>(j)]) {
        throw InvariantError("box: reduction of the lifted point disagrees with the base point");
      }
      for (int i = 1; i < m; ++i) {
        tables[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)] =
            dv.d[static_cast<std::size_t>(i)];
      }
    }
  }
  alg.g.resize(static_cast<std::size_t>(m - 1));
  for (int i = 1; i < m; ++i) {
    auto& row = alg.g[static_cast<std::size_t>(i - 1)];
    row.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      row.push_back(interpolate(ring, n, tables[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)]));
    }
  }
  return alg;
}

// Collapse the digit series of each coordinate into a single polynomial g_j
// over Z_q/p^(m-1) with lift(X) = teich(X) + (g_1(teich X), ..., g_n(teich X)) p
// exactly. Levels are peeled with carries: level l interpolates the first
// digit of the remainder, whose Teichmuller-lifted polynomial is subtracted
// before the next exact division by p. At m = 2 this is the plain
// Teichmuller lift of the digit matrix.
inline std::vector<ZqPoly> combined_g(const BoxAlgebra& alg, long long cap = kDefaultInterpolationCap) {
  const ZqCtx& R = *alg.ring;
  const FieldCtx& f = *R.field();
  int n = alg.n;
  int m = R.m();
  if (m < 2) throw InvariantError("combined_g: ring precision must be at least 2");
  long long total = box_size(f.q(), n);
  if (total > cap) {
    throw BudgetError("combined_g: q^n = " + std::to_string(total) +
                      " exceeds the interpolation cap " + std::to_string(cap));
  }
  auto ring_lo = make_ring(R.field(), m - 1);
  FqRing fring{R.field()};
  // Remainders r_j(X) = (y_j - teich(x_j)) / p at every point, full precision.
  std::vector<std::vector<ZqElem>> rem(static_cast<std::size_t>(n),
                                       std::vector<ZqElem>(static_cast<std::size_t>(total)));
  std::vector<std::vector<ZqElem>> teich_points(static_cast<std::size_t>(total));
  for (long long idx = 0; idx < total; ++idx) {
    std::vector<FqElem> x = point_at(f, n, idx);
    std::vector<ZqElem> tx;
    tx.reserve(static_cast<std::size_t>(n));
    for (const FqElem& xj : x) tx.push_back(R.teichmuller_lift(xj));
    teich_points[static_cast<std::size_t>(idx)] = tx;
    for (int j = 0; j < n; ++j) {
      DigitVector dv;
      dv.d.reserve(static_cast<std::size_t>(m));
      dv.d.push_back(x[static_cast<std::size_t>(j)]);
      for (int i = 1; i < m; ++i) dv.d.push_back(alg.at(i, j).eval(x));
      ZqElem y = R.from_digits(dv);
      ZqElem diff = R.sub(y, tx[static_cast<std::size_t>(j)]);
      ZqElem r = R.zero();
      for (int c = 0; c < R.h(); ++c) {
        if (diff.c[static_cast<std::size_t>(c)] % R.p() != 0) {
          throw InvariantError("combined_g: lift disagrees with base point mod p");
        }
        r.c[static_cast<std::size_t>(c)] = diff.c[static_cast<std::size_t>(c)] / R.p();
      }
      rem[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)] = r;
    }
  }
  std::vector<ZqPoly> out;
  out.reserve(static_cast<std::size_t>(n));
  ZqRing zring{ring_lo};
  std::vector<ZqPoly> combined(static_cast<std::size_t>(n), ZqPoly(zring, n));
  long long p_pow = 1;  // p^(l-1)
  for (int level = 1; level < m; ++level) {
    for (int j = 0; j < n; ++j) {
      std::vector<FqElem> digit0(static_cast<std::size_t>(total));
      for (long long idx = 0; idx < total; ++idx) {
        digit0[static_cast<std::size_t>(idx)] =
            R.reduce_mod_p(rem[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)]);
      }
      FqPoly gl = interpolate(fring, n, digit0);
      // Accumulate p^(l-1) * teich-lift(gl) into the combined polynomial.
      for (const auto& [mono, coef] : gl.terms()) {
        ZqElem lifted = ring_lo->teichmuller_lift(coef);
        ZqElem scaled = ring_lo->zero();
        for (int c = 0; c < R.h(); ++c) {
          scaled.c[static_cast<std::size_t>(c)] =
              lifted.c[static_cast<std::size_t>(c)] * p_pow % ring_lo->pm();
        }
        combined[static_cast<std::size_t>(j)].add_term(mono, scaled);
      }
      if (level + 1 < m) {
        // Subtract the Teichmuller polynomial of gl evaluated over the ring
        // and divide by p, exposing the next level.
        ZqPoly glift(ZqRing{alg.ring}, n);
        for (const auto& [mono, coef] : gl.terms()) {
          glift.add_term(mono, R.teichmuller_lift(coef));
        }
        for (long long idx = 0; idx < total; ++idx) {
          ZqElem val = glift.eval(teich_points[static_cast<std::size_t>(idx)]);
          ZqElem diff = R.sub(rem[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)], val);
          ZqElem r = R.zero();
          for (int c = 0; c < R.h(); ++c) {
            if (diff.c[static_cast<std::size_t>(c)] % R.p() != 0) {
              throw InvariantError("combined_g: carry peeling left a nondivisible remainder");
            }
            r.c[static_cast<std::size_t>(c)] = diff.c[static_cast<std::size_t>(c)] / R.p();
          }
          rem[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)] = r;
        }
      }
    }
    p_pow *= R.p();
  }
  return combined;
}

enum class BoxCheckVariant { kWeak, kSplit };

struct BoxCheckViolation {
  int level = 0;  // digit level i in [1, m-1]
  int coord = 0;  // coordinate j, 0-based
  long long degree = 0;
  long long threshold = 0;
  bool nonunivariate = false;  // split variant only
};

struct BoxCheckReport {
  bool ok = true;
  BoxCheckVariant variant = BoxCheckVariant::kWeak;
  std::vector<BoxCheckViolation> violations;
};

// Weak: deg(g_ij) <= p^(h * floor(i/h)) for every level i in [1, m-1].
// Split: the weak bound plus univariate dependence of g_ij on x_j.
inline BoxCheckReport check_box_hypothesis(const BoxAlgebra& alg, BoxCheckVariant variant) {
  const ZqCtx& R = *alg.ring;
  BoxCheckReport rep;
  rep.variant = variant;
  for (int i = 1; i < R.m(); ++i) {
    long long threshold = 1;
    for (int k = 0; k < R.h() * (i / R.h()); ++k) threshold *= R.p();
    for (int j = 0; j < alg.n; ++j) {
      const FqPoly& g = alg.at(i, j);
      std::optional<long long> deg = g.total_degree();
      bool too_big = deg.has_value() && *deg > threshold;
      bool nonuni = false;
      if (variant == BoxCheckVariant::kSplit) {
        for (const auto& [mono, coef] : g.terms()) {
          for (int l = 0; l < alg.n; ++l) {
            if (l != j && mono.e[static_cast<std::size_t>(l)] != 0) nonuni = true;
          }
        }
      }
      if (too_big || nonuni) {
        rep.ok = false;
        rep.violations.push_back(BoxCheckViolation{i, j, deg.value_or(0), threshold, nonuni});
      }
    }
  }
  return rep;
}

inline BoxCheckReport check_box_hypothesis(const BoxSpec& box, BoxCheckVariant variant,
                                           long long cap = kDefaultInterpolationCap) {
  return check_box_hypothesis(interpolate_box(box, cap), variant);
}

}  // namespace wittcount
