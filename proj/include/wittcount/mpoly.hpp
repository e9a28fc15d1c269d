#pragma once

// Sparse multivariate polynomials over an abstract coefficient ring. Terms
// live in a map ordered by graded lexicographic order (higher total degree
// first, ties broken by the lexicographically larger exponent vector), so
// iteration and serialization are canonical. Coefficient rings are small
// value types: ZZRing wraps GMP integers, FqRing wraps a finite field
// context. The degree of the zero polynomial is a distinguished "minus
// infinity" (an empty optional), never a plain integer.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wittcount/common.hpp"
#include "wittcount/ff.hpp"

namespace wittcount {

// gmpxx has no long long constructor on this toolchain; long is 64-bit here.
inline mpz_class to_mpz(long long v) { return mpz_class(static_cast<long>(v)); }

struct Monomial {
  std::vector<uint32_t> e;

  long long total_degree() const {
    long long d = 0;
    for (uint32_t x : e) d += x;
    return d;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
  bool operator!=(const Monomial& o) const { return e != o.e; }
};

// "a before b" in the canonical term order.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    long long da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db;
    return a.e > b.e;
  }
};

struct ZZRing {
  using Elem = mpz_class;

  Elem zero() const { return mpz_class(0); }
  Elem one() const { return mpz_class(1); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem pow(const Elem& a, unsigned long e) const {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
  }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  bool same(const ZZRing&) const { return true; }
  std::string to_text(const Elem& a) const { return a.get_str(); }
};

struct FqRing {
  std::shared_ptr<const FieldCtx> f;

  using Elem = FqElem;

  Elem zero() const { return f->zero(); }
  Elem one() const { return f->one(); }
  Elem add(const Elem& a, const Elem& b) const { return f->add(a, b); }
  Elem sub(const Elem& a, const Elem& b) const { return f->sub(a, b); }
  Elem neg(const Elem& a) const { return f->neg(a); }
  Elem mul(const Elem& a, const Elem& b) const { return f->mul(a, b); }
  Elem pow(const Elem& a, unsigned long e) const { return f->pow(a, e); }
  bool is_zero(const Elem& a) const { return f->is_zero(a); }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  bool same(const FqRing& o) const {
    return f == o.f || (f->p() == o.f->p() && f->h() == o.f->h());
  }
  std::string to_text(const Elem& a) const { return fq_to_text(a); }
};

template <class Ring>
class Polynomial {
 public:
  using Elem = typename Ring::Elem;
  using TermMap = std::map<Monomial, Elem, GradedLexLess>;

  Polynomial(Ring ring, int arity) : ring_(std::move(ring)), arity_(arity) {
    if (arity < 0) throw InvariantError("polynomial arity must be nonnegative");
  }

  static Polynomial zero(Ring ring, int arity) { return Polynomial(std::move(ring), arity); }

  static Polynomial constant(Ring ring, int arity, Elem v) {
    Polynomial r(std::move(ring), arity);
    r.add_term(Monomial{std::vector<uint32_t>(static_cast<std::size_t>(arity), 0)}, std::move(v));
    return r;
  }

  static Polynomial variable(Ring ring, int arity, int idx) {
    if (idx < 0 || idx >= arity) throw InvariantError("variable index out of range");
    Polynomial r(ring, arity);
    Monomial m{std::vector<uint32_t>(static_cast<std::size_t>(arity), 0)};
    m.e[static_cast<std::size_t>(idx)] = 1;
    r.add_term(m, ring.one());
    return r;
  }

  int arity() const { return arity_; }
  const Ring& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& m, Elem v) {
    if (static_cast<int>(m.e.size()) != arity_) {
      throw InvariantError("monomial arity mismatch");
    }
    if (ring_.is_zero(v)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, std::move(v));
    } else {
      it->second = ring_.add(it->second, v);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial operator+(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r = *this;
    for (const auto& [m, v] : o.terms_) r.add_term(m, v);
    return r;
  }

  Polynomial operator-(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r = *this;
    for (const auto& [m, v] : o.terms_) r.add_term(m, ring_.neg(v));
    return r;
  }

  Polynomial operator-() const {
    Polynomial r(ring_, arity_);
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, ring_.neg(v));
    return r;
  }

  Polynomial operator*(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r(ring_, arity_);
    for (const auto& [ma, va] : terms_) {
      for (const auto& [mb, vb] : o.terms_) {
        Monomial m = ma;
        for (int j = 0; j < arity_; ++j) m.e[static_cast<std::size_t>(j)] += mb.e[static_cast<std::size_t>(j)];
        r.add_term(m, ring_.mul(va, vb));
      }
    }
    return r;
  }

  Polynomial scale(const Elem& c) const {
    Polynomial r(ring_, arity_);
    if (ring_.is_zero(c)) return r;
    for (const auto& [m, v] : terms_) {
      Elem w = ring_.mul(v, c);
      if (!ring_.is_zero(w)) r.terms_.emplace(m, std::move(w));
    }
    return r;
  }

  Polynomial pow(unsigned long e) const {
    Polynomial acc = constant(ring_, arity_, ring_.one());
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1UL) acc = acc * base;
      base = base * base;
      e >>= 1UL;
    }
    return acc;
  }

  Elem eval(const std::vector<Elem>& point) const {
    if (static_cast<int>(point.size()) != arity_) {
      throw InvariantError("evaluation point arity mismatch");
    }
    // Per-variable power cache keyed by exponent.
    std::vector<std::vector<Elem>> pows(static_cast<std::size_t>(arity_));
    Elem acc = ring_.zero();
    for (const auto& [m, v] : terms_) {
      Elem t = v;
      for (int j = 0; j < arity_; ++j) {
        uint32_t e = m.e[static_cast<std::size_t>(j)];
        if (e == 0) continue;
        auto& pj = pows[static_cast<std::size_t>(j)];
        if (pj.empty()) pj.push_back(ring_.one());
        while (pj.size() <= e) pj.push_back(ring_.mul(pj.back(), point[static_cast<std::size_t>(j)]));
        t = ring_.mul(t, pj[e]);
      }
      acc = ring_.add(acc, t);
    }
    return acc;
  }

  // Substitute every variable: variable j becomes args[j]. All args must
  // share one arity and ring, which the result adopts.
  Polynomial substitute(const std::vector<Polynomial>& args) const {
    if (static_cast<int>(args.size()) != arity_) {
      throw InvariantError("substitute: need one polynomial per variable");
    }
    int out_arity = arity_ == 0 ? 0 : args[0].arity();
    for (const auto& a : args) {
      if (a.arity() != out_arity || !a.ring().same(ring_)) {
        throw InvariantError("substitute: argument arity or ring mismatch");
      }
    }
    Polynomial r(ring_, out_arity);
    std::vector<std::map<uint32_t, Polynomial>> pow_cache(static_cast<std::size_t>(arity_));
    for (const auto& [m, v] : terms_) {
      Polynomial t = constant(ring_, out_arity, v);
      for (int j = 0; j < arity_; ++j) {
        uint32_t e = m.e[static_cast<std::size_t>(j)];
        if (e == 0) continue;
        auto& cache = pow_cache[static_cast<std::size_t>(j)];
        auto it = cache.find(e);
        if (it == cache.end()) it = cache.emplace(e, args[static_cast<std::size_t>(j)].pow(e)).first;
        t = t * it->second;
      }
      r = r + t;
    }
    return r;
  }

  Polynomial extend_arity(int new_arity) const {
    if (new_arity < arity_) throw InvariantError("extend_arity cannot shrink");
    Polynomial r(ring_, new_arity);
    for (const auto& [m, v] : terms_) {
      Monomial mm = m;
      mm.e.resize(static_cast<std::size_t>(new_arity), 0);
      r.terms_.emplace(mm, v);
    }
    return r;
  }

  // Rename variables: source variable j becomes var_map[j] in the result.
  Polynomial embed(int out_arity, const std::vector<int>& var_map) const {
    if (static_cast<int>(var_map.size()) != arity_) {
      throw InvariantError("embed: var_map size mismatch");
    }
    Polynomial r(ring_, out_arity);
    for (const auto& [m, v] : terms_) {
      Monomial mm{std::vector<uint32_t>(static_cast<std::size_t>(out_arity), 0)};
      for (int j = 0; j < arity_; ++j) {
        uint32_t e = m.e[static_cast<std::size_t>(j)];
        if (e == 0) continue;
        int tgt = var_map[static_cast<std::size_t>(j)];
        if (tgt < 0 || tgt >= out_arity) throw InvariantError("embed: target index out of range");
        if (mm.e[static_cast<std::size_t>(tgt)] != 0) throw InvariantError("embed: variable collision");
        mm.e[static_cast<std::size_t>(tgt)] = e;
      }
      r.add_term(mm, v);
    }
    return r;
  }

  std::optional<long long> total_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.total_degree();  // leading term has max degree
  }

  struct WeightedDegreeReport {
    std::optional<long long> degree;  // empty for the zero polynomial
    bool homogeneous = true;          // vacuously true for zero
  };

  WeightedDegreeReport weighted_degree(const std::vector<long long>& w) const {
    if (static_cast<int>(w.size()) != arity_) {
      throw InvariantError("weighted_degree: weight vector arity mismatch");
    }
    WeightedDegreeReport rep;
    for (const auto& [m, v] : terms_) {
      long long d = 0;
      for (int j = 0; j < arity_; ++j) d += w[static_cast<std::size_t>(j)] * m.e[static_cast<std::size_t>(j)];
      if (!rep.degree) {
        rep.degree = d;
      } else if (*rep.degree != d) {
        rep.homogeneous = false;
        if (d > *rep.degree) rep.degree = d;
      }
    }
    return rep;
  }

  // One term per line, "coeff : e1 e2 ... en", canonical order; "0" when zero.
  std::string to_text() const {
    if (terms_.empty()) return "0\n";
    std::string out;
    for (const auto& [m, v] : terms_) {
      out += ring_.to_text(v);
      out += " :";
      for (int j = 0; j < arity_; ++j) {
        out += " ";
        out += std::to_string(m.e[static_cast<std::size_t>(j)]);
      }
      out += "\n";
    }
    return out;
  }

  bool operator==(const Polynomial& o) const {
    if (arity_ != o.arity_ || terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
      if (it->first != jt->first || !ring_.eq(it->second, jt->second)) return false;
    }
    return true;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

 private:
  void check_compatible(const Polynomial& o) const {
    if (arity_ != o.arity_) throw InvariantError("polynomial arity mismatch");
    if (!ring_.same(o.ring_)) throw InvariantError("polynomial ring mismatch");
  }

  Ring ring_;
  int arity_;
  TermMap terms_;
};

using ZZPoly = Polynomial<ZZRing>;
using FqPoly = Polynomial<FqRing>;

// Divide every integer coefficient by d exactly; aborts loudly on the first
// coefficient that is not divisible, naming the offending term.
inline ZZPoly exact_div_int(const ZZPoly& a, const mpz_class& d) {
  if (d == 0) throw InvariantError("exact_div_int: division by zero");
  ZZPoly r(a.ring(), a.arity());
  for (const auto& [m, v] : a.terms()) {
    mpz_class quo, rem;
    mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
    if (rem != 0) {
      std::string mono;
      for (uint32_t e : m.e) mono += " " + std::to_string(e);
      throw InvariantError("exact_div_int: coefficient " + v.get_str() + " of monomial" + mono +
                           " is not divisible by " + d.get_str());
    }
    r.add_term(m, quo);
  }
  return r;
}

// Exponent reduction e -> ((e - 1) mod (q - 1)) + 1 for e > 0, which
// preserves the polynomial as a function on F_q^n. Zero exponents stay zero.
inline FqPoly function_reduce(const FqPoly& a) {
  long long q = a.ring().f->q();
  FqPoly r(a.ring(), a.arity());
  for (const auto& [m, v] : a.terms()) {
    Monomial mm = m;
    for (auto& e : mm.e) {
      if (e > 0) e = static_cast<uint32_t>((e - 1) % (q - 1) + 1);
    }
    r.add_term(mm, v);
  }
  return r;
}

// The pointwise p-th root of the function a represents: a -> a^(p^(h-1))
// composed with exponent reduction. Applying it n times inverts the n-fold
// pointwise Frobenius.
inline FqPoly pointwise_pth_root(const FqPoly& a) {
  unsigned long e = 1;
  for (int i = 0; i + 1 < a.ring().f->h(); ++i) e = static_cast<unsigned long>(e * a.ring().f->p());
  return function_reduce(a.pow(e));
}

// Multiply then reduce; keeps chained products inside the reduced span.
inline FqPoly fmul(const FqPoly& a, const FqPoly& b) { return function_reduce(a * b); }

inline FqPoly fpow(const FqPoly& a, unsigned long e) {
  FqPoly acc = FqPoly::constant(a.ring(), a.arity(), a.ring().one());
  FqPoly base = a;
  while (e > 0) {
    if (e & 1UL) acc = fmul(acc, base);
    base = fmul(base, base);
    e >>= 1UL;
  }
  return acc;
}

// Compose "outer" with one reduced argument per variable, reducing after
// every product so intermediates stay within the reduced span.
inline FqPoly compose_reduced(const FqPoly& outer, const std::vector<FqPoly>& args) {
  if (static_cast<int>(args.size()) != outer.arity()) {
    throw InvariantError("compose_reduced: need one argument per variable");
  }
  int out_arity = args.empty() ? 0 : args[0].arity();
  FqRing ring = args.empty() ? outer.ring() : args[0].ring();
  FqPoly acc(ring, out_arity);
  std::vector<std::map<uint32_t, FqPoly>> pow_cache(args.size());
  for (const auto& [m, v] : outer.terms()) {
    FqPoly t = FqPoly::constant(ring, out_arity, v);
    for (std::size_t j = 0; j < args.size(); ++j) {
      uint32_t e = m.e[j];
      if (e == 0) continue;
      auto& cache = pow_cache[j];
      auto it = cache.find(e);
      if (it == cache.end()) it = cache.emplace(e, fpow(args[j], e)).first;
      t = fmul(t, it->second);
    }
    acc = acc + t;
  }
  return function_reduce(acc);
}

// Unique reduced interpolation of a value table over F_q^n. Values are
// indexed in odometer order: the index of (x_0, ..., x_{n-1}) is
// sum_j index_of(x_j) q^j. Works one axis at a time with the inverse of the
// univariate evaluation matrix.
inline FqPoly interpolate(const FqRing& ring, int arity, const std::vector<FqElem>& values) {
  const FieldCtx& f = *ring.f;
  long long q = f.q();
  long long total = 1;
  for (int j = 0; j < arity; ++j) {
    if (total > (1LL << 40) / q) throw BudgetError("interpolate: q^n too large");
    total *= q;
  }
  if (static_cast<long long>(values.size()) != total) {
    throw InvariantError("interpolate: expected q^n = " + std::to_string(total) + " values, got " +
                         std::to_string(values.size()));
  }
  // Invert the q x q evaluation matrix E[v][e] = element(v)^e by Gaussian
  // elimination; reduced univariate polynomials biject with value tables.
  std::vector<FqElem> mat(static_cast<std::size_t>(q * q));
  std::vector<FqElem> inv(static_cast<std::size_t>(q * q), f.zero());
  for (long long v = 0; v < q; ++v) {
    FqElem x = f.element(v);
    FqElem acc = f.one();
    for (long long e = 0; e < q; ++e) {
      mat[static_cast<std::size_t>(v * q + e)] = acc;
      acc = f.mul(acc, x);
    }
    inv[static_cast<std::size_t>(v * q + v)] = f.one();
  }
  for (long long col = 0; col < q; ++col) {
    long long piv = -1;
    for (long long row = col; row < q; ++row) {
      if (!f.is_zero(mat[static_cast<std::size_t>(row * q + col)])) {
        piv = row;
        break;
      }
    }
    if (piv < 0) throw InvariantError("interpolate: evaluation matrix is singular");
    if (piv != col) {
      for (long long j = 0; j < q; ++j) {
        std::swap(mat[static_cast<std::size_t>(piv * q + j)], mat[static_cast<std::size_t>(col * q + j)]);
        std::swap(inv[static_cast<std::size_t>(piv * q + j)], inv[static_cast<std::size_t>(col * q + j)]);
      }
    }
    FqElem scale = f.inv(mat[static_cast<std::size_t>(col * q + col)]);
    for (long long j = 0; j < q; ++j) {
      mat[static_cast<std::size_t>(col * q + j)] = f.mul(mat[static_cast<std::size_t>(col * q + j)], scale);
      inv[static_cast<std::size_t>(col * q + j)] = f.mul(inv[static_cast<std::size_t>(col * q + j)], scale);
    }
    for (long long row = 0; row < q; ++row) {
      if (row == col) continue;
      FqElem factor = mat[static_cast<std::size_t>(row * q + col)];
      if (f.is_zero(factor)) continue;
      for (long long j = 0; j < q; ++j) {
        mat[static_cast<std::size_t>(row * q + j)] =
            f.sub(mat[static_cast<std::size_t>(row * q + j)],
                  f.mul(factor, mat[static_cast<std::size_t>(col * q + j)]));
        inv[static_cast<std::size_t>(row * q + j)] =
            f.sub(inv[static_cast<std::size_t>(row * q + j)],
                  f.mul(factor, inv[static_cast<std::size_t>(col * q + j)]));
      }
    }
  }
  // coeffs[e] = sum_v inv[e][v] values[v]; apply along each axis in turn.
  std::vector<FqElem> work = values;
  std::vector<FqElem> line(static_cast<std::size_t>(q));
  long long stride = 1;
  for (int axis = 0; axis < arity; ++axis) {
    long long outer = total / (stride * q);
    for (long long hi = 0; hi < outer; ++hi) {
      for (long long lo = 0; lo < stride; ++lo) {
        long long base = hi * stride * q + lo;
        for (long long v = 0; v < q; ++v) line[static_cast<std::size_t>(v)] = work[static_cast<std::size_t>(base + v * stride)];
        for (long long e = 0; e < q; ++e) {
          FqElem acc = f.zero();
          for (long long v = 0; v < q; ++v) {
            const FqElem& c = inv[static_cast<std::size_t>(e * q + v)];
            if (f.is_zero(c) || f.is_zero(line[static_cast<std::size_t>(v)])) continue;
            acc = f.add(acc, f.mul(c, line[static_cast<std::size_t>(v)]));
          }
          work[static_cast<std::size_t>(base + e * stride)] = acc;
        }
      }
    }
    stride *= q;
  }
  FqPoly r(ring, arity);
  for (long long idx = 0; idx < total; ++idx) {
    if (f.is_zero(work[static_cast<std::size_t>(idx)])) continue;
    Monomial m{std::vector<uint32_t>(static_cast<std::size_t>(arity), 0)};
    long long t = idx;
    for (int j = 0; j < arity; ++j) {
      m.e[static_cast<std::size_t>(j)] = static_cast<uint32_t>(t % q);
      t /= q;
    }
    r.add_term(m, work[static_cast<std::size_t>(idx)]);
  }
  return r;
}

}  // namespace wittcount
