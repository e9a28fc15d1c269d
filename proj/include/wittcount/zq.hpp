#pragma once

// Truncated unramified extensions Z_q/p^m Z_q, realized as
// (Z/p^m)[t]/(modulus) where the modulus is the verbatim lift of the field
// modulus. This polynomial-basis carrier is primary; Teichmuller digit
// vectors are a derived view. The Teichmuller lift is the q-power fixed
// point of the verbatim lift and is reached after at most m iterations.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wittcount/common.hpp"
#include "wittcount/ff.hpp"
#include "wittcount/mpoly.hpp"
#include "wittcount/witt.hpp"

namespace wittcount {

struct ZqElem {
  std::vector<int64_t> c;  // c[j] multiplies t^j, 0 <= c[j] < p^m

  bool operator==(const ZqElem& o) const { return c == o.c; }
  bool operator!=(const ZqElem& o) const { return c != o.c; }
};

struct DigitVector {
  std::vector<FqElem> d;  // d[i] is the level-i Teichmuller digit

  bool operator==(const DigitVector& o) const { return d == o.d; }
};

inline std::string zq_to_text(const ZqElem& a) {
  std::string s = "[";
  for (std::size_t j = 0; j < a.c.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(a.c[j]);
  }
  s += "]";
  return s;
}

class ZqCtx {
 public:
  static constexpr int kMaxPrecision = 8;
  static constexpr long long kMaxModulus = (1LL << 31) - 1;
  static constexpr long long kTeichTableLimit = 8192;

  const std::shared_ptr<const FieldCtx>& field() const { return field_; }
  long long p() const { return field_->p(); }
  int h() const { return field_->h(); }
  long long q() const { return field_->q(); }
  int m() const { return m_; }
  long long pm() const { return pm_; }
  const std::vector<int64_t>& modulus() const { return modulus_; }

  ZqElem zero() const { return ZqElem{std::vector<int64_t>(static_cast<std::size_t>(h()), 0)}; }
  ZqElem one() const { return from_int(1); }

  ZqElem from_int(long long v) const {
    ZqElem e = zero();
    long long r = v % pm_;
    if (r < 0) r += pm_;
    e.c[0] = r;
    return e;
  }

  bool is_zero(const ZqElem& a) const {
    return std::all_of(a.c.begin(), a.c.end(), [](int64_t x) { return x == 0; });
  }

  void validate(const ZqElem& a) const {
    if (static_cast<int>(a.c.size()) != h()) {
      throw InvariantError("ring element has wrong length " + std::to_string(a.c.size()));
    }
    for (int64_t x : a.c) {
      if (x < 0 || x >= pm_) {
        throw InvariantError("ring element coefficient " + std::to_string(x) +
                             " out of range [0, " + std::to_string(pm_) + ")");
      }
    }
  }

  ZqElem add(const ZqElem& a, const ZqElem& b) const {
    ZqElem r = a;
    for (int j = 0; j < h(); ++j) {
      r.c[j] += b.c[j];
      if (r.c[j] >= pm_) r.c[j] -= pm_;
    }
    return r;
  }

  ZqElem sub(const ZqElem& a, const ZqElem& b) const {
    ZqElem r = a;
    for (int j = 0; j < h(); ++j) {
      r.c[j] -= b.c[j];
      if (r.c[j] < 0) r.c[j] += pm_;
    }
    return r;
  }

  ZqElem neg(const ZqElem& a) const { return sub(zero(), a); }

  ZqElem mul(const ZqElem& a, const ZqElem& b) const {
    int hh = h();
    std::vector<long long> prod(static_cast<std::size_t>(2 * hh - 1), 0);
    for (int i = 0; i < hh; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j < hh; ++j) {
        prod[i + j] = (prod[i + j] + mulmod(a.c[i], b.c[j])) % pm_;
      }
    }
    for (int d = 2 * hh - 2; d >= hh; --d) {
      long long lead = prod[d];
      if (lead == 0) continue;
      for (int j = 0; j < hh; ++j) {
        prod[d - hh + j] = (prod[d - hh + j] - mulmod(lead, modulus_[j])) % pm_;
      }
      prod[d] = 0;
    }
    ZqElem r = zero();
    for (int j = 0; j < hh; ++j) {
      long long v = prod[j] % pm_;
      if (v < 0) v += pm_;
      r.c[j] = v;
    }
    return r;
  }

  ZqElem pow(const ZqElem& a, unsigned long long e) const {
    ZqElem acc = one();
    ZqElem base = a;
    while (e > 0) {
      if (e & 1ULL) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1ULL;
    }
    return acc;
  }

  FqElem reduce_mod_p(const ZqElem& a) const {
    FqElem r = field_->zero();
    for (int j = 0; j < h(); ++j) r.c[j] = static_cast<int32_t>(a.c[j] % p());
    return r;
  }

  ZqElem lift_verbatim(const FqElem& a) const {
    ZqElem r = zero();
    for (int j = 0; j < h(); ++j) r.c[j] = a.c[j];
    return r;
  }

  // The unique lift fixed by x -> x^q; reached from the verbatim lift in at
  // most m iterations. The fixed point property is asserted.
  ZqElem teichmuller_lift(const FqElem& a) const {
    if (!teich_tab_.empty()) return teich_tab_[static_cast<std::size_t>(field_->index_of(a))];
    return teich_compute(a);
  }

  // Digit peeling: a_i = x mod p, then x <- (x - teich(a_i)) / p exactly.
  DigitVector digits(const ZqElem& x) const {
    validate(x);
    DigitVector out;
    out.d.reserve(static_cast<std::size_t>(m_));
    ZqElem cur = x;
    for (int i = 0; i < m_; ++i) {
      FqElem a = reduce_mod_p(cur);
      out.d.push_back(a);
      if (i + 1 < m_) {
        cur = divp_exact(sub(cur, teichmuller_lift(a)));
      }
    }
    return out;
  }

  ZqElem from_digits(const DigitVector& dv) const {
    if (static_cast<int>(dv.d.size()) != m_) {
      throw InvariantError("digit vector has length " + std::to_string(dv.d.size()) +
                           ", expected " + std::to_string(m_));
    }
    ZqElem acc = zero();
    long long pi = 1;
    for (int i = 0; i < m_; ++i) {
      ZqElem t = teichmuller_lift(dv.d[static_cast<std::size_t>(i)]);
      for (int j = 0; j < h(); ++j) acc.c[j] = (acc.c[j] + mulmod(t.c[j], pi)) % pm_;
      pi *= p();
    }
    return acc;
  }

  // Digitwise Witt addition entirely inside F_q: send digits to Witt
  // coordinates a_i -> a_i^(p^i), evaluate the binary sum polynomials reduced
  // mod p, and map coordinates back through the inverse twist.
  DigitVector witt_add_digits(const DigitVector& u, const DigitVector& v) const {
    if (static_cast<int>(u.d.size()) != m_ || static_cast<int>(v.d.size()) != m_) {
      throw InvariantError("witt_add_digits: digit vectors must have length m");
    }
    const std::vector<FqPoly>& s = sum_polys_mod_p();
    std::vector<FqElem> ucoord(u.d.size()), vcoord(v.d.size());
    for (int i = 0; i < m_; ++i) {
      ucoord[static_cast<std::size_t>(i)] = field_->frobenius(u.d[static_cast<std::size_t>(i)], i);
      vcoord[static_cast<std::size_t>(i)] = field_->frobenius(v.d[static_cast<std::size_t>(i)], i);
    }
    DigitVector out;
    out.d.reserve(static_cast<std::size_t>(m_));
    for (int n = 0; n < m_; ++n) {
      WittVarLayout layout{2, n};
      std::vector<FqElem> point(static_cast<std::size_t>(layout.arity()));
      for (int i = 0; i <= n; ++i) {
        point[static_cast<std::size_t>(layout.index(i, 0))] = ucoord[static_cast<std::size_t>(i)];
        point[static_cast<std::size_t>(layout.index(i, 1))] = vcoord[static_cast<std::size_t>(i)];
      }
      FqElem w = s[static_cast<std::size_t>(n)].eval(point);
      out.d.push_back(field_->frobenius(w, -n));
    }
    return out;
  }

  // Largest k <= m with p^k dividing x; the zero element reports m.
  int ord_p(const ZqElem& x) const {
    validate(x);
    int best = m_;
    for (int j = 0; j < h(); ++j) {
      if (x.c[j] == 0) continue;
      int k = 0;
      long long v = x.c[j];
      while (v % p() == 0) {
        v /= p();
        ++k;
      }
      best = std::min(best, k);
    }
    return best;
  }

  friend std::shared_ptr<const ZqCtx> make_ring(std::shared_ptr<const FieldCtx> field, int m);

 private:
  ZqCtx() = default;

  long long mulmod(long long a, long long b) const {
    // operands < 2^31, so the product fits in a signed 64-bit integer
    long long r = (a % pm_) * (b % pm_) % pm_;
    if (r < 0) r += pm_;
    return r;
  }

  ZqElem divp_exact(const ZqElem& a) const {
    ZqElem r = zero();
    for (int j = 0; j < h(); ++j) {
      if (a.c[j] % p() != 0) {
        throw InvariantError("exact division by p failed on coefficient " + std::to_string(a.c[j]));
      }
      r.c[j] = a.c[j] / p();
    }
    return r;
  }

  ZqElem teich_compute(const FqElem& a) const {
    field_->validate(a);
    ZqElem x = lift_verbatim(a);
    for (int i = 0; i + 1 < m_; ++i) x = pow(x, static_cast<unsigned long long>(q()));
    if (pow(x, static_cast<unsigned long long>(q())) != x) {
      throw InvariantError("teichmuller_lift: q-power iteration failed to reach a fixed point");
    }
    return x;
  }

  const std::vector<FqPoly>& sum_polys_mod_p() const {
    std::call_once(sum_polys_once_, [this]() {
      auto zz = witt_sum_polys(p(), 2, m_ - 1);
      FqRing ring{field_};
      sum_polys_fq_.reserve(zz.size());
      for (const auto& s : zz) sum_polys_fq_.push_back(to_fq_poly(s, ring));
    });
    return sum_polys_fq_;
  }

  std::shared_ptr<const FieldCtx> field_;
  int m_ = 0;
  long long pm_ = 0;
  std::vector<int64_t> modulus_;  // verbatim lift, length h+1
  std::vector<ZqElem> teich_tab_;
  mutable std::once_flag sum_polys_once_;
  mutable std::vector<FqPoly> sum_polys_fq_;
};

inline std::shared_ptr<const ZqCtx> make_ring(std::shared_ptr<const FieldCtx> field, int m) {
  if (!field) throw InvariantError("make_ring: null field context");
  if (m < 1 || m > ZqCtx::kMaxPrecision) {
    throw InvariantError("make_ring: precision m = " + std::to_string(m) + " outside [1, " +
                         std::to_string(ZqCtx::kMaxPrecision) + "]");
  }
  long long pm = 1;
  for (int i = 0; i < m; ++i) {
    if (pm > ZqCtx::kMaxModulus / field->p()) {
      throw InvariantError("make_ring: p^m exceeds the machine bound");
    }
    pm *= field->p();
  }
  auto ctx = std::shared_ptr<ZqCtx>(new ZqCtx());
  ctx->field_ = std::move(field);
  ctx->m_ = m;
  ctx->pm_ = pm;
  ctx->modulus_.assign(ctx->field_->modulus().begin(), ctx->field_->modulus().end());
  if (ctx->q() <= ZqCtx::kTeichTableLimit) {
    ctx->teich_tab_.reserve(static_cast<std::size_t>(ctx->q()));
    for (long long i = 0; i < ctx->q(); ++i) {
      ctx->teich_tab_.push_back(ctx->teich_compute(ctx->field_->element(i)));
    }
  }
  return ctx;
}

inline std::shared_ptr<const ZqCtx> make_ring(long long p, int h, int m) {
  return make_ring(make_field(p, h), m);
}

struct ZqRing {
  std::shared_ptr<const ZqCtx> r;

  using Elem = ZqElem;

  Elem zero() const { return r->zero(); }
  Elem one() const { return r->one(); }
  Elem add(const Elem& a, const Elem& b) const { return r->add(a, b); }
  Elem sub(const Elem& a, const Elem& b) const { return r->sub(a, b); }
  Elem neg(const Elem& a) const { return r->neg(a); }
  Elem mul(const Elem& a, const Elem& b) const { return r->mul(a, b); }
  Elem pow(const Elem& a, unsigned long e) const { return r->pow(a, e); }
  bool is_zero(const Elem& a) const { return r->is_zero(a); }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  bool same(const ZqRing& o) const {
    return r == o.r || (r->p() == o.r->p() && r->h() == o.r->h() && r->m() == o.r->m());
  }
  std::string to_text(const Elem& a) const { return zq_to_text(a); }
};

using ZqPoly = Polynomial<ZqRing>;

struct Prop14Report {
  bool ok = false;
  bool complete_residues = false;
  bool power_law = false;
  std::vector<long long> teich_residues;  // sorted ascending
};

// For h = 1 the Teichmuller lifts of F_p form a complete residue system
// I in [0, p^m) with x^(p-1) congruent to 1 mod p^m for x not divisible by
// p, and to 0 for the lift of zero.
inline Prop14Report check_prop14(long long p, int m) {
  auto ring = make_ring(p, 1, m);
  Prop14Report rep;
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  rep.complete_residues = true;
  rep.power_law = true;
  for (long long a = 0; a < p; ++a) {
    ZqElem t = ring->teichmuller_lift(ring->field()->element(a));
    long long x = t.c[0];
    rep.teich_residues.push_back(x);
    long long r = x % p;
    if (seen[static_cast<std::size_t>(r)]) rep.complete_residues = false;
    seen[static_cast<std::size_t>(r)] = true;
    ZqElem pw = ring->pow(t, static_cast<unsigned long long>(p - 1));
    if (x % p == 0) {
      if (!ring->is_zero(pw)) rep.power_law = false;
    } else {
      if (pw != ring->one()) rep.power_law = false;
    }
  }
  std::sort(rep.teich_residues.begin(), rep.teich_residues.end());
  rep.ok = rep.complete_residues && rep.power_law;
  return rep;
}

}  // namespace wittcount
