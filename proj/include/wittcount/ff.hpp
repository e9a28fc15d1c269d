#pragma once

// Finite field contexts F_q = F_p[t]/(modulus), q = p^h. The modulus is the
// lexicographically smallest monic irreducible of degree h over F_p, with
// coefficient vectors compared low-degree-first. Elements are dense
// coefficient vectors of length h with entries in [0, p). For small q the
// context precomputes full operation tables; all public operations work for
// any supported q either way.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "wittcount/common.hpp"

namespace wittcount {

struct FqElem {
  std::vector<int32_t> c;  // c[j] multiplies t^j, 0 <= c[j] < p

  bool operator==(const FqElem& o) const { return c == o.c; }
  bool operator!=(const FqElem& o) const { return c != o.c; }
  bool operator<(const FqElem& o) const { return c < o.c; }
};

inline std::string fq_to_text(const FqElem& a) {
  std::string s = "[";
  for (std::size_t j = 0; j < a.c.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(a.c[j]);
  }
  s += "]";
  return s;
}

class FieldCtx {
 public:
  static constexpr int kMaxExtensionDegree = 8;
  static constexpr long long kMaxOrder = 1LL << 16;
  static constexpr long long kTableLimit = 256;  // dense op tables below this

  long long p() const { return p_; }
  int h() const { return h_; }
  long long q() const { return q_; }
  const std::vector<int32_t>& modulus() const { return modulus_; }

  FqElem zero() const { return FqElem{std::vector<int32_t>(h_, 0)}; }
  FqElem one() const { return from_int(1); }

  // v reduced mod p into the prime subfield.
  FqElem from_int(long long v) const {
    FqElem e = zero();
    long long r = v % p_;
    if (r < 0) r += p_;
    e.c[0] = static_cast<int32_t>(r);
    return e;
  }

  bool is_zero(const FqElem& a) const {
    return std::all_of(a.c.begin(), a.c.end(), [](int32_t x) { return x == 0; });
  }

  void validate(const FqElem& a) const {
    if (static_cast<int>(a.c.size()) != h_) {
      throw InvariantError("field element has wrong length " + std::to_string(a.c.size()) +
                           ", expected " + std::to_string(h_));
    }
    for (int32_t x : a.c) {
      if (x < 0 || x >= p_) {
        throw InvariantError("field element coefficient " + std::to_string(x) +
                             " out of range [0, " + std::to_string(p_) + ")");
      }
    }
  }

  FqElem add(const FqElem& a, const FqElem& b) const {
    FqElem r = a;
    for (int j = 0; j < h_; ++j) {
      r.c[j] += b.c[j];
      if (r.c[j] >= p_) r.c[j] -= static_cast<int32_t>(p_);
    }
    return r;
  }

  FqElem sub(const FqElem& a, const FqElem& b) const {
    FqElem r = a;
    for (int j = 0; j < h_; ++j) {
      r.c[j] -= b.c[j];
      if (r.c[j] < 0) r.c[j] += static_cast<int32_t>(p_);
    }
    return r;
  }

  FqElem neg(const FqElem& a) const { return sub(zero(), a); }

  FqElem mul(const FqElem& a, const FqElem& b) const {
    if (has_tables_) return element(mul_idx(index_of(a), index_of(b)));
    return mul_generic(a, b);
  }

  // a^e for e >= 0.
  FqElem pow(const FqElem& a, unsigned long long e) const {
    FqElem acc = one();
    FqElem base = a;
    while (e > 0) {
      if (e & 1ULL) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1ULL;
    }
    return acc;
  }

  FqElem inv(const FqElem& a) const {
    if (is_zero(a)) throw InvariantError("inverse of zero field element");
    return pow(a, static_cast<unsigned long long>(q_ - 2));
  }

  // a -> a^(p^k); k may be negative, taken mod h.
  FqElem frobenius(const FqElem& a, long long k) const {
    long long e = ((k % h_) + h_) % h_;
    long long pe = 1;
    for (long long i = 0; i < e; ++i) pe *= p_;
    return pow(a, static_cast<unsigned long long>(pe));
  }

  // Enumeration order: element(i) has coefficients given by the base-p digits
  // of i, least significant digit at t^0. Zero comes first.
  FqElem element(long long idx) const {
    FqElem e = zero();
    for (int j = 0; j < h_; ++j) {
      e.c[j] = static_cast<int32_t>(idx % p_);
      idx /= p_;
    }
    return e;
  }

  long long index_of(const FqElem& a) const {
    validate(a);
    long long idx = 0;
    for (int j = h_ - 1; j >= 0; --j) idx = idx * p_ + a.c[j];
    return idx;
  }

  std::vector<FqElem> all_elements() const {
    std::vector<FqElem> out;
    out.reserve(static_cast<std::size_t>(q_));
    for (long long i = 0; i < q_; ++i) out.push_back(element(i));
    return out;
  }

  // Index-space operations for hot loops. Valid only when has_tables().
  bool has_tables() const { return has_tables_; }
  int32_t add_idx(long long i, long long j) const { return add_tab_[i * q_ + j]; }
  int32_t sub_idx(long long i, long long j) const { return sub_tab_[i * q_ + j]; }
  int32_t mul_idx(long long i, long long j) const { return mul_tab_[i * q_ + j]; }
  int32_t neg_idx(long long i) const { return neg_tab_[i]; }
  int32_t frob_idx(long long i, long long k) const {
    long long e = ((k % h_) + h_) % h_;
    return frob_tab_[e * q_ + i];
  }

  friend std::shared_ptr<const FieldCtx> make_field(long long p, int h);

 private:
  FieldCtx() = default;

  FqElem mul_generic(const FqElem& a, const FqElem& b) const {
    // Schoolbook product followed by reduction by the monic modulus.
    std::vector<long long> prod(2 * h_ - 1, 0);
    for (int i = 0; i < h_; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j < h_; ++j) prod[i + j] += static_cast<long long>(a.c[i]) * b.c[j];
    }
    for (int d = 2 * h_ - 2; d >= h_; --d) {
      long long lead = prod[d] % p_;
      if (lead == 0) {
        prod[d] = 0;
        continue;
      }
      for (int j = 0; j < h_; ++j) {
        prod[d - h_ + j] -= lead * modulus_[j];
      }
      prod[d] = 0;
    }
    FqElem r = zero();
    for (int j = 0; j < h_; ++j) {
      long long v = prod[j] % p_;
      if (v < 0) v += p_;
      r.c[j] = static_cast<int32_t>(v);
    }
    return r;
  }

  void build_tables() {
    has_tables_ = true;
    add_tab_.resize(static_cast<std::size_t>(q_ * q_));
    sub_tab_.resize(static_cast<std::size_t>(q_ * q_));
    mul_tab_.resize(static_cast<std::size_t>(q_ * q_));
    neg_tab_.resize(static_cast<std::size_t>(q_));
    for (long long i = 0; i < q_; ++i) {
      FqElem a = element(i);
      neg_tab_[i] = static_cast<int32_t>(index_of(neg(a)));
      for (long long j = 0; j < q_; ++j) {
        FqElem b = element(j);
        add_tab_[i * q_ + j] = static_cast<int32_t>(index_of(add(a, b)));
        sub_tab_[i * q_ + j] = static_cast<int32_t>(index_of(sub(a, b)));
        mul_tab_[i * q_ + j] = static_cast<int32_t>(index_of(mul_generic(a, b)));
      }
    }
    frob_tab_.resize(static_cast<std::size_t>(h_ * q_));
    for (long long i = 0; i < q_; ++i) frob_tab_[i] = static_cast<int32_t>(i);
    for (int e = 1; e < h_; ++e) {
      for (long long i = 0; i < q_; ++i) {
        FqElem prev = element(frob_tab_[(e - 1) * q_ + i]);
        frob_tab_[e * q_ + i] = static_cast<int32_t>(index_of(pow(prev, static_cast<unsigned long long>(p_))));
      }
    }
  }

  long long p_ = 0;
  int h_ = 0;
  long long q_ = 0;
  std::vector<int32_t> modulus_;  // length h+1, monic
  bool has_tables_ = false;
  std::vector<int32_t> add_tab_, sub_tab_, mul_tab_, neg_tab_, frob_tab_;
};

namespace detail {

// Remainder of a mod b over F_p, both dense coefficient vectors, b monic.
inline std::vector<int32_t> fp_poly_rem(std::vector<int64_t> a, const std::vector<int32_t>& b,
                                        long long p) {
  int db = static_cast<int>(b.size()) - 1;
  for (int d = static_cast<int>(a.size()) - 1; d >= db; --d) {
    long long lead = a[d] % p;
    if (lead < 0) lead += p;
    if (lead == 0) continue;
    for (int j = 0; j <= db; ++j) {
      a[d - db + j] -= lead * b[j];
    }
  }
  std::vector<int32_t> r(static_cast<std::size_t>(db), 0);
  for (int j = 0; j < db; ++j) {
    long long v = (j < static_cast<int>(a.size()) ? a[j] : 0) % p;
    if (v < 0) v += p;
    r[j] = static_cast<int32_t>(v);
  }
  return r;
}

// Reducible iff some monic divisor of degree in [1, deg/2] divides it.
inline bool fp_poly_irreducible(const std::vector<int32_t>& f, long long p) {
  int h = static_cast<int>(f.size()) - 1;
  if (h == 1) return true;
  for (int d = 1; d <= h / 2; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long idx = 0; idx < count; ++idx) {
      std::vector<int32_t> div(static_cast<std::size_t>(d + 1), 0);
      long long t = idx;
      for (int j = 0; j < d; ++j) {
        div[j] = static_cast<int32_t>(t % p);
        t /= p;
      }
      div[d] = 1;
      std::vector<int64_t> a(f.begin(), f.end());
      std::vector<int32_t> rem = fp_poly_rem(std::move(a), div, p);
      bool zero = std::all_of(rem.begin(), rem.end(), [](int32_t x) { return x == 0; });
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace detail

inline std::shared_ptr<const FieldCtx> make_field(long long p, int h) {
  if (!is_prime_u64(static_cast<unsigned long long>(p > 0 ? p : 0))) {
    throw InvariantError("make_field: p = " + std::to_string(p) + " is not prime");
  }
  if (h < 1 || h > FieldCtx::kMaxExtensionDegree) {
    throw InvariantError("make_field: extension degree h = " + std::to_string(h) +
                         " outside [1, " + std::to_string(FieldCtx::kMaxExtensionDegree) + "]");
  }
  long long q = 1;
  for (int i = 0; i < h; ++i) {
    q *= p;
    if (q > FieldCtx::kMaxOrder) {
      throw InvariantError("make_field: p^h exceeds the enumeration cap " +
                           std::to_string(FieldCtx::kMaxOrder));
    }
  }
  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->p_ = p;
  ctx->h_ = h;
  ctx->q_ = q;
  // Scan monic candidates in low-degree-first lexicographic order; the first
  // irreducible wins. Candidate index digits give coefficients with c_0 the
  // most significant position of the comparison.
  long long count = q;
  bool found = false;
  for (long long idx = 0; idx < count && !found; ++idx) {
    std::vector<int32_t> cand(static_cast<std::size_t>(h + 1), 0);
    long long t = idx;
    for (int j = h - 1; j >= 0; --j) {
      cand[j] = static_cast<int32_t>(t % p);
      t /= p;
    }
    cand[h] = 1;
    if (detail::fp_poly_irreducible(cand, p)) {
      ctx->modulus_ = cand;
      found = true;
    }
  }
  if (!found) {
    throw InvariantError("make_field: no irreducible of degree " + std::to_string(h) +
                         " found over F_" + std::to_string(p));
  }
  if (q <= FieldCtx::kTableLimit) ctx->build_tables();
  return ctx;
}

}  // namespace wittcount
