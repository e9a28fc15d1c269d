#pragma once

// Seeded randomized verification suites: instance generation over a bounded
// envelope, the oracle-equivalence and divisibility-bound suite, and the
// digit roundtrip suite. All randomness flows from one explicit seed so a
// suite run is reproducible and every failure line carries a replayable
// instance dump.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wittcount/count.hpp"
#include "wittcount/instance_io.hpp"

namespace wittcount {

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {
    // avoid the all-zero state and decorrelate small seeds
    next();
    next();
  }
  // splitmix64 step: stable across platforms, unlike distribution adapters
  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

 private:
  uint64_t state_;
};

// Random instances over the supported envelope: q in {2,3,4,5,9}, n <= 4,
// m <= 3 (m <= 2 when p = 5), s <= 2 constraints, all four box kinds.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(uint64_t seed) : rng_(seed) {}

  Instance next() {
    struct FieldChoice {
      long long p;
      int h;
    };
    static const FieldChoice kChoices[] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}};
    const FieldChoice fc = kChoices[rng_.range(0, 4)];
    long long q = 1;
    for (int i = 0; i < fc.h; ++i) q *= fc.p;
    int m = static_cast<int>(rng_.range(1, fc.p == 5 ? 2 : 3));
    int nmax = 4;
    while (nmax > 1 && ipow_checked(q, nmax, "q^n") > 1024) --nmax;
    int n = static_cast<int>(rng_.range(1, nmax));
    int kind = static_cast<int>(rng_.range(0, 3));
    if (kind == 3) {
      while (n > 1 && ipow_checked(q, n, "q^n") > 256) --n;
    }
    auto ring = make_ring(fc.p, fc.h, m);
    const FieldCtx& f = *ring->field();
    FqRing fring{ring->field()};
    BoxSpec box = [&]() {
      switch (kind) {
        case 0:
          return BoxSpec::teichmuller(ring, n);
        case 1: {  // split
          std::vector<std::vector<FqPoly>> sigma;
          for (int j = 0; j < n; ++j) {
            std::vector<FqPoly> per_level;
            for (int lev = 1; lev < m; ++lev) {
              long long weak_cap = 1;
              for (int t = 0; t < fc.h * (lev / fc.h); ++t) weak_cap *= fc.p;
              long long maxdeg = rng_.range(0, 2) < 2 ? std::min(weak_cap, q - 1)
                                                      : q - 1;
              FqPoly g(fring, 1);
              long long deg = rng_.range(0, maxdeg);
              for (long long e = 0; e <= deg; ++e) {
                Monomial mono;
                mono.e.push_back(static_cast<uint32_t>(e));
                g.add_term(mono, f.element(rng_.range(0, q - 1)));
              }
              per_level.push_back(std::move(g));
            }
            sigma.push_back(std::move(per_level));
          }
          return BoxSpec::split(ring, n, sigma);
        }
        case 2: {  // poly-defined, sparse
          std::vector<std::vector<FqPoly>> g;
          for (int lev = 1; lev < m; ++lev) {
            std::vector<FqPoly> per_coord;
            for (int j = 0; j < n; ++j) {
              FqPoly gj(fring, n);
              long long nterms = rng_.range(0, 2);
              bool biased = rng_.range(0, 2) < 2;
              long long weak_cap = 1;
              for (int t = 0; t < fc.h * (lev / fc.h); ++t) weak_cap *= fc.p;
              for (long long t = 0; t < nterms; ++t) {
                Monomial mono;
                long long budget = biased ? weak_cap : 2 * static_cast<long long>(n);
                for (int l = 0; l < n; ++l) {
                  long long e = rng_.range(0, std::min<long long>({2, q - 1, budget}));
                  budget -= e;
                  mono.e.push_back(static_cast<uint32_t>(e));
                }
                gj.add_term(mono, f.element(rng_.range(0, q - 1)));
              }
              per_coord.push_back(std::move(gj));
            }
            g.push_back(std::move(per_coord));
          }
          return BoxSpec::poly_defined(ring, n, g);
        }
        default: {  // enumerated: random digits above every residue point
          long long total = ipow_checked(q, n, "q^n");
          std::vector<std::vector<ZqElem>> pts;
          for (long long idx = 0; idx < total; ++idx) {
            std::vector<FqElem> x = point_at(f, n, idx);
            std::vector<ZqElem> y;
            for (int j = 0; j < n; ++j) {
              DigitVector dv;
              dv.d.push_back(x[static_cast<std::size_t>(j)]);
              for (int lev = 1; lev < m; ++lev) dv.d.push_back(f.element(rng_.range(0, q - 1)));
              y.push_back(ring->from_digits(dv));
            }
            pts.push_back(std::move(y));
          }
          return BoxSpec::enumerated(ring, n, pts);
        }
      }
    }();
    int s = static_cast<int>(rng_.range(1, 2));
    std::vector<int> mks(static_cast<std::size_t>(s), m);
    if (s == 2) {
      mks[static_cast<std::size_t>(rng_.range(0, 1))] = static_cast<int>(rng_.range(1, m));
    }
    std::vector<ConstraintInput> cons;
    for (int k = 0; k < s; ++k) {
      int m_k = mks[static_cast<std::size_t>(k)];
      long long max_terms = kind == 0 ? 2 : 3;
      long long nterms = rng_.range(1, max_terms);
      ZqPoly fk(ZqRing{ring}, n);
      static const uint32_t kExpChoices[] = {0, 0, 0, 1, 1, 2};
      for (long long t = 0; t < nterms; ++t) {
        Monomial mono;
        for (int j = 0; j < n; ++j) {
          mono.e.push_back(kExpChoices[rng_.range(0, 5)]);
        }
        ZqElem c = ring->zero();
        bool nonzero = false;
        for (int i = 0; i < fc.h; ++i) {
          c.c[static_cast<std::size_t>(i)] = rng_.range(0, ring->pm() - 1);
          if (c.c[static_cast<std::size_t>(i)] != 0) nonzero = true;
        }
        if (!nonzero) c = ring->one();
        fk.add_term(mono, c);
      }
      if (fk.is_zero()) {
        fk.add_term(Monomial{std::vector<uint32_t>(static_cast<std::size_t>(n), 0)}, ring->one());
      }
      std::optional<long long> dk;
      if (rng_.range(0, 9) < 2) dk = rng_.range(1, 3);
      cons.push_back(ConstraintInput{std::move(fk), m_k, dk});
    }
    return Instance(ring, std::move(box), std::move(cons));
  }

 private:
  Rng rng_;
};

enum class FailureKind { kOracle, kRefutation, kBound, kOther };

struct SuiteFailure {
  FailureKind kind;
  std::string line;  // description plus replayable instance dump
};

struct OracleSuiteReport {
  uint64_t seed = 0;
  int total = 0;
  int tier_strong = 0;
  int tier_weak = 0;
  int tier_none = 0;
  int bound_checked = 0;  // hypothesis tier held with a nonzero count
  int vacuous = 0;
  int axkatz = 0;  // all-m_k-equal-1 instances matched the classical bound
  std::vector<SuiteFailure> failures;
  bool ok() const { return failures.empty(); }
};

namespace detail {
inline void suite_fail(OracleSuiteReport& rep, FailureKind kind, const std::string& what,
                       uint64_t seed, int index, const Instance& inst) {
  std::ostringstream os;
  os << what << " [seed " << seed << ", instance " << index
     << "] dump: " << instance_to_json(inst).dump();
  rep.failures.push_back({kind, os.str()});
}
}  // namespace detail

// Criterion suite: every generated instance is counted both ways (verify
// itself asserts counter agreement and, under a passed hypothesis tier, the
// divisibility bound). With all m_k = 1 the bound must equal the classical
// value ceil*((n - sum deg)/max deg).
template <class Fn>
OracleSuiteReport run_oracle_suite(uint64_t seed, int instances, const CountOptions& opts,
                                   Fn&& per_instance) {
  OracleSuiteReport rep;
  rep.seed = seed;
  InstanceGenerator gen(seed);
  for (int i = 0; i < instances; ++i) {
    Instance inst = gen.next();
    ++rep.total;
    try {
      VerifyReport vr = verify(inst, opts);
      switch (vr.tier) {
        case VerifyReport::Tier::kStrong:
          ++rep.tier_strong;
          break;
        case VerifyReport::Tier::kWeak:
          ++rep.tier_weak;
          break;
        case VerifyReport::Tier::kNone:
          ++rep.tier_none;
          break;
      }
      if (vr.vacuous) ++rep.vacuous;
      if (vr.tier != VerifyReport::Tier::kNone && !vr.vacuous) ++rep.bound_checked;
      bool all_m1 = true;
      for (const auto& c : inst.constraints()) {
        if (c.m_k != 1) all_m1 = false;
      }
      if (all_m1) {
        ++rep.axkatz;
        long long sum_d = 0, max_d = 0;
        for (const auto& c : inst.constraints()) {
          if (c.vanishes) continue;
          sum_d += c.d_k;
          max_d = std::max(max_d, c.d_k);
        }
        long long classical =
            max_d == 0 ? 0
                       : ceil_star(mpq_class(to_mpz(inst.n() - sum_d)) / mpq_class(to_mpz(max_d)));
        if (classical != vr.bound) {
          detail::suite_fail(rep, FailureKind::kBound,
                             "classical bound " + std::to_string(classical) +
                                 " != bound_main " + std::to_string(vr.bound),
                             seed, i, inst);
        }
      }
      per_instance(i, inst, vr);
    } catch (const OracleMismatchError& e) {
      detail::suite_fail(rep, FailureKind::kOracle, e.what(), seed, i, inst);
    } catch (const RefutationError& e) {
      detail::suite_fail(rep, FailureKind::kRefutation, e.what(), seed, i, inst);
    } catch (const Error& e) {
      detail::suite_fail(rep, FailureKind::kOther, e.what(), seed, i, inst);
    }
  }
  return rep;
}

inline OracleSuiteReport run_oracle_suite(uint64_t seed, int instances,
                                          const CountOptions& opts = {}) {
  return run_oracle_suite(seed, instances, opts,
                          [](int, const Instance&, const VerifyReport&) {});
}

struct RoundtripReport {
  int rings = 0;
  long long elements = 0;
  long long pairs = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Digit roundtrip and Witt-coordinate addition consistency. Rings up to 1e4
// elements are swept exhaustively (and pairwise when that stays within 1e4
// pairs); larger rings get >= 1e4 random elements and pairs.
inline RoundtripReport run_roundtrip_suite(uint64_t seed) {
  RoundtripReport rep;
  Rng rng(seed);
  struct RingChoice {
    long long p;
    int h;
    int m;
  };
  // Precision is capped per prime: the symbolic addition law at level n has a
  // term count that grows super-exponentially in p^n, so m stays within what
  // the structure-polynomial cache can build in well under a second per ring.
  static const RingChoice kRings[] = {
      {2, 1, 2}, {2, 1, 3}, {2, 1, 6}, {3, 1, 2}, {3, 1, 4}, {5, 1, 3},
      {7, 1, 2}, {7, 1, 3}, {13, 1, 2}, {2, 2, 2}, {2, 2, 3}, {2, 2, 5},
      {3, 2, 2}, {3, 2, 3}, {3, 2, 4}, {2, 3, 2}, {5, 2, 2}, {5, 2, 3},
  };
  for (const auto& rc : kRings) {
    auto ring = make_ring(rc.p, rc.h, rc.m);
    const ZqCtx& R = *ring;
    ++rep.rings;
    double size_log = rc.h * rc.m * std::log2(static_cast<double>(rc.p));
    long long size = size_log > 40 ? -1 : ipow_checked(R.pm(), rc.h, "ring size");
    bool exhaustive = size > 0 && size <= 10000;
    auto element_at = [&](long long idx) {
      ZqElem e = R.zero();
      for (int i = 0; i < rc.h; ++i) {
        e.c[static_cast<std::size_t>(i)] = idx % R.pm();
        idx /= R.pm();
      }
      return e;
    };
    auto random_element = [&]() {
      ZqElem e = R.zero();
      for (int i = 0; i < rc.h; ++i) e.c[static_cast<std::size_t>(i)] = rng.range(0, R.pm() - 1);
      return e;
    };
    auto check_one = [&](const ZqElem& a) {
      ++rep.elements;
      ZqElem back = R.from_digits(R.digits(a));
      if (!(back == a)) {
        rep.failures.push_back("digit roundtrip failed at " + zq_to_text(a) + " in Z_" +
                               std::to_string(R.q()) + "/p^" + std::to_string(rc.m));
      }
    };
    auto check_pair = [&](const ZqElem& a, const ZqElem& b) {
      ++rep.pairs;
      DigitVector lhs = R.witt_add_digits(R.digits(a), R.digits(b));
      DigitVector rhs = R.digits(R.add(a, b));
      bool same = lhs.d.size() == rhs.d.size();
      for (std::size_t i = 0; same && i < lhs.d.size(); ++i) {
        if (lhs.d[i] != rhs.d[i]) same = false;
      }
      if (!same) {
        rep.failures.push_back("witt_add_digits disagreed with ring addition at " +
                               zq_to_text(a) + " + " + zq_to_text(b) + " in Z_" +
                               std::to_string(R.q()) + "/p^" + std::to_string(rc.m));
      }
    };
    if (exhaustive) {
      for (long long i = 0; i < size; ++i) check_one(element_at(i));
      if (size * size <= 10000) {
        for (long long i = 0; i < size; ++i) {
          for (long long j = 0; j < size; ++j) check_pair(element_at(i), element_at(j));
        }
      } else {
        for (int t = 0; t < 10000; ++t) check_pair(random_element(), random_element());
      }
    } else {
      for (int t = 0; t < 10000; ++t) check_one(random_element());
      for (int t = 0; t < 10000; ++t) check_pair(random_element(), random_element());
    }
  }
  return rep;
}

}  // namespace wittcount
