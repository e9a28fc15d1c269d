#include <gtest/gtest.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "wittcount/count.hpp"
#include "wittcount/repro.hpp"
#include "wittcount/suite.hpp"

namespace wittcount {
namespace {

Monomial mono(std::vector<uint32_t> e) { return Monomial{std::move(e)}; }

// f = x_1 + ... + x_n over the given ring.
ZqPoly linear_sum(const std::shared_ptr<const ZqCtx>& ring, int n) {
  ZqPoly f(ZqRing{ring}, n);
  for (int j = 0; j < n; ++j) {
    Monomial m{std::vector<uint32_t>(static_cast<std::size_t>(n), 0)};
    m.e[static_cast<std::size_t>(j)] = 1;
    f.add_term(m, ring->one());
  }
  return f;
}

std::vector<ZqElem> all_ring_elements(const ZqCtx& R) {
  std::vector<ZqElem> out;
  long long total = 1;
  for (int j = 0; j < R.h(); ++j) total *= R.pm();
  for (long long idx = 0; idx < total; ++idx) {
    ZqElem e = R.zero();
    long long t = idx;
    for (int j = 0; j < R.h(); ++j) {
      e.c[static_cast<std::size_t>(j)] = t % R.pm();
      t /= R.pm();
    }
    out.push_back(e);
  }
  return out;
}

// Recombination contract: f(z) = sum_t p^t * sum_e tau(c_{t,e}) z^e for every
// ring point z, where c_{t,e} are the level-t expansion coefficients.
TEST(TeichExpand, RecombinesToTheOriginalPolynomial) {
  struct Case {
    long long p;
    int h, m, n;
  };
  for (Case cs : {Case{3, 1, 3, 2}, Case{2, 2, 2, 2}}) {
    auto ring = make_ring(cs.p, cs.h, cs.m);
    ZqPoly f(ZqRing{ring}, cs.n);
    f.add_term(mono({2, 0}), ring->from_int(5));
    f.add_term(mono({1, 1}), ring->from_int(3));
    f.add_term(mono({0, 1}), ring->one());
    f.add_term(mono({0, 0}), ring->from_int(2));
    std::vector<FqPoly> levels = teich_expand(f, cs.m);
    ASSERT_EQ(levels.size(), static_cast<std::size_t>(cs.m));

    std::vector<ZqElem> elems = all_ring_elements(*ring);
    for (const ZqElem& z0 : elems) {
      for (const ZqElem& z1 : elems) {
        std::vector<ZqElem> z{z0, z1};
        ZqElem want = f.eval(z);
        ZqElem got = ring->zero();
        ZqElem pt = ring->one();
        for (int t = 0; t < cs.m; ++t) {
          for (const auto& [m, c] : levels[static_cast<std::size_t>(t)].terms()) {
            ZqElem term = ring->teichmuller_lift(c);
            for (int j = 0; j < cs.n; ++j) {
              for (uint32_t r = 0; r < m.e[static_cast<std::size_t>(j)]; ++r) {
                term = ring->mul(term, z[static_cast<std::size_t>(j)]);
              }
            }
            got = ring->add(got, ring->mul(pt, term));
          }
          pt = ring->mul(pt, ring->from_int(cs.p));
        }
        ASSERT_EQ(got, want) << "p=" << cs.p << " h=" << cs.h;
      }
    }
  }
}

TEST(TeichExpand, LevelsAreTheTeichmullerDigitsOfCoefficients) {
  auto ring = make_ring(3, 1, 2);
  // digits(5) = (2, 2) in Z/9.
  ZqPoly f(ZqRing{ring}, 1);
  f.add_term(mono({1}), ring->from_int(5));
  std::vector<FqPoly> levels = teich_expand(f, 2);
  const FieldCtx& fld = *ring->field();
  FqRing fr{ring->field()};
  FqPoly want0(fr, 1), want1(fr, 1);
  want0.add_term(mono({1}), fld.from_int(2));
  want1.add_term(mono({1}), fld.from_int(2));
  EXPECT_EQ(levels[0], want0);
  EXPECT_EQ(levels[1], want1);
}

TEST(TeichExpand, RangeIsValidated) {
  auto ring = make_ring(2, 1, 2);
  ZqPoly f(ZqRing{ring}, 1);
  EXPECT_THROW(teich_expand(f, 3), InvariantError);
  EXPECT_THROW(teich_expand(f, -1), InvariantError);
  EXPECT_TRUE(teich_expand(f, 0).empty());
}

// Plain integer model of the p = 2 example: coordinates a_j in {0,1}, the
// first lifts to a_1 + 2*(a_1 a_2 a_3 a_4 + a), the sum must vanish mod 4.
long long example1_integer_model(int a) {
  long long cnt = 0;
  for (int bits = 0; bits < 16; ++bits) {
    int v[4];
    for (int j = 0; j < 4; ++j) v[j] = (bits >> j) & 1;
    int g = (v[0] & v[1] & v[2] & v[3]) ^ (a & 1);
    int sum = (v[0] + 2 * g + v[1] + v[2] + v[3]) % 4;
    if (sum == 0) ++cnt;
  }
  return cnt;
}

TEST(Example1, CountsMatchAnIndependentIntegerModel) {
  EXPECT_EQ(example1_integer_model(0), 1);
  EXPECT_EQ(example1_integer_model(1), 7);
  for (int a : {0, 1}) {
    VerifyReport rep = verify(example1_instance(a));
    EXPECT_EQ(rep.count, example1_integer_model(a));
    EXPECT_EQ(rep.count_reduced, rep.count);
    EXPECT_EQ(rep.ord_p, std::optional<long long>(0));
    EXPECT_EQ(rep.bound, 1);
    EXPECT_EQ(rep.hbound, 1);
    EXPECT_FALSE(rep.holds) << "the box is designed to defeat the bound";
    EXPECT_EQ(rep.tier, VerifyReport::Tier::kNone);
    EXPECT_FALSE(rep.weak_ok);
    EXPECT_FALSE(rep.box_check.ok);
    ASSERT_EQ(rep.strong.strong_violations.size(), 1u);
    const StrongViolation& v = rep.strong.strong_violations[0];
    EXPECT_EQ(v.k, 0);
    EXPECT_EQ(v.level, 0);
    EXPECT_EQ(v.mono, mono({1, 0, 0, 0}));
    ASSERT_EQ(v.factors.size(), 1u);
    EXPECT_EQ(v.factors[0], (std::pair<int, int>{1, 0}));
    EXPECT_EQ(v.degree, 4);
    EXPECT_EQ(v.threshold, 2);
  }
}

TEST(Example1, ReducedSystemIsTheDisplayedOne) {
  for (int a : {0, 1}) {
    Instance inst = example1_instance(a);
    FqSystem sys = reduce_to_fq(inst);
    const FieldCtx& fld = *inst.ring()->field();
    FqRing fr{inst.ring()->field()};
    ASSERT_EQ(sys.polys.size(), 2u);
    ASSERT_EQ(sys.polys[0].level, 0);
    ASSERT_EQ(sys.polys[1].level, 1);

    FqPoly want0(fr, 4);
    for (int j = 0; j < 4; ++j) {
      Monomial m{std::vector<uint32_t>(4, 0)};
      m.e[static_cast<std::size_t>(j)] = 1;
      want0.add_term(m, fld.one());
    }
    EXPECT_EQ(sys.polys[0].g, want0);

    FqPoly want1(fr, 4);
    want1.add_term(mono({1, 1, 1, 1}), fld.one());
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        Monomial m{std::vector<uint32_t>(4, 0)};
        m.e[static_cast<std::size_t>(i)] = 1;
        m.e[static_cast<std::size_t>(j)] = 1;
        want1.add_term(m, fld.one());
      }
    }
    if (a == 1) want1.add_term(mono({0, 0, 0, 0}), fld.one());
    EXPECT_EQ(sys.polys[1].g, want1);
  }
}

TEST(Table1, RowWithExponentSixReducesToTheDisplayedSystem) {
  Instance inst = table1_instance({6, 6, 6, 6, 6});
  FqSystem sys = reduce_to_fq(inst);
  const FieldCtx& fld = *inst.ring()->field();
  FqRing fr{inst.ring()->field()};
  ASSERT_EQ(sys.polys.size(), 2u);

  FqPoly want0(fr, 5);
  for (int j = 0; j < 5; ++j) {
    Monomial m{std::vector<uint32_t>(5, 0)};
    m.e[static_cast<std::size_t>(j)] = 1;
    want0.add_term(m, fld.one());
  }
  EXPECT_EQ(sys.polys[0].g, want0);

  // y_j^2 terms from the twisted exponent 3*6 = 18 = 2 mod (q-1), plus the
  // carry of the plain sum: 2 y_i^2 y_j for i != j and y_i y_j y_k.
  FqPoly want1(fr, 5);
  for (int j = 0; j < 5; ++j) {
    Monomial m{std::vector<uint32_t>(5, 0)};
    m.e[static_cast<std::size_t>(j)] = 2;
    want1.add_term(m, fld.one());
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      Monomial m{std::vector<uint32_t>(5, 0)};
      m.e[static_cast<std::size_t>(i)] = 2;
      m.e[static_cast<std::size_t>(j)] = 1;
      want1.add_term(m, fld.from_int(2));
    }
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      for (int k = j + 1; k < 5; ++k) {
        Monomial m{std::vector<uint32_t>(5, 0)};
        m.e[static_cast<std::size_t>(i)] = 1;
        m.e[static_cast<std::size_t>(j)] = 1;
        m.e[static_cast<std::size_t>(k)] = 1;
        want1.add_term(m, fld.one());
      }
    }
  }
  EXPECT_EQ(sys.polys[1].g, want1);
}

TEST(Table1, SpotCountsMatchTheFrozenRows) {
  VerifyReport first = verify(table1_instance({4, 4, 4, 4, 4}));
  EXPECT_EQ(first.count, 1206);
  EXPECT_EQ(first.ord_p, std::optional<long long>(2));
  EXPECT_EQ(first.hbound, 2);
  EXPECT_TRUE(first.holds);
  // Split exponents >= 2 exceed the box degree cap, so no tier applies and
  // the bound is informational for these rows.
  EXPECT_EQ(first.tier, VerifyReport::Tier::kNone);

  VerifyReport last = verify(table1_instance({4, 7, 2, 5, 8}));
  EXPECT_EQ(last.count, 660);
  EXPECT_EQ(last.ord_p, std::optional<long long>(1));
  EXPECT_EQ(last.hbound, 2);
  EXPECT_FALSE(last.holds);
  EXPECT_EQ(last.tier, VerifyReport::Tier::kNone);
}

TEST(Example2, BaselineTeichmullerBoxSatisfiesTheBound) {
  VerifyReport rep = verify(example2_baseline_instance());
  EXPECT_EQ(rep.count, 1161);  // 3^3 * 43
  EXPECT_EQ(rep.ord_p, std::optional<long long>(3));
  EXPECT_EQ(rep.bound, 1);
  EXPECT_EQ(rep.hbound, 2);
  EXPECT_EQ(rep.tier, VerifyReport::Tier::kStrong);
  EXPECT_TRUE(rep.holds);
}

TEST(Example2, ModPCountAttainsTheClassicalBoundExactly) {
  VerifyReport rep = verify(example2_modp_instance());
  EXPECT_EQ(rep.count, 6561);  // 9^4 = 3^8
  EXPECT_EQ(rep.ord_p, std::optional<long long>(8));
  EXPECT_EQ(rep.bound, 4);
  EXPECT_EQ(rep.hbound, 8);
  EXPECT_EQ(rep.tier, VerifyReport::Tier::kStrong);
  EXPECT_TRUE(rep.holds);
}

TEST(CountFqSystem, EmptyZeroConstantAndLinearSystems) {
  auto fld = make_field(2, 2);
  FqRing fr{fld};
  FqSystem sys{fr, 2, {}};
  EXPECT_EQ(count_fq_system(sys), 16);

  sys.polys.push_back({0, 0, FqPoly(fr, 2)});
  EXPECT_EQ(count_fq_system(sys), 16) << "zero polynomials are vacuous";

  FqPoly one(fr, 2);
  one.add_term(mono({0, 0}), fld->one());
  sys.polys.push_back({1, 0, one});
  EXPECT_EQ(count_fq_system(sys), 0) << "a nonzero constant has no roots";

  FqPoly lin(fr, 2);
  lin.add_term(mono({1, 0}), fld->one());
  lin.add_term(mono({0, 1}), fld->one());
  FqSystem sys2{fr, 2, {{0, 0, lin}}};
  EXPECT_EQ(count_fq_system(sys2), 4) << "y2 is determined by y1";

  FqPoly y0(fr, 2), y1(fr, 2);
  y0.add_term(mono({1, 0}), fld->one());
  y1.add_term(mono({0, 1}), fld->one());
  FqSystem sys3{fr, 2, {{0, 0, y0}, {1, 0, y1}}};
  EXPECT_EQ(count_fq_system(sys3), 1);
}

TEST(CountFqSystem, LargeFieldUsesTheGenericPath) {
  auto fld = make_field(5, 4);  // q = 625, above the table limit
  ASSERT_FALSE(fld->has_tables());
  FqRing fr{fld};
  FqPoly f(fr, 1);
  f.add_term(mono({2}), fld->one());
  f.add_term(mono({0}), fld->neg(fld->one()));
  FqSystem sys{fr, 1, {{0, 0, f}}};
  EXPECT_EQ(count_fq_system(sys), 2) << "y^2 = 1 has two roots in odd characteristic";
}

TEST(CountFqSystem, EnumerationCapIsEnforced) {
  auto fld = make_field(2, 2);
  FqRing fr{fld};
  FqSystem sys{fr, 6, {}};
  CountOptions opts;
  opts.cap = 1000;  // 4^6 = 4096 points
  EXPECT_THROW(count_fq_system(sys, opts), BudgetError);
}

TEST(CountBruteforce, EnumerationCapIsEnforced) {
  CountOptions opts;
  opts.cap = 10;  // the box has 16 points
  EXPECT_THROW(count_bruteforce(example1_instance(0), opts), BudgetError);
}

TEST(CeilStar, ExactRationalCeilingClampedAtZero) {
  EXPECT_EQ(ceil_star(mpq_class(7, 3)), 3);
  EXPECT_EQ(ceil_star(mpq_class(6, 3)), 2);
  EXPECT_EQ(ceil_star(mpq_class(1, 1000000)), 1);
  EXPECT_EQ(ceil_star(mpq_class(0)), 0);
  EXPECT_EQ(ceil_star(mpq_class(-5, 2)), 0);
}

TEST(BoundMain, KnownValuesAndValidation) {
  // ceil*((4 - 3)/2) with p = 2, one constraint of degree 1 at precision 2.
  EXPECT_EQ(bound_main(2, 4, {{1, 2}}), 1);
  // ceil*((5 - 4)/3) with p = 3.
  EXPECT_EQ(bound_main(3, 5, {{1, 2}}), 1);
  // Precision 1 reduces to the classical ceil*((n - sum d)/max d).
  EXPECT_EQ(bound_main(3, 5, {{1, 1}}), 4);
  EXPECT_EQ(bound_main(7, 10, {{2, 1}, {3, 1}}), 2);
  // Negative numerators clamp to zero.
  EXPECT_EQ(bound_main(2, 3, {{2, 2}}), 0);
  // Mixed precisions: num = 10 - 3 - 2 = 5, den = max(2, 2) = 2.
  EXPECT_EQ(bound_main(2, 10, {{1, 2}, {2, 1}}), 3);
  EXPECT_EQ(bound_main(2, 4, {}), 0);
  EXPECT_THROW(bound_main(2, 4, {{0, 1}}), InvariantError);
  EXPECT_THROW(bound_main(2, 4, {{1, 0}}), InvariantError);
}

TEST(OrdPInt, MatchesTheValuationDefinition) {
  EXPECT_EQ(ord_p_int(0, 3), std::nullopt);
  EXPECT_EQ(ord_p_int(9, 3), std::optional<long long>(2));
  EXPECT_EQ(ord_p_int(7, 3), std::optional<long long>(0));
  EXPECT_EQ(ord_p_int(12, 2), std::optional<long long>(2));
  EXPECT_EQ(ord_p_int(-18, 3), std::optional<long long>(2));
}

TEST(StrongHypothesis, TeichmullerBoxReducesToPerLevelDegreeChecks) {
  auto ring = make_ring(2, 1, 3);
  ZqPoly f(ZqRing{ring}, 1);
  f.add_term(mono({2}), ring->one());
  f.add_term(mono({1}), ring->one());
  Instance ok(ring, BoxSpec::teichmuller(ring, 1), {{f, 3, std::nullopt}});
  HypothesisReport rep = check_strong_hypothesis(ok, interpolate_box(ok.box()));
  EXPECT_TRUE(rep.strong_ok);

  // Understating the degree bound must be caught at level 0.
  Instance bad(ring, BoxSpec::teichmuller(ring, 1), {{f, 3, 1}});
  HypothesisReport rep2 = check_strong_hypothesis(bad, interpolate_box(bad.box()));
  EXPECT_FALSE(rep2.strong_ok);
  ASSERT_FALSE(rep2.strong_violations.empty());
  EXPECT_EQ(rep2.strong_violations[0].degree, 2);
  EXPECT_EQ(rep2.strong_violations[0].threshold, 1);
  EXPECT_TRUE(rep2.strong_violations[0].factors.empty());
}

TEST(StrongHypothesis, DeclaredDegreeBelowTrueDegreeDropsEveryTier) {
  auto ring = make_ring(2, 1, 3);
  ZqPoly f(ZqRing{ring}, 1);
  f.add_term(mono({2}), ring->one());
  Instance inst(ring, BoxSpec::teichmuller(ring, 1), {{f, 3, 1}});
  VerifyReport rep = verify(inst);
  EXPECT_FALSE(rep.weak_ok) << "declared d_k below deg f invalidates the weak tier";
  EXPECT_EQ(rep.tier, VerifyReport::Tier::kNone);
}

// A constraint that never touches the poly-lifted coordinate is unaffected by
// the bad box polynomial: its digit factors are identically zero.
TEST(StrongHypothesis, ZeroFactorsSkipCoordinatesTheConstraintAvoids) {
  Instance base = example1_instance(0);
  auto ring = base.ring();
  ZqPoly f(ZqRing{ring}, 4);
  for (int j = 1; j < 4; ++j) {
    Monomial m{std::vector<uint32_t>(4, 0)};
    m.e[static_cast<std::size_t>(j)] = 1;
    f.add_term(m, ring->one());
  }
  Instance inst(ring, base.box(), {{f, 2, std::nullopt}});
  VerifyReport rep = verify(inst);
  EXPECT_TRUE(rep.strong.strong_ok);
  EXPECT_EQ(rep.tier, VerifyReport::Tier::kStrong);
  EXPECT_FALSE(rep.box_check.ok) << "the box itself still fails the weak cap";
  // Integer model: a_2 + a_3 + a_4 = 0 mod 4 with a_j in {0,1}, a_1 free.
  EXPECT_EQ(rep.count, 2);
  EXPECT_EQ(rep.ord_p, std::optional<long long>(1));
  EXPECT_EQ(rep.hbound, 1);
  EXPECT_TRUE(rep.holds);
}

TEST(Verify, VacuousInstanceHoldsTrivially) {
  auto ring = make_ring(3, 1, 2);
  ZqPoly f(ZqRing{ring}, 1);
  f.add_term(mono({2}), ring->one());
  f.add_term(mono({0}), ring->one());
  Instance inst(ring, BoxSpec::teichmuller(ring, 1), {{f, 2, std::nullopt}});
  VerifyReport rep = verify(inst);
  EXPECT_EQ(rep.count, 0);
  EXPECT_TRUE(rep.vacuous);
  EXPECT_EQ(rep.ord_p, std::nullopt);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.tier, VerifyReport::Tier::kStrong);
}

TEST(Verify, EmptySystemCountsTheWholeBox) {
  auto ring = make_ring(2, 2, 2);
  Instance inst(ring, BoxSpec::teichmuller(ring, 2), {});
  VerifyReport rep = verify(inst);
  EXPECT_EQ(rep.count, 16);
  EXPECT_EQ(rep.count_reduced, 16);
  EXPECT_EQ(rep.bound, 0);
  EXPECT_EQ(rep.tier, VerifyReport::Tier::kStrong);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.vanishing_constraints.empty());
}

TEST(Verify, VanishingConstraintIsExcludedFromTheBound) {
  auto ring = make_ring(3, 1, 2);
  // f = 3x vanishes mod 3, so at m_k = 1 it constrains nothing; g at m_k = 2
  // keeps the instance at the ring's full precision.
  ZqPoly f(ZqRing{ring}, 2);
  f.add_term(mono({1, 0}), ring->from_int(3));
  ZqPoly g = linear_sum(ring, 2);
  Instance inst(ring, BoxSpec::teichmuller(ring, 2),
                {{f, 1, std::nullopt}, {g, 2, std::nullopt}});
  VerifyReport rep = verify(inst);
  ASSERT_EQ(rep.vanishing_constraints.size(), 1u);
  EXPECT_EQ(rep.vanishing_constraints[0], 0);
  EXPECT_EQ(rep.bound, bound_main(3, 2, {{1, 2}}));
  EXPECT_EQ(rep.count, 3) << "tau(a) + tau(b) = 0 mod 9 forces {0,0},{1,8},{8,1}";
}

TEST(Verify, WorkerCountDoesNotChangeTheResult) {
  CountOptions serial, parallel;
  parallel.workers = 4;
  VerifyReport a = verify(table1_instance({4, 4, 4, 4, 4}), serial);
  VerifyReport b = verify(table1_instance({4, 4, 4, 4, 4}), parallel);
  EXPECT_EQ(a.count, b.count);
  EXPECT_EQ(a.count_reduced, b.count_reduced);
  EXPECT_EQ(a.count, 1206);
}

TEST(OracleSuite, SmallRunIsCleanAndDeterministic) {
  OracleSuiteReport a = run_oracle_suite(42, 25);
  EXPECT_TRUE(a.ok()) << (a.failures.empty() ? "" : a.failures[0].line);
  EXPECT_EQ(a.total, 25);
  EXPECT_EQ(a.tier_strong + a.tier_weak + a.tier_none, a.total);
  OracleSuiteReport b = run_oracle_suite(42, 25);
  EXPECT_EQ(a.tier_strong, b.tier_strong);
  EXPECT_EQ(a.tier_none, b.tier_none);
  EXPECT_EQ(a.bound_checked, b.bound_checked);
  EXPECT_EQ(a.vacuous, b.vacuous);
  EXPECT_EQ(a.axkatz, b.axkatz);
}

}  // namespace
}  // namespace wittcount
