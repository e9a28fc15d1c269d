#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "wittcount/instance_io.hpp"
#include "wittcount/repro.hpp"

namespace wittcount {
namespace {

Instance parse(const std::string& text) { return parse_instance_text(text); }

TEST(ParseInstance, MinimalTeichmullerBox) {
  Instance inst = parse(R"({
    "p": 3, "h": 1, "m": 2, "n": 2,
    "box": {"kind": "teichmuller"},
    "polys": []
  })");
  EXPECT_EQ(inst.ring()->p(), 3);
  EXPECT_EQ(inst.ring()->h(), 1);
  EXPECT_EQ(inst.ring()->m(), 2);
  EXPECT_EQ(inst.n(), 2);
  EXPECT_EQ(inst.box().kind(), BoxKind::kTeichmuller);
  EXPECT_TRUE(inst.constraints().empty());
  EXPECT_EQ(count_bruteforce(inst), 9);
}

TEST(ParseInstance, SplitBoxMatchesTheBuiltinTableRow) {
  Instance parsed = parse(R"({
    "p": 3, "h": 2, "m": 2, "n": 5,
    "box": {"kind": "split", "digit_polys": [
      [[0,0,0,0,1]],
      [[0,0,0,0,0,0,0,1]],
      [[0,0,1]],
      [[0,0,0,0,0,1]],
      [[0,0,0,0,0,0,0,0,1]]
    ]},
    "polys": [{"m_k": 2, "terms": [
      {"coeff": 1, "exponents": [1,0,0,0,0]},
      {"coeff": 1, "exponents": [0,1,0,0,0]},
      {"coeff": 1, "exponents": [0,0,1,0,0]},
      {"coeff": 1, "exponents": [0,0,0,1,0]},
      {"coeff": 1, "exponents": [0,0,0,0,1]}
    ]}]
  })");
  Instance builtin = table1_instance({4, 7, 2, 5, 8});
  FqSystem a = reduce_to_fq(parsed), b = reduce_to_fq(builtin);
  ASSERT_EQ(a.polys.size(), b.polys.size());
  for (std::size_t i = 0; i < a.polys.size(); ++i) {
    EXPECT_EQ(a.polys[i].k, b.polys[i].k);
    EXPECT_EQ(a.polys[i].level, b.polys[i].level);
    EXPECT_EQ(a.polys[i].g, b.polys[i].g);
  }
}

TEST(ParseInstance, PolyBoxMatchesTheBuiltinExample) {
  Instance parsed = parse(R"({
    "p": 2, "h": 1, "m": 2, "n": 4,
    "box": {"kind": "poly", "g": [[
      [{"coeff": 1, "exponents": [1,1,1,1]}, {"coeff": 1, "exponents": [0,0,0,0]}],
      [], [], []
    ]]},
    "polys": [{"m_k": 2, "terms": [
      {"coeff": 1, "exponents": [1,0,0,0]},
      {"coeff": 1, "exponents": [0,1,0,0]},
      {"coeff": 1, "exponents": [0,0,1,0]},
      {"coeff": 1, "exponents": [0,0,0,1]}
    ]}]
  })");
  Instance builtin = example1_instance(1);
  EXPECT_EQ(count_bruteforce(parsed), 7);
  ASSERT_EQ(parsed.constraints().size(), 1u);
  EXPECT_EQ(parsed.constraints()[0].f, builtin.constraints()[0].f);
  FqSystem a = reduce_to_fq(parsed), b = reduce_to_fq(builtin);
  ASSERT_EQ(a.polys.size(), b.polys.size());
  for (std::size_t i = 0; i < a.polys.size(); ++i) {
    EXPECT_EQ(a.polys[i].g, b.polys[i].g);
  }
}

TEST(ParseInstance, RingElementEncodingsAgree) {
  // 5 = tau(2) + 3*tau(2) in Z/9, so the digit form [2,2] names the same
  // point as the plain integer.
  const char* variants[] = {
      R"({"p":3,"h":1,"m":2,"n":1,
          "box":{"kind":"enumerated","points":[[0],[1],[5]]},"polys":[]})",
      R"({"p":3,"h":1,"m":2,"n":1,
          "box":{"kind":"enumerated","points":[[0],[1],[[5]]]},"polys":[]})",
      R"({"p":3,"h":1,"m":2,"n":1,
          "box":{"kind":"enumerated","points":[[0],[1],[{"digits":[2,2]}]]},"polys":[]})",
  };
  for (const char* text : variants) {
    Instance inst = parse(text);
    ASSERT_EQ(inst.box().points().size(), 3u);
    EXPECT_EQ(inst.box().points()[2][0], inst.ring()->from_int(5)) << text;
  }
}

TEST(ParseInstance, FieldElementCoordinateLists) {
  Instance a = parse(R"({
    "p": 3, "h": 2, "m": 2, "n": 1,
    "box": {"kind": "teichmuller"},
    "polys": [{"m_k": 2, "terms": [{"coeff": 2, "exponents": [1]}]}]
  })");
  Instance b = parse(R"({
    "p": 3, "h": 2, "m": 2, "n": 1,
    "box": {"kind": "teichmuller"},
    "polys": [{"m_k": 2, "terms": [{"coeff": [2, 0], "exponents": [1]}]}]
  })");
  EXPECT_EQ(a.constraints()[0].f, b.constraints()[0].f);
}

TEST(ParseInstance, DeclaredDegreeIsPreserved) {
  Instance inst = parse(R"({
    "p": 2, "h": 1, "m": 2, "n": 2,
    "box": {"kind": "teichmuller"},
    "polys": [{"m_k": 2, "d_k": 3, "terms": [{"coeff": 1, "exponents": [1,1]}]}]
  })");
  ASSERT_EQ(inst.constraints().size(), 1u);
  EXPECT_EQ(inst.constraints()[0].d_k, 3);
  EXPECT_TRUE(inst.constraints()[0].d_declared);
  EXPECT_EQ(inst.constraints()[0].deg_mod, std::optional<long long>(2));
}

TEST(RoundTrip, SerializationIsAnIdempotentBijection) {
  std::vector<Instance> cases;
  cases.push_back(example1_instance(1));
  cases.push_back(table1_instance({4, 7, 2, 5, 8}));
  cases.push_back(example2_baseline_instance());
  {
    // A full section of the reduction map: (x, y) -> (tau(x) + 2 tau(y), tau(y)).
    auto ring = make_ring(2, 2, 2);
    const FieldCtx& f4 = *ring->field();
    std::vector<std::vector<ZqElem>> pts;
    for (long long i = 0; i < 16; ++i) {
      ZqElem x = ring->teichmuller_lift(f4.element(i % 4));
      ZqElem y = ring->teichmuller_lift(f4.element(i / 4));
      ZqElem twisted = ring->add(x, ring->mul(ring->from_int(2), y));
      pts.push_back({twisted, y});
    }
    ZqPoly f(ZqRing{ring}, 2);
    f.add_term(Monomial{{1, 1}}, ring->from_int(3));
    cases.push_back(
        Instance(ring, BoxSpec::enumerated(ring, 2, pts), {{std::move(f), 2, 5}}));
  }
  for (const Instance& inst : cases) {
    json j = instance_to_json(inst);
    Instance back = parse_instance_json(j);
    EXPECT_EQ(instance_to_json(back), j);
    ASSERT_EQ(back.constraints().size(), inst.constraints().size());
    for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
      EXPECT_EQ(back.constraints()[k].f, inst.constraints()[k].f);
      EXPECT_EQ(back.constraints()[k].m_k, inst.constraints()[k].m_k);
      EXPECT_EQ(back.constraints()[k].d_k, inst.constraints()[k].d_k);
      EXPECT_EQ(back.constraints()[k].d_declared, inst.constraints()[k].d_declared);
    }
    EXPECT_EQ(back.box().kind(), inst.box().kind());
    if (inst.box().kind() == BoxKind::kEnumerated) {
      EXPECT_EQ(back.box().points(), inst.box().points());
    }
  }
}

TEST(RoundTrip, CountsSurviveSerialization) {
  Instance inst = example1_instance(0);
  Instance back = parse_instance_json(instance_to_json(inst));
  EXPECT_EQ(count_bruteforce(back), count_bruteforce(inst));
}

TEST(ParseErrors, StructuralProblemsRaiseParseError) {
  const char* bad[] = {
      "not json at all",
      "[1,2,3]",
      R"({"p":2,"h":1,"n":2,"box":{"kind":"teichmuller"},"polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":0,"box":{"kind":"teichmuller"},"polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":65,"box":{"kind":"teichmuller"},"polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"nope"},"polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":"teichmuller","polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"teichmuller"},"polys":{}})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"teichmuller"},
          "polys":[{"terms":[]}]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"teichmuller"},
          "polys":[{"m_k":1,"terms":[{"coeff":1,"exponents":[1]}]}]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"teichmuller"},
          "polys":[{"m_k":1,"terms":[{"coeff":1,"exponents":[1,-2]}]}]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"teichmuller"},
          "polys":[{"m_k":1,"terms":[{"exponents":[1,0]}]}]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"teichmuller"},
          "polys":[{"m_k":3,"terms":[{"coeff":1,"exponents":[1,0]}]}]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"split","digit_polys":[[[0,1]]]},
          "polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"split","digit_polys":[[[0,1]],[]]},
          "polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"poly","g":[[[],[]],[[],[]]]},
          "polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":2,"box":{"kind":"enumerated","points":[[1]]},
          "polys":[]})",
      R"({"p":2,"h":2,"m":2,"n":1,"box":{"kind":"enumerated","points":[[[1,2,3]]]},
          "polys":[]})",
      R"({"p":2,"h":1,"m":2,"n":1,"box":{"kind":"enumerated",
          "points":[[{"digits":[1,0,1]}]]},"polys":[]})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(parse(text), ParseError) << text;
  }
}

TEST(ParseErrors, DomainProblemsRaiseInvariantError) {
  // Parameter and box-content validation lives below the parser and keeps its
  // own error type.
  EXPECT_THROW(parse(R"({"p":4,"h":1,"m":2,"n":1,
                         "box":{"kind":"teichmuller"},"polys":[]})"),
               InvariantError);
  EXPECT_THROW(parse(R"({"p":2,"h":1,"m":2,"n":1,
                         "box":{"kind":"enumerated","points":[[0],[2]]},
                         "polys":[]})"),
               InvariantError)
      << "0 and 2 collide in the residue field";
}

}  // namespace
}  // namespace wittcount
