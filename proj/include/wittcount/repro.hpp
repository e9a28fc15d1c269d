#pragma once

// Built-in reference instances with golden expected values: the p = 2
// four-variable box example, the q = 9 split-box table (six exponent rows),
// the Teichmuller-box baseline over Z_9, and the prime-field Teichmuller
// residue checks. run_repro() recomputes everything and compares.

#include <cstdint>
#include <string>
#include <vector>

#include "wittcount/count.hpp"
#include "wittcount/suite.hpp"

namespace wittcount {

// p=2, n=4, f = x1+x2+x3+x4 mod 4, box lifting a1 to a1 + (a1a2a3a4 + a)*2.
inline Instance example1_instance(int a) {
  auto ring = make_ring(2, 1, 2);
  FqRing fring{ring->field()};
  FqPoly g(fring, 4);
  g.add_term(Monomial{{1, 1, 1, 1}}, ring->field()->one());
  if (a % 2 != 0) g.add_term(Monomial{{0, 0, 0, 0}}, ring->field()->one());
  std::vector<std::vector<FqPoly>> levels{{g, FqPoly(fring, 4), FqPoly(fring, 4), FqPoly(fring, 4)}};
  BoxSpec box = BoxSpec::poly_defined(ring, 4, levels);
  ZqPoly f(ZqRing{ring}, 4);
  for (int j = 0; j < 4; ++j) {
    Monomial mono{{0, 0, 0, 0}};
    mono.e[static_cast<std::size_t>(j)] = 1;
    f.add_term(mono, ring->one());
  }
  return Instance(ring, std::move(box), {{std::move(f), 2, std::nullopt}});
}

// p=3, q=9, n=5, f = x1+...+x5 mod 9, split box lifting a_j to a_j + a_j^(u_j)*3.
inline Instance table1_instance(const std::vector<uint32_t>& u) {
  auto ring = make_ring(3, 2, 2);
  FqRing fring{ring->field()};
  std::vector<std::vector<FqPoly>> sigma;
  for (uint32_t uj : u) {
    FqPoly s(fring, 1);
    s.add_term(Monomial{{uj}}, ring->field()->one());
    sigma.push_back({std::move(s)});
  }
  BoxSpec box = BoxSpec::split(ring, 5, sigma);
  ZqPoly f(ZqRing{ring}, 5);
  for (int j = 0; j < 5; ++j) {
    Monomial mono{{0, 0, 0, 0, 0}};
    mono.e[static_cast<std::size_t>(j)] = 1;
    f.add_term(mono, ring->one());
  }
  return Instance(ring, std::move(box), {{std::move(f), 2, std::nullopt}});
}

// Same f over the Teichmuller box of Z_9 / 9.
inline Instance example2_baseline_instance() {
  auto ring = make_ring(3, 2, 2);
  BoxSpec box = BoxSpec::teichmuller(ring, 5);
  ZqPoly f(ZqRing{ring}, 5);
  for (int j = 0; j < 5; ++j) {
    Monomial mono{{0, 0, 0, 0, 0}};
    mono.e[static_cast<std::size_t>(j)] = 1;
    f.add_term(mono, ring->one());
  }
  return Instance(ring, std::move(box), {{std::move(f), 2, std::nullopt}});
}

// Same f, same box, but modulo p only (m = 1). The count is 9^4 = 3^8 and the
// Ax-Katz bound h*ceil((5-1)/1) = 8 is attained exactly. The reference example
// states ord_p(|V_0|) = 8 for the mod-p^2 baseline; that figure matches this
// mod-p count, while the mod-p^2 count is 1161 = 3^3 * 43 (ord 3, still >= 2
// as the bound requires). Both are asserted below.
inline Instance example2_modp_instance() {
  auto ring = make_ring(3, 2, 1);
  BoxSpec box = BoxSpec::teichmuller(ring, 5);
  ZqPoly f(ZqRing{ring}, 5);
  for (int j = 0; j < 5; ++j) {
    Monomial mono{{0, 0, 0, 0, 0}};
    mono.e[static_cast<std::size_t>(j)] = 1;
    f.add_term(mono, ring->one());
  }
  return Instance(ring, std::move(box), {{std::move(f), 1, std::nullopt}});
}

struct Table1Row {
  std::vector<uint32_t> u;
  std::vector<uint32_t> twisted;  // 3u reduced into [1, q-1]
  long long count;                // recomputed, confirmed by both counters
  long long ord;
  bool hypothesis_fails_bound;  // ord < h*bound expected
  long long reference_count;    // table cell as printed in the source data
  long long reference_ord;
};

// Row u=(6,6,6,6,6): the reference table prints 864 with ord 3. Direct box
// enumeration, the reduced F_9 system displayed alongside the table, and two
// independent recomputations with different F_9 moduli all give 846 with
// ord 2. Both values satisfy the bound ord >= 2, so no conclusion drawn from
// the table changes. The recomputed value is asserted; the reference cell is
// kept so the discrepancy stays visible in reports.
inline const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {{4, 4, 4, 4, 4}, {4, 4, 4, 4, 4}, 1206, 2, false, 1206, 2},
      {{5, 5, 5, 5, 5}, {7, 7, 7, 7, 7}, 2601, 2, false, 2601, 2},
      {{6, 6, 6, 6, 6}, {2, 2, 2, 2, 2}, 846, 2, false, 864, 3},
      {{7, 7, 7, 7, 7}, {5, 5, 5, 5, 5}, 1881, 2, false, 1881, 2},
      {{8, 8, 8, 8, 8}, {8, 8, 8, 8, 8}, 606, 1, true, 606, 1},
      {{4, 7, 2, 5, 8}, {4, 5, 6, 7, 8}, 660, 1, true, 660, 1},
  };
  return rows;
}

struct ReproCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool ok = false;
  std::string note;  // nonempty when the asserted value corrects a reference cell
};

struct ReproReport {
  std::vector<ReproCheck> checks;
  bool ok = true;
  void add(const std::string& name, const std::string& expected, const std::string& actual,
           const std::string& note = "") {
    bool match = expected == actual;
    checks.push_back({name, expected, actual, match, note});
    if (!match) ok = false;
  }
};

inline ReproReport run_repro(const CountOptions& opts = {}) {
  ReproReport rep;
  for (int a = 0; a <= 1; ++a) {
    VerifyReport vr = verify(example1_instance(a), opts);
    rep.add("example1 a=" + std::to_string(a) + " count", a == 0 ? "1" : "7",
            std::to_string(vr.count));
    if (a == 1) {
      rep.add("example1 a=1 hypothesis tier", "none",
              vr.tier == VerifyReport::Tier::kNone
                  ? "none"
                  : (vr.tier == VerifyReport::Tier::kWeak ? "weak" : "strong"));
      rep.add("example1 a=1 bound violated without hypothesis", "yes", vr.holds ? "no" : "yes");
    }
  }
  for (std::size_t r = 0; r < table1_rows().size(); ++r) {
    const Table1Row& row = table1_rows()[r];
    std::string tag = "table1 row " + std::to_string(r + 1);
    std::string twisted;
    for (std::size_t j = 0; j < row.u.size(); ++j) {
      long long e = 3LL * row.u[j];
      e = (e - 1) % 8 + 1;
      twisted += (j ? "," : "") + std::to_string(e);
    }
    std::string twisted_expected;
    for (std::size_t j = 0; j < row.twisted.size(); ++j) {
      twisted_expected += (j ? "," : "") + std::to_string(row.twisted[j]);
    }
    rep.add(tag + " twisted exponents", twisted_expected, twisted);
    VerifyReport vr = verify(table1_instance(row.u), opts);
    std::string note;
    if (row.reference_count != row.count || row.reference_ord != row.ord) {
      note = "reference table prints " + std::to_string(row.reference_count) + " (ord " +
             std::to_string(row.reference_ord) +
             "); recounted by both counters and by the displayed residue system";
    }
    rep.add(tag + " count", std::to_string(row.count), std::to_string(vr.count), note);
    rep.add(tag + " ord_p", std::to_string(row.ord),
            vr.ord_p ? std::to_string(*vr.ord_p) : "inf");
    if (row.hypothesis_fails_bound) {
      rep.add(tag + " hypothesis tier", "none",
              vr.tier == VerifyReport::Tier::kNone ? "none" : "held");
      rep.add(tag + " bound violated without hypothesis", "yes", vr.holds ? "no" : "yes");
    }
  }
  {
    VerifyReport vr = verify(example2_baseline_instance(), opts);
    rep.add("teichmuller baseline count", "1161", std::to_string(vr.count));
    rep.add("teichmuller baseline ord_p", "3", vr.ord_p ? std::to_string(*vr.ord_p) : "inf",
            "reference example states ord 8, which matches the mod-p count 3^8 below; "
            "the mod-p^2 count is 1161 = 3^3 * 43");
    rep.add("teichmuller baseline tier", "strong",
            vr.tier == VerifyReport::Tier::kStrong ? "strong" : "not-strong");
    rep.add("teichmuller baseline h*bound", "2", std::to_string(vr.hbound));
    rep.add("teichmuller baseline bound holds", "yes", vr.holds ? "yes" : "no");
    VerifyReport mp = verify(example2_modp_instance(), opts);
    rep.add("teichmuller baseline mod-p count", "6561", std::to_string(mp.count));
    rep.add("teichmuller baseline mod-p ord_p", "8",
            mp.ord_p ? std::to_string(*mp.ord_p) : "inf");
    rep.add("teichmuller baseline mod-p h*bound", "8", std::to_string(mp.hbound));
  }
  for (long long p : {2, 3, 5}) {
    for (int m : {2, 3}) {
      Prop14Report pr = check_prop14(p, m);
      rep.add("teichmuller residues p=" + std::to_string(p) + " m=" + std::to_string(m), "ok",
              pr.ok ? "ok" : "failed");
    }
  }
  return rep;
}

}  // namespace wittcount
