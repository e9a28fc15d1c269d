#pragma once

// Command drivers behind the wittcount executable. Each cmd_* takes parsed
// arguments, writes its report to `out` (tables or line-delimited
// schema-versioned records), diagnostics and timings to `err`, and returns
// the process exit code. Outputs depend only on inputs and the seed, never
// on the worker count; anything timing-related goes to `err`.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wittcount/count.hpp"
#include "wittcount/instance_io.hpp"
#include "wittcount/repro.hpp"
#include "wittcount/suite.hpp"
#include "wittcount/witt.hpp"

namespace wittcount {
namespace cli {

// Exit codes, one per outcome class.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;     // mismatch in golden or property suites
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitOracle = 4;
constexpr int kExitBudget = 5;
constexpr int kExitRefutation = 6;

struct RunConfig {
  long long cap = 10000000;
  std::size_t budget = kDefaultWittBudget;
  long long interp_cap = kDefaultInterpolationCap;
  int workers = 1;
  uint64_t seed = 0;
  bool records = false;  // --format records
};

inline CountOptions to_count_options(const RunConfig& cfg) {
  CountOptions opts;
  opts.cap = cfg.cap;
  opts.workers = cfg.workers;
  opts.witt_budget = cfg.budget;
  opts.interp_cap = cfg.interp_cap;
  return opts;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const OracleMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitOracle;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const RefutationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRefutation;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

inline std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read instance file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline const char* tier_name(VerifyReport::Tier t) {
  switch (t) {
    case VerifyReport::Tier::kStrong:
      return "strong";
    case VerifyReport::Tier::kWeak:
      return "weak";
    default:
      return "none";
  }
}

inline std::string verdict_name(const VerifyReport& vr) {
  if (vr.vacuous) return "vacuous (ord = inf)";
  if (vr.tier != VerifyReport::Tier::kNone) return "bound-holds";
  return vr.holds ? "informational-holds" : "informational-violated";
}

inline json report_record(const Instance& inst, const VerifyReport& vr, uint64_t seed) {
  const ZqCtx& R = *inst.ring();
  json rec;
  rec["schema"] = "wittcount.report/1";
  rec["p"] = R.p();
  rec["h"] = R.h();
  rec["m"] = R.m();
  rec["n"] = inst.n();
  rec["box"] = box_kind_name(inst.box().kind());
  rec["seed"] = seed;
  json cons = json::array();
  for (const auto& c : inst.constraints()) {
    json cj;
    cj["m_k"] = c.m_k;
    cj["d_k"] = c.d_k;
    if (c.deg_mod) {
      cj["deg"] = *c.deg_mod;
    } else {
      cj["deg"] = nullptr;
    }
    cj["vanishes"] = c.vanishes;
    cons.push_back(std::move(cj));
  }
  rec["constraints"] = std::move(cons);
  rec["count"] = vr.count;
  rec["count_reduced"] = vr.count_reduced;
  if (vr.ord_p) {
    rec["ord_p"] = *vr.ord_p;
  } else {
    rec["ord_p"] = nullptr;
  }
  rec["bound"] = vr.bound;
  rec["h_bound"] = vr.hbound;
  rec["tier"] = tier_name(vr.tier);
  rec["verdict"] = verdict_name(vr);
  rec["vanishing"] = vr.vanishing_constraints;
  return rec;
}

inline void print_report_table(const Instance& inst, const VerifyReport& vr, std::ostream& out) {
  const ZqCtx& R = *inst.ring();
  out << "instance  p=" << R.p() << " h=" << R.h() << " q=" << R.q() << " m=" << R.m()
      << " n=" << inst.n() << " box=" << box_kind_name(inst.box().kind()) << "\n";
  for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
    const auto& c = inst.constraints()[k];
    out << "constraint " << k << ": m_k=" << c.m_k << " d_k=" << c.d_k << " deg="
        << (c.deg_mod ? std::to_string(*c.deg_mod) : std::string("-inf"))
        << (c.vanishes ? " (vanishes mod p^m_k)" : "") << "\n";
  }
  out << "count           " << vr.count << "\n";
  out << "count_reduced   " << vr.count_reduced << "\n";
  out << "ord_p           " << (vr.ord_p ? std::to_string(*vr.ord_p) : std::string("inf"))
      << "\n";
  out << "bound           " << vr.bound << "\n";
  out << "h_bound         " << vr.hbound << "\n";
  out << "tier            " << tier_name(vr.tier) << "\n";
  out << "verdict         " << verdict_name(vr) << "\n";
  if (!vr.vanishing_constraints.empty()) {
    out << "vanishing       ";
    for (std::size_t i = 0; i < vr.vanishing_constraints.size(); ++i) {
      out << (i ? "," : "") << vr.vanishing_constraints[i];
    }
    out << "\n";
  }
}

inline int cmd_count(const std::string& path, const RunConfig& cfg, std::ostream& out,
                     std::ostream& err) {
  return guarded(err, [&]() {
    Instance inst = parse_instance_text(read_input(path));
    VerifyReport vr = verify(inst, to_count_options(cfg));
    if (cfg.records) {
      out << report_record(inst, vr, cfg.seed).dump() << "\n";
    } else {
      print_report_table(inst, vr, out);
    }
    err << "timing: brute=" << vr.brute_ms << "ms reduce=" << vr.reduce_ms
        << "ms fq_count=" << vr.fq_count_ms << "ms\n";
    return kExitOk;
  });
}

inline int cmd_reduce(const std::string& path, const RunConfig& cfg, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&]() {
    Instance inst = parse_instance_text(read_input(path));
    FqSystem sys = reduce_to_fq(inst, to_count_options(cfg));
    const ZqCtx& R = *inst.ring();
    if (cfg.records) {
      for (const auto& e : sys.polys) {
        json rec;
        rec["schema"] = "wittcount.system/1";
        rec["p"] = R.p();
        rec["h"] = R.h();
        rec["m"] = R.m();
        rec["n"] = inst.n();
        rec["k"] = e.k;
        rec["level"] = e.level;
        rec["text"] = e.g.to_text();
        out << rec.dump() << "\n";
      }
    } else {
      out << "reduced system  p=" << R.p() << " h=" << R.h() << " q=" << R.q()
          << " m=" << R.m() << " n=" << inst.n() << " entries=" << sys.polys.size() << "\n";
      for (const auto& e : sys.polys) {
        out << "\nconstraint " << e.k << " level " << e.level << "\n";
        out << e.g.to_text();
      }
    }
    return kExitOk;
  });
}

inline int cmd_box_interp(const std::string& path, const RunConfig& cfg, std::ostream& out,
                          std::ostream& err) {
  return guarded(err, [&]() {
    Instance inst = parse_instance_text(read_input(path));
    BoxAlgebra alg = interpolate_box(inst.box(), cfg.interp_cap);
    const ZqCtx& R = *inst.ring();
    if (cfg.records) {
      for (int lev = 1; lev < R.m(); ++lev) {
        for (int j = 0; j < inst.n(); ++j) {
          json rec;
          rec["schema"] = "wittcount.box/1";
          rec["p"] = R.p();
          rec["h"] = R.h();
          rec["m"] = R.m();
          rec["n"] = inst.n();
          rec["kind"] = box_kind_name(inst.box().kind());
          rec["level"] = lev;
          rec["coord"] = j;
          rec["text"] = alg.at(lev, j).to_text();
          out << rec.dump() << "\n";
        }
      }
    } else {
      out << "box algebra  p=" << R.p() << " h=" << R.h() << " q=" << R.q() << " m=" << R.m()
          << " n=" << inst.n() << " kind=" << box_kind_name(inst.box().kind()) << "\n";
      for (int lev = 1; lev < R.m(); ++lev) {
        for (int j = 0; j < inst.n(); ++j) {
          out << "\ng[level=" << lev << "][coord=" << j << "]\n";
          out << alg.at(lev, j).to_text();
        }
      }
    }
    return kExitOk;
  });
}

struct WittPolysArgs {
  long long p = 2;
  int r = 2;
  int nmax = 1;
  bool substituted = false;
  bool mul = false;
};

inline int cmd_witt_polys(const WittPolysArgs& args, const RunConfig& cfg, std::ostream& out,
                          std::ostream& err) {
  return guarded(err, [&]() {
    if (args.mul) {
      std::vector<ZZPoly> polys = witt_prod_polys(args.p, args.nmax, cfg.budget);
      if (cfg.records) {
        for (int n = 0; n <= args.nmax; ++n) {
          json rec;
          rec["schema"] = "wittcount.polys/1";
          rec["name"] = "M_" + std::to_string(n);
          rec["p"] = args.p;
          rec["n"] = n;
          rec["text"] = polys[static_cast<std::size_t>(n)].to_text();
          out << rec.dump() << "\n";
        }
      } else {
        out << "# p=" << args.p << " nmax=" << args.nmax << " kind=mul\n";
        out << "# variables: x_i at index 2i, y_i at index 2i+1\n";
        for (int n = 0; n <= args.nmax; ++n) {
          out << "\nM_" << n << "\n" << polys[static_cast<std::size_t>(n)].to_text();
        }
      }
      return kExitOk;
    }
    std::vector<ZZPoly> polys = args.substituted
                                    ? substituted_sum_polys(args.p, args.r, args.nmax, cfg.budget)
                                    : witt_sum_polys(args.p, args.r, args.nmax, cfg.budget);
    const char* base = args.substituted ? "s" : "S";
    if (cfg.records) {
      for (int n = 0; n <= args.nmax; ++n) {
        json rec;
        rec["schema"] = "wittcount.polys/1";
        rec["name"] = std::string(base) + "_" + std::to_string(n) + "^(" +
                      std::to_string(args.r) + ")";
        rec["p"] = args.p;
        rec["r"] = args.r;
        rec["n"] = n;
        rec["text"] = polys[static_cast<std::size_t>(n)].to_text();
        out << rec.dump() << "\n";
      }
    } else {
      out << "# p=" << args.p << " r=" << args.r << " nmax=" << args.nmax
          << (args.substituted ? " kind=substituted-sum\n" : " kind=sum\n");
      out << "# variables: x_{i,j} (level i, summand j) at index i*r + j\n";
      for (int n = 0; n <= args.nmax; ++n) {
        out << "\n" << base << "_" << n << "^(" << args.r << ")\n"
            << polys[static_cast<std::size_t>(n)].to_text();
      }
    }
    return kExitOk;
  });
}

inline int cmd_repro(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    ReproReport rep = run_repro(to_count_options(cfg));
    int width = 0;
    for (const auto& c : rep.checks) width = std::max(width, static_cast<int>(c.name.size()));
    for (const auto& c : rep.checks) {
      if (cfg.records) {
        json rec;
        rec["schema"] = "wittcount.repro/1";
        rec["check"] = c.name;
        rec["expected"] = c.expected;
        rec["actual"] = c.actual;
        rec["ok"] = c.ok;
        if (!c.note.empty()) rec["note"] = c.note;
        out << rec.dump() << "\n";
      } else {
        out << (c.ok ? "ok      " : "MISMATCH") << "  " << c.name;
        for (int i = static_cast<int>(c.name.size()); i < width + 2; ++i) out << ' ';
        out << "expected=" << c.expected;
        if (!c.ok) out << " actual=" << c.actual;
        out << "\n";
        if (!c.note.empty()) out << "          note: " << c.note << "\n";
      }
    }
    if (!cfg.records) out << (rep.ok ? "result PASS\n" : "result FAIL\n");
    return rep.ok ? kExitOk : kExitFailure;
  });
}

struct PropSuiteArgs {
  int instances = 500;
};

inline int cmd_prop_suite(const PropSuiteArgs& args, const RunConfig& cfg, std::ostream& out,
                          std::ostream& err) {
  return guarded(err, [&]() {
    bool ok = true;
    std::vector<std::string> lines;
    // symbolic ghost identities on random integer vectors
    struct GhostCfg {
      long long p;
      int nmax;
    };
    for (const GhostCfg& gc : {GhostCfg{2, 3}, GhostCfg{3, 2}}) {
      bool add_ok = true;
      for (int r = 2; r <= 4; ++r) {
        GhostCheckReport g =
            check_ghost_additivity(gc.p, r, gc.nmax, 100, cfg.seed + static_cast<uint64_t>(r),
                                   cfg.budget);
        if (!g.ok) add_ok = false;
      }
      GhostCheckReport gm =
          check_ghost_multiplicativity(gc.p, gc.nmax, 100, cfg.seed + 99, cfg.budget);
      lines.push_back("ghost additivity p=" + std::to_string(gc.p) + " r=2..4 nmax=" +
                      std::to_string(gc.nmax) + ": " + (add_ok ? "ok" : "FAIL"));
      lines.push_back("ghost multiplicativity p=" + std::to_string(gc.p) + " nmax=" +
                      std::to_string(gc.nmax) + ": " + (gm.ok ? "ok" : "FAIL"));
      if (!add_ok || !gm.ok) ok = false;
    }
    // Teichmuller residue systems over prime fields
    bool prop14_ok = true;
    for (long long p : {2, 3, 5}) {
      for (int m : {2, 3}) {
        if (!check_prop14(p, m).ok) prop14_ok = false;
      }
    }
    lines.push_back(std::string("teichmuller residues p in {2,3,5} m in {2,3}: ") +
                    (prop14_ok ? "ok" : "FAIL"));
    if (!prop14_ok) ok = false;
    // digit roundtrips
    RoundtripReport rt = run_roundtrip_suite(cfg.seed);
    lines.push_back("roundtrip: rings=" + std::to_string(rt.rings) + " elements=" +
                    std::to_string(rt.elements) + " pairs=" + std::to_string(rt.pairs) +
                    " failures=" + std::to_string(rt.failures.size()));
    if (!rt.ok()) ok = false;
    // randomized oracle equivalence and divisibility bounds
    CountOptions opts = to_count_options(cfg);
    std::ostringstream records;
    OracleSuiteReport os = run_oracle_suite(
        cfg.seed, args.instances, opts, [&](int index, const Instance& inst, const VerifyReport& vr) {
          if (cfg.records) {
            json rec = report_record(inst, vr, cfg.seed);
            rec["index"] = index;
            records << rec.dump() << "\n";
          }
        });
    lines.push_back("oracle: total=" + std::to_string(os.total) + " strong=" +
                    std::to_string(os.tier_strong) + " weak=" + std::to_string(os.tier_weak) +
                    " none=" + std::to_string(os.tier_none) + " vacuous=" +
                    std::to_string(os.vacuous) + " bound_checked=" +
                    std::to_string(os.bound_checked) + " axkatz=" + std::to_string(os.axkatz) +
                    " failures=" + std::to_string(os.failures.size()));
    if (!os.ok()) ok = false;
    if (cfg.records) {
      json head;
      head["schema"] = "wittcount.suite/1";
      head["seed"] = cfg.seed;
      head["instances"] = args.instances;
      head["total"] = os.total;
      head["tier_strong"] = os.tier_strong;
      head["tier_weak"] = os.tier_weak;
      head["tier_none"] = os.tier_none;
      head["vacuous"] = os.vacuous;
      head["bound_checked"] = os.bound_checked;
      head["axkatz"] = os.axkatz;
      head["roundtrip_elements"] = rt.elements;
      head["roundtrip_pairs"] = rt.pairs;
      head["failures"] =
          static_cast<long long>(os.failures.size() + rt.failures.size());
      head["ok"] = ok;
      out << head.dump() << "\n";
      out << records.str();
    } else {
      out << "prop-suite seed=" << cfg.seed << " instances=" << args.instances << "\n";
      for (const auto& l : lines) out << l << "\n";
      out << (ok ? "result PASS\n" : "result FAIL\n");
    }
    for (const auto& f : rt.failures) err << "failure: " << f << "\n";
    for (const auto& f : os.failures) err << "failure: " << f.line << "\n";
    if (ok) return kExitOk;
    for (const auto& f : os.failures) {
      if (f.kind == FailureKind::kRefutation) return kExitRefutation;
    }
    for (const auto& f : os.failures) {
      if (f.kind == FailureKind::kOracle) return kExitOracle;
    }
    return kExitFailure;
  });
}

}  // namespace cli
}  // namespace wittcount
