#pragma once

// JSON instance files. Top level:
//   {"p":3, "h":2, "m":2, "n":5, "box":{...}, "polys":[...]}
// Box stanzas:
//   {"kind":"teichmuller"}
//   {"kind":"split", "digit_polys":[ per coord [ per level 1..m-1 [dense univariate coeffs] ]]}
//   {"kind":"poly", "g":[ per level 1..m-1 [ per coord [ {"coeff":c,"exponents":[..]} ... ] ]]}
//   {"kind":"enumerated", "points":[ [ per coord ring element ] ... ]}
// Constraints: {"m_k":2, "d_k":3, "terms":[{"coeff":c, "exponents":[e1..en]}]} with
// d_k optional. Field elements are an integer (prime subfield) or a list of h
// coordinates; ring elements additionally accept {"digits":[field elements]}.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wittcount/boxes.hpp"
#include "wittcount/common.hpp"
#include "wittcount/count.hpp"
#include "wittcount/ff.hpp"
#include "wittcount/zq.hpp"

namespace wittcount {

using json = nlohmann::json;

namespace detail {

inline long long require_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
  return j.get<long long>();
}

inline FqElem fq_from_json(const FieldCtx& f, const json& j, const std::string& what) {
  if (j.is_number_integer()) {
    long long v = j.get<long long>() % f.p();
    if (v < 0) v += f.p();
    return f.from_int(v);
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != f.h()) {
      throw ParseError(what + ": field element needs exactly h = " + std::to_string(f.h()) +
                       " coordinates");
    }
    FqElem e = f.zero();
    for (int i = 0; i < f.h(); ++i) {
      long long v = require_int(j[static_cast<std::size_t>(i)], what) % f.p();
      if (v < 0) v += f.p();
      e.c[static_cast<std::size_t>(i)] = static_cast<int32_t>(v);
    }
    return e;
  }
  throw ParseError(what + ": expected an integer or a coordinate list");
}

inline ZqElem zq_from_json(const ZqCtx& R, const json& j, const std::string& what) {
  if (j.is_number_integer()) {
    long long v = j.get<long long>() % R.pm();
    if (v < 0) v += R.pm();
    return R.from_int(v);
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != R.h()) {
      throw ParseError(what + ": ring element needs exactly h = " + std::to_string(R.h()) +
                       " coefficients");
    }
    ZqElem e = R.zero();
    for (int i = 0; i < R.h(); ++i) {
      long long v = require_int(j[static_cast<std::size_t>(i)], what) % R.pm();
      if (v < 0) v += R.pm();
      e.c[static_cast<std::size_t>(i)] = v;
    }
    return e;
  }
  if (j.is_object() && j.contains("digits")) {
    const json& dj = j["digits"];
    if (!dj.is_array() || static_cast<int>(dj.size()) > R.m()) {
      throw ParseError(what + ": digits must be a list of at most m field elements");
    }
    DigitVector dv;
    for (std::size_t i = 0; i < dj.size(); ++i) {
      dv.d.push_back(fq_from_json(*R.field(), dj[i], what + ".digits"));
    }
    while (static_cast<int>(dv.d.size()) < R.m()) dv.d.push_back(R.field()->zero());
    return R.from_digits(dv);
  }
  throw ParseError(what + ": expected an integer, coefficient list, or {\"digits\": [...]}");
}

inline Monomial exponents_from_json(int n, const json& j, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ParseError(what + ": exponents must list exactly n = " + std::to_string(n) +
                     " entries");
  }
  Monomial mono;
  for (int i = 0; i < n; ++i) {
    long long e = require_int(j[static_cast<std::size_t>(i)], what);
    if (e < 0) throw ParseError(what + ": exponents must be nonnegative");
    mono.e.push_back(static_cast<uint32_t>(e));
  }
  return mono;
}

inline FqPoly fq_poly_from_json(const FqRing& ring, int n, const json& j,
                                const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected a term list");
  FqPoly g(ring, n);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const json& tj = j[t];
    std::string here = what + "[" + std::to_string(t) + "]";
    if (!tj.is_object() || !tj.contains("coeff") || !tj.contains("exponents")) {
      throw ParseError(here + ": term needs \"coeff\" and \"exponents\"");
    }
    g.add_term(exponents_from_json(n, tj["exponents"], here),
               fq_from_json(*ring.f, tj["coeff"], here));
  }
  return g;
}

}  // namespace detail

inline Instance parse_instance_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance: expected a JSON object");
  for (const char* key : {"p", "h", "m", "n", "box", "polys"}) {
    if (!j.contains(key)) throw ParseError(std::string("instance: missing \"") + key + "\"");
  }
  long long p = detail::require_int(j["p"], "p");
  long long h = detail::require_int(j["h"], "h");
  long long m = detail::require_int(j["m"], "m");
  long long n = detail::require_int(j["n"], "n");
  if (n < 1 || n > 64) throw ParseError("n: expected 1 <= n <= 64");
  auto field = make_field(p, static_cast<int>(h));
  auto ring = make_ring(field, static_cast<int>(m));
  FqRing fring{field};

  const json& bj = j["box"];
  if (!bj.is_object() || !bj.contains("kind") || !bj["kind"].is_string()) {
    throw ParseError("box: expected an object with a \"kind\" string");
  }
  std::string kind = bj["kind"].get<std::string>();
  BoxSpec box = [&]() -> BoxSpec {
    if (kind == "teichmuller") return BoxSpec::teichmuller(ring, static_cast<int>(n));
    if (kind == "split") {
      if (!bj.contains("digit_polys") || !bj["digit_polys"].is_array() ||
          static_cast<long long>(bj["digit_polys"].size()) != n) {
        throw ParseError("box.digit_polys: expected one entry per coordinate");
      }
      std::vector<std::vector<FqPoly>> sigma;
      for (long long jc = 0; jc < n; ++jc) {
        const json& cj = bj["digit_polys"][static_cast<std::size_t>(jc)];
        if (!cj.is_array() || static_cast<long long>(cj.size()) != m - 1) {
          throw ParseError("box.digit_polys[" + std::to_string(jc) +
                           "]: expected m-1 univariate polynomials");
        }
        std::vector<FqPoly> per_level;
        for (long long lev = 0; lev + 1 < m; ++lev) {
          const json& pj = cj[static_cast<std::size_t>(lev)];
          if (!pj.is_array()) {
            throw ParseError("box.digit_polys: expected dense coefficient lists");
          }
          FqPoly g(fring, 1);
          for (std::size_t e = 0; e < pj.size(); ++e) {
            Monomial mono;
            mono.e.push_back(static_cast<uint32_t>(e));
            g.add_term(mono,
                       detail::fq_from_json(*field, pj[e],
                                            "box.digit_polys[" + std::to_string(jc) + "][" +
                                                std::to_string(lev) + "]"));
          }
          per_level.push_back(std::move(g));
        }
        sigma.push_back(std::move(per_level));
      }
      return BoxSpec::split(ring, static_cast<int>(n), sigma);
    }
    if (kind == "poly") {
      if (!bj.contains("g") || !bj["g"].is_array() ||
          static_cast<long long>(bj["g"].size()) != m - 1) {
        throw ParseError("box.g: expected one entry per level 1..m-1");
      }
      std::vector<std::vector<FqPoly>> g;
      for (long long lev = 0; lev + 1 < m; ++lev) {
        const json& lj = bj["g"][static_cast<std::size_t>(lev)];
        if (!lj.is_array() || static_cast<long long>(lj.size()) != n) {
          throw ParseError("box.g[" + std::to_string(lev) + "]: expected one entry per coordinate");
        }
        std::vector<FqPoly> per_coord;
        for (long long jc = 0; jc < n; ++jc) {
          per_coord.push_back(detail::fq_poly_from_json(
              fring, static_cast<int>(n), lj[static_cast<std::size_t>(jc)],
              "box.g[" + std::to_string(lev) + "][" + std::to_string(jc) + "]"));
        }
        g.push_back(std::move(per_coord));
      }
      return BoxSpec::poly_defined(ring, static_cast<int>(n), g);
    }
    if (kind == "enumerated") {
      if (!bj.contains("points") || !bj["points"].is_array()) {
        throw ParseError("box.points: expected a list of points");
      }
      std::vector<std::vector<ZqElem>> pts;
      for (std::size_t i = 0; i < bj["points"].size(); ++i) {
        const json& pj = bj["points"][i];
        if (!pj.is_array() || static_cast<long long>(pj.size()) != n) {
          throw ParseError("box.points[" + std::to_string(i) + "]: expected n coordinates");
        }
        std::vector<ZqElem> pt;
        for (long long jc = 0; jc < n; ++jc) {
          pt.push_back(detail::zq_from_json(*ring, pj[static_cast<std::size_t>(jc)],
                                            "box.points[" + std::to_string(i) + "]"));
        }
        pts.push_back(std::move(pt));
      }
      return BoxSpec::enumerated(ring, static_cast<int>(n), pts);
    }
    throw ParseError("box.kind: unknown kind \"" + kind + "\"");
  }();

  const json& pj = j["polys"];
  if (!pj.is_array()) throw ParseError("polys: expected a list (possibly empty)");
  std::vector<ConstraintInput> cons;
  for (std::size_t k = 0; k < pj.size(); ++k) {
    const json& cj = pj[k];
    std::string here = "polys[" + std::to_string(k) + "]";
    if (!cj.is_object() || !cj.contains("m_k") || !cj.contains("terms")) {
      throw ParseError(here + ": constraint needs \"m_k\" and \"terms\"");
    }
    int m_k = static_cast<int>(detail::require_int(cj["m_k"], here + ".m_k"));
    std::optional<long long> d_k;
    if (cj.contains("d_k")) d_k = detail::require_int(cj["d_k"], here + ".d_k");
    const json& terms = cj["terms"];
    if (!terms.is_array()) throw ParseError(here + ".terms: expected a term list");
    ZqPoly f(ZqRing{ring}, static_cast<int>(n));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const json& tj = terms[t];
      std::string th = here + ".terms[" + std::to_string(t) + "]";
      if (!tj.is_object() || !tj.contains("coeff") || !tj.contains("exponents")) {
        throw ParseError(th + ": term needs \"coeff\" and \"exponents\"");
      }
      f.add_term(detail::exponents_from_json(static_cast<int>(n), tj["exponents"], th),
                 detail::zq_from_json(*ring, tj["coeff"], th));
    }
    cons.push_back(ConstraintInput{std::move(f), m_k, d_k});
  }
  try {
    return Instance(ring, std::move(box), std::move(cons));
  } catch (const InvariantError& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

inline Instance parse_instance_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: invalid JSON: ") + e.what());
  }
  return parse_instance_json(j);
}

namespace detail {

inline json fq_to_json(const FieldCtx& f, const FqElem& e) {
  if (f.h() == 1) return json(e.c[0]);
  json out = json::array();
  for (int32_t v : e.c) out.push_back(v);
  return out;
}

inline json zq_to_json(const ZqCtx& R, const ZqElem& e) {
  bool scalar = true;
  for (int i = 1; i < R.h(); ++i) {
    if (e.c[static_cast<std::size_t>(i)] != 0) scalar = false;
  }
  if (scalar) return json(e.c[0]);
  json out = json::array();
  for (int64_t v : e.c) out.push_back(v);
  return out;
}

inline json fq_poly_to_json(const FieldCtx& f, const FqPoly& g) {
  json terms = json::array();
  for (const auto& [mono, coef] : g.terms()) {
    json t;
    t["coeff"] = fq_to_json(f, coef);
    t["exponents"] = mono.e;
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace detail

inline json instance_to_json(const Instance& inst) {
  const ZqCtx& R = *inst.ring();
  const FieldCtx& f = *R.field();
  json j;
  j["p"] = R.p();
  j["h"] = R.h();
  j["m"] = R.m();
  j["n"] = inst.n();
  json bj;
  switch (inst.box().kind()) {
    case BoxKind::kTeichmuller:
      bj["kind"] = "teichmuller";
      break;
    case BoxKind::kSplit: {
      bj["kind"] = "split";
      json coords = json::array();
      for (int jc = 0; jc < inst.n(); ++jc) {
        json levels = json::array();
        for (int lev = 1; lev < R.m(); ++lev) {
          const FqPoly& g = inst.box().split_polys()[static_cast<std::size_t>(jc)]
                                                    [static_cast<std::size_t>(lev - 1)];
          long long deg = g.total_degree().value_or(0);
          json dense = json::array();
          for (long long e = 0; e <= deg; ++e) {
            FqElem c = f.zero();
            for (const auto& [mono, coef] : g.terms()) {
              if (mono.e[0] == static_cast<uint32_t>(e)) c = coef;
            }
            dense.push_back(detail::fq_to_json(f, c));
          }
          levels.push_back(std::move(dense));
        }
        coords.push_back(std::move(levels));
      }
      bj["digit_polys"] = std::move(coords);
      break;
    }
    case BoxKind::kPolyDefined: {
      bj["kind"] = "poly";
      json levels = json::array();
      for (int lev = 1; lev < R.m(); ++lev) {
        json coords = json::array();
        for (int jc = 0; jc < inst.n(); ++jc) {
          coords.push_back(detail::fq_poly_to_json(
              f, inst.box().poly_g()[static_cast<std::size_t>(lev - 1)]
                                    [static_cast<std::size_t>(jc)]));
        }
        levels.push_back(std::move(coords));
      }
      bj["g"] = std::move(levels);
      break;
    }
    case BoxKind::kEnumerated: {
      bj["kind"] = "enumerated";
      json pts = json::array();
      for (const auto& pt : inst.box().points()) {
        json pj = json::array();
        for (const auto& y : pt) pj.push_back(detail::zq_to_json(R, y));
        pts.push_back(std::move(pj));
      }
      bj["points"] = std::move(pts);
      break;
    }
  }
  j["box"] = std::move(bj);
  json polys = json::array();
  for (const auto& c : inst.constraints()) {
    json cj;
    cj["m_k"] = c.m_k;
    if (c.d_declared) cj["d_k"] = c.d_k;
    json terms = json::array();
    for (const auto& [mono, coef] : c.f.terms()) {
      json t;
      t["coeff"] = detail::zq_to_json(R, coef);
      t["exponents"] = mono.e;
      terms.push_back(std::move(t));
    }
    cj["terms"] = std::move(terms);
    polys.push_back(std::move(cj));
  }
  j["polys"] = std::move(polys);
  return j;
}

}  // namespace wittcount
