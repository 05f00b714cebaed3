#pragma once

// JSON and CSV forms of weights, Laurent polynomials, expansions and
// certificates.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ktflag/gkm.hpp"
#include "ktflag/lattice.hpp"
#include "ktflag/positivity.hpp"
#include "ktflag/roots.hpp"

namespace ktflag {

using json = nlohmann::json;

inline json to_json(const Weight& w) {
  json a = json::array();
  for (auto x : w.coords()) a.push_back(x);
  return a;
}

inline Weight weight_from_json(const json& j) {
  std::vector<int> c = j.get<std::vector<int>>();
  return Weight::from(c);
}

/// [{"w": [...], "c": n}, ...] in canonical term order.
inline json to_json(const LaurentPoly& f) {
  json a = json::array();
  for (const auto& t : f.terms()) a.push_back({{"w", to_json(t.w)}, {"c", t.c}});
  return a;
}

inline LaurentPoly laurent_from_json(const json& j, std::size_t rank) {
  std::vector<Term> terms;
  for (const auto& e : j) {
    Weight w = weight_from_json(e.at("w"));
    if (w.rank() != rank) throw RankMismatch("serialized weight has wrong rank");
    terms.push_back({w, e.at("c").get<Coeff>()});
  }
  return LaurentPoly::from_terms(rank, std::move(terms));
}

inline json word_json(const RootSystem& rs, WeylElem w) {
  json a = json::array();
  for (auto i : rs.word(w)) a.push_back(static_cast<int>(i) + 1);
  return a;
}

inline WeylElem word_from_json(const RootSystem& rs, const json& j) {
  std::vector<int> idx;
  for (const auto& x : j) idx.push_back(x.get<int>() - 1);
  return rs.from_word(idx);
}

/// [{"w": reduced word, "coef": LaurentPoly}, ...] over the nonzero entries.
inline json to_json(const ExpansionCoeffs& e) {
  json a = json::array();
  const auto& X = *e.space;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (!e.coef[i].is_zero()) a.push_back({{"w", word_json(X.roots(), X.point(i))}, {"coef", to_json(e.coef[i])}});
  return a;
}

inline ExpansionCoeffs expansion_from_json(const json& j, const FlagVariety& X) {
  ExpansionCoeffs e{&X, std::vector<LaurentPoly>(X.num_points(), LaurentPoly(X.rank()))};
  for (const auto& item : j) e.coef[X.index_of(word_from_json(X.roots(), item.at("w")))] = laurent_from_json(item.at("coef"), X.rank());
  return e;
}

inline json to_json(const Certificate& c) {
  json a = json::array();
  for (const auto& t : c.terms) {
    json ex = json::object();
    for (auto [b, n] : t.exps) ex[std::to_string(b)] = n;
    a.push_back({{"exps", ex}, {"coef", t.coef}});
  }
  return a;
}

inline Certificate certificate_from_json(const json& j, ConeSign sign) {
  Certificate c;
  c.sign = sign;
  for (const auto& item : j) {
    CertTerm t;
    for (const auto& [k, v] : item.at("exps").items()) t.exps[std::stoi(k)] = v.get<int>();
    t.coef = item.at("coef").get<Coeff>();
    c.terms.push_back(std::move(t));
  }
  return c;
}

/// Certificate array, {"member": false} or {"unknown": true, "nodes": N}.
inline json to_json(const ConeResult& r) {
  switch (r.verdict) {
    case Verdict::Member: return to_json(r.cert);
    case Verdict::NotMember: return {{"member", false}};
    case Verdict::Unknown: return {{"unknown", true}, {"nodes", r.nodes}};
  }
  return nullptr;
}

/// Coefficient string in x_i = e^{α_i}; weights must lie in the root lattice.
inline std::string render_x(const LaurentPoly& f, const RootSystem& rs) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    auto k = rs.root_coords(t.w);
    if (!k) throw DomainError("weight " + t.w.str() + " is not in the root lattice");
    std::string body;
    for (std::size_t j = 0; j < k->size(); ++j) {
      if ((*k)[j] == 0) continue;
      if (!body.empty()) body += "*";
      body += "x" + std::to_string(j + 1);
      if ((*k)[j] != 1) body += "^" + std::to_string((*k)[j]);
    }
    Coeff a = t.c < 0 ? -t.c : t.c;
    os << (first ? (t.c < 0 ? "-" : "") : (t.c < 0 ? " - " : " + "));
    if (body.empty()) {
      os << a;
    } else {
      if (a != 1) os << a << '*';
      os << body;
    }
    first = false;
  }
  return os.str();
}

}  // namespace ktflag
