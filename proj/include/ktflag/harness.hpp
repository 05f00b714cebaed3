#pragma once

// Verification sweeps over finite instance sets, and table emission.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ktflag/gkm.hpp"
#include "ktflag/positivity.hpp"
#include "ktflag/projective.hpp"
#include "ktflag/roots.hpp"
#include "ktflag/serialize.hpp"

namespace ktflag {

struct SuiteConfig {
  std::string type = "A2";
  SimpleSubset parabolic;
  unsigned jobs = 1;
  std::uint64_t cap = kDefaultNodeCap;
};

struct Failure {
  std::string instance;
  std::string value;  // offending Laurent polynomial
  std::string detail;
  std::string repro;  // single-instance CLI invocation
};

struct SuiteReport {
  std::string name;
  std::size_t instances = 0, pass = 0, fail = 0, unknown = 0;
  std::vector<Failure> failures;  // fail and unknown outcomes
  double seconds = 0;

  bool ok() const { return fail == 0 && unknown == 0 && instances == pass; }

  std::string summary() const {
    std::ostringstream os;
    os << name << ": " << instances << " instances, " << pass << " pass, " << fail << " fail, " << unknown << " unknown";
    return os.str();
  }

  json to_json() const {
    json f = json::array();
    for (const auto& x : failures) f.push_back({{"instance", x.instance}, {"value", x.value}, {"detail", x.detail}, {"repro", x.repro}});
    return {{"suite", name}, {"instances", instances}, {"pass", pass}, {"fail", fail}, {"unknown", unknown}, {"failures", f}, {"seconds", seconds}};
  }
};

/// Worker count: explicit value if nonzero, else KTFLAG_JOBS, else 1.
inline unsigned resolve_jobs(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("KTFLAG_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

enum class Outcome { Pass, Fail, Unknown };

struct InstanceResult {
  Outcome outcome = Outcome::Pass;
  Failure failure;
};

/// Runs tasks 0..n−1 on `jobs` workers and concatenates their results in
/// task order, so the report does not depend on scheduling.
inline std::vector<InstanceResult> run_tasks(std::size_t n, unsigned jobs, const std::function<std::vector<InstanceResult>(std::size_t)>& task) {
  std::vector<std::vector<InstanceResult>> parts(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        parts[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<InstanceResult> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

inline SuiteReport make_report(std::string name, const std::vector<InstanceResult>& results, double seconds) {
  SuiteReport r;
  r.name = std::move(name);
  r.instances = results.size();
  for (const auto& x : results) {
    if (x.outcome == Outcome::Pass) {
      ++r.pass;
    } else {
      (x.outcome == Outcome::Fail ? r.fail : r.unknown) += 1;
      r.failures.push_back(x.failure);
    }
  }
  r.seconds = seconds;
  return r;
}

namespace detail {

inline double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string parabolic_flag(SimpleSubset s) { return s.empty() ? "" : " --parabolic " + s.str(); }

/// Accumulates the checks of one instance; the first failing check wins.
struct Checker {
  InstanceResult result;

  void cone(const ConeCertifier& cc, const LaurentPoly& f, ConeSign sign, std::uint64_t cap, const std::string& what) {
    if (result.outcome != Outcome::Pass) return;
    ConeResult r = cc.certify(f, sign, cap);
    if (r.verdict == Verdict::Member) return;
    result.outcome = r.verdict == Verdict::NotMember ? Outcome::Fail : Outcome::Unknown;
    result.failure.value = f.str();
    result.failure.detail = what + " (" + cone_sign_name(sign) + "): " + r.reason;
  }

  void equal(const LaurentPoly& a, const LaurentPoly& b, const std::string& what) {
    if (result.outcome != Outcome::Pass || a == b) return;
    result.outcome = Outcome::Fail;
    result.failure.value = (a - b).str();
    result.failure.detail = what + ": " + a.str() + " != " + b.str();
  }

  void truth(bool ok, const LaurentPoly& f, const std::string& what) {
    if (result.outcome != Outcome::Pass || ok) return;
    result.outcome = Outcome::Fail;
    result.failure.value = f.str();
    result.failure.detail = what;
  }

  InstanceResult finish(std::string instance, std::string repro) {
    if (result.outcome != Outcome::Pass) {
      result.failure.instance = std::move(instance);
      result.failure.repro = std::move(repro);
    }
    return std::move(result);
  }
};

inline LaurentPoly signed_poly(int parity, const LaurentPoly& f) {
  return LaurentPoly::constant(f.rank(), sign_pow(parity)) * f;
}

}  // namespace detail

/// (−1)^{ℓ(u)+ℓ(v)+ℓ(w)} p^w_{u,v}(P) ∈ ℤ₊[e^{−β}−1] for all (u,v,w) ∈ (W^P)³.
inline SuiteReport verify_gk(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto rs = RootSystem::build(cfg.type);
  auto X = FlagVariety::create(rs, cfg.parabolic);
  ConeCertifier cc(rs);
  const std::size_t n = X->num_points();
  auto results = run_tasks(n * n, resolve_jobs(cfg.jobs), [&](std::size_t t) {
    WeylElem u = X->point(t / n), v = X->point(t % n);
    auto p = X->structure_constants(u, v, Family::P);
    std::vector<InstanceResult> out;
    for (std::size_t w = 0; w < n; ++w) {
      detail::Checker ck;
      ck.cone(cc, detail::signed_poly(rs->length(u) + rs->length(v) + X->length(w), p[w]), ConeSign::NegativeRoots, cfg.cap,
              "sign-twisted p");
      std::string inst = "u=" + rs->word_str(u) + " v=" + rs->word_str(v) + " w=" + rs->word_str(X->point(w));
      out.push_back(ck.finish(inst, "ktflag_cli instance --type " + cfg.type + detail::parabolic_flag(cfg.parabolic) +
                                        " --family p --u " + rs->word_str(u) + " --v " + rs->word_str(v) + " --w " +
                                        rs->word_str(X->point(w))));
    }
    return out;
  });
  return make_report("gk " + cfg.type + (cfg.parabolic.empty() ? "" : " S={" + cfg.parabolic.str() + "}"), results, detail::since(t0));
}

/// Structure-sheaf positivity: sign-twisted c in ℤ₊[e^{−β}−1], c(P) = c(B),
/// (−1)^{dim+ℓ(u)+ℓ(v)+ℓ(w)} b in ℤ₊[e^{β}−1]; on the full flag also
/// d = (−1)^{ℓ(u)+ℓ(v)+ℓ(w)}·*c and d ∈ ℤ₊[e^{β}−1].
inline SuiteReport verify_gr(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto rs = RootSystem::build(cfg.type);
  auto X = FlagVariety::create(rs, cfg.parabolic);
  const FlagVariety& full = X->full_flag();
  ConeCertifier cc(rs);
  const std::size_t n = X->num_points();
  const int dim = X->dimension();
  auto results = run_tasks(n * n, resolve_jobs(cfg.jobs), [&](std::size_t t) {
    WeylElem u = X->point(t / n), v = X->point(t % n);
    auto c = X->structure_constants(u, v, Family::C);
    auto b = X->structure_constants(u, v, Family::B);
    std::optional<ExpansionCoeffs> cb, d;
    if (!X->is_full()) cb = full.structure_constants(u, v, Family::C);
    if (X->is_full()) d = X->structure_constants(u, v, Family::D);
    std::vector<InstanceResult> out;
    for (std::size_t w = 0; w < n; ++w) {
      WeylElem ww = X->point(w);
      int par = rs->length(u) + rs->length(v) + rs->length(ww);
      detail::Checker ck;
      ck.cone(cc, detail::signed_poly(par, c[w]), ConeSign::NegativeRoots, cfg.cap, "sign-twisted c");
      if (cb) ck.equal(c[w], (*cb)[full.index_of(ww)], "c(P) = c(B)");
      ck.cone(cc, detail::signed_poly(dim + par, b[w]), ConeSign::PositiveRoots, cfg.cap, "sign-twisted b");
      if (d) {
        ck.equal((*d)[w], detail::signed_poly(par, star(c[w])), "d = sign * star(c)");
        ck.cone(cc, (*d)[w], ConeSign::PositiveRoots, cfg.cap, "d");
      }
      std::string inst = "u=" + rs->word_str(u) + " v=" + rs->word_str(v) + " w=" + rs->word_str(ww);
      out.push_back(ck.finish(inst, "ktflag_cli instance --type " + cfg.type + detail::parabolic_flag(cfg.parabolic) +
                                        " --family c --u " + rs->word_str(u) + " --v " + rs->word_str(v) + " --w " + rs->word_str(ww)));
    }
    return out;
  });
  return make_report("gr " + cfg.type + (cfg.parabolic.empty() ? "" : " S={" + cfg.parabolic.str() + "}"), results, detail::since(t0));
}

/// Translated Schubert classes: (−1)^{ℓ(w)+ℓ(u)} f^v_{w,u} ∈ ℤ₊[e^{−β}−1] for
/// all v, w, u (recursion and localization agree on the full flag), and the
/// opposite classes (−1)^{ℓ(w)+dim−ℓ(u)} e_{w,u} ∈ ℤ₊[e^{−β}−1].
inline SuiteReport verify_translation(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto rs = RootSystem::build(cfg.type);
  auto X = FlagVariety::create(rs, cfg.parabolic);
  ConeCertifier cc(rs);
  const std::size_t n = X->num_points();
  const std::size_t nw = rs->order();
  const int dim = X->dimension();
  const std::string base = "ktflag_cli instance --type " + cfg.type + detail::parabolic_flag(cfg.parabolic);
  // tasks: (v ∈ W, w ∈ W^P) translated classes, then w ∈ W^P opposite classes
  auto results = run_tasks(nw * n + n, resolve_jobs(cfg.jobs), [&](std::size_t t) {
    std::vector<InstanceResult> out;
    if (t < nw * n) {
      WeylElem v{static_cast<std::uint32_t>(t / n)};
      WeylElem w = X->point(t % n);
      auto f = X->translated_coeffs(v, w);
      std::optional<ExpansionCoeffs> fr;
      if (X->is_full()) fr = X->translated_coeffs_recursive(v, w);
      for (std::size_t u = 0; u < n; ++u) {
        detail::Checker ck;
        if (fr) ck.equal(f[u], (*fr)[u], "recursion = localization");
        ck.cone(cc, detail::signed_poly(rs->length(w) + X->length(u), f[u]), ConeSign::NegativeRoots, cfg.cap, "sign-twisted f");
        std::string inst = "f v=" + rs->word_str(v) + " w=" + rs->word_str(w) + " u=" + rs->word_str(X->point(u));
        out.push_back(ck.finish(inst, base + " --family f --v " + rs->word_str(v) + " --w " + rs->word_str(w) + " --u " +
                                          rs->word_str(X->point(u))));
      }
    } else {
      WeylElem w = X->point(t - nw * n);
      auto e = X->expand(X->schubert(w, Variant::Opposite), Basis::OrdinaryO);
      for (std::size_t u = 0; u < n; ++u) {
        detail::Checker ck;
        ck.cone(cc, detail::signed_poly(rs->length(w) + dim - X->length(u), e[u]), ConeSign::NegativeRoots, cfg.cap,
                "sign-twisted e");
        std::string inst = "e w=" + rs->word_str(w) + " u=" + rs->word_str(X->point(u));
        out.push_back(ck.finish(inst, base + " --family e --w " + rs->word_str(w) + " --u " + rs->word_str(X->point(u))));
      }
    }
    return out;
  });
  return make_report("translation " + cfg.type + (cfg.parabolic.empty() ? "" : " S={" + cfg.parabolic.str() + "}"), results,
                     detail::since(t0));
}

/// Richardson varieties Y = X_w ∩ X^v, v ≤ w, full flag: χ(O_Y) = 1 and
/// (−1)^{codim Y + codim X_u} a^Y_u ∈ ℤ₊[e^{−β}−1] with
/// codim Y = ℓ(w_o) − ℓ(w) + ℓ(v). One instance per Y.
inline SuiteReport verify_richardson(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto rs = RootSystem::build(cfg.type);
  auto X = FlagVariety::create(rs);
  ConeCertifier cc(rs);
  const std::size_t n = X->num_points();
  const int dim = X->dimension();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (X->leq(v, w)) pairs.emplace_back(v, w);
  auto results = run_tasks(pairs.size(), resolve_jobs(cfg.jobs), [&](std::size_t t) {
    auto [vi, wi] = pairs[t];
    WeylElem v = X->point(vi), w = X->point(wi);
    GKMClass y = X->richardson_class(v, w);
    auto a = X->expand(y, Basis::OrdinaryO);
    const int codim_y = dim - rs->length(w) + rs->length(v);
    detail::Checker ck;
    ck.equal(X->euler_char(y), LaurentPoly::constant(rs->rank(), 1), "chi of the Richardson variety");
    for (std::size_t u = 0; u < n; ++u)
      ck.cone(cc, detail::signed_poly(codim_y + dim - X->length(u), a[u]), ConeSign::NegativeRoots, cfg.cap,
              "sign-twisted a at u=" + rs->word_str(X->point(u)));
    return std::vector<InstanceResult>{ck.finish("v=" + rs->word_str(v) + " w=" + rs->word_str(w),
                                                 "ktflag_cli instance --type " + cfg.type + " --family richardson --v " +
                                                     rs->word_str(v) + " --w " + rs->word_str(w))};
  });
  return make_report("richardson " + cfg.type, results, detail::since(t0));
}

/// For all u, w ∈ W and S ⊆ simple indices, full flag:
///   Σ_{v∈W_S} p^w_{u,v} = e^{−ρ_S} χ([O_{X_w}] ξ^u [L(−ρ_S)]), ρ_S = Σ_{i∉S} ω_i,
///   (−1)^{ℓ(w)+ℓ(u)} Σ_{v∈W_S} p^w_{u,v} ∈ Σ_{β∈Q⁺} ℤ₊e^{−β};
/// for S = ∅ also (−1)^{ℓ(w)+ℓ(u)} p^w_{u,e} ∈ ℤ₊[e^{−β}−1], and for S = {i}
/// also (−1)^{ℓ(u)+ℓ(w)+1} p^w_{u,s_i} ∈ ℤ₊[e^{−β}−1].
inline SuiteReport verify_psum(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto rs = RootSystem::build(cfg.type);
  auto X = FlagVariety::create(rs);
  ConeCertifier cc(rs);
  const std::size_t n = X->num_points();
  const auto subsets = all_subsets(rs->rank());
  auto results = run_tasks(n, resolve_jobs(cfg.jobs), [&](std::size_t ui) {
    WeylElem u = X->point(ui);
    std::vector<ExpansionCoeffs> row;  // p^·_{u,v} for all v
    for (std::size_t v = 0; v < n; ++v) row.push_back(X->structure_constants(u, X->point(v), Family::P));
    std::vector<InstanceResult> out;
    for (std::size_t wi = 0; wi < n; ++wi) {
      WeylElem w = X->point(wi);
      const int par = rs->length(w) + rs->length(u);
      for (auto s : subsets) {
        detail::Checker ck;
        LaurentPoly sum(rs->rank());
        for (auto v : rs->parabolic_subgroup(s)) sum += row[X->index_of(v)][wi];
        Weight rs_s = rs->rho_complement(s);
        LaurentPoly rhs = X->euler_char(X->schubert(w, Variant::Ordinary) * X->xi(u) * X->line_bundle(-rs_s)).scaled_shift(-rs_s);
        ck.equal(sum, rhs, "W_S-sum = localized Euler characteristic");
        LaurentPoly twisted = detail::signed_poly(par, sum);
        ck.truth(monomial_cone_member(twisted, *rs), twisted, "sign-twisted W_S-sum is not in the monomial cone");
        if (s.empty()) ck.cone(cc, twisted, ConeSign::NegativeRoots, cfg.cap, "sign-twisted p at v=e");
        if (s.indices().size() == 1) {
          WeylElem si = rs->simple(s.indices()[0]);
          ck.cone(cc, detail::signed_poly(par + 1, row[X->index_of(si)][wi]), ConeSign::NegativeRoots, cfg.cap,
                  "sign-twisted p at v=" + rs->word_str(si));
        }
        std::string inst = "u=" + rs->word_str(u) + " w=" + rs->word_str(w) + " S={" + s.str() + "}";
        out.push_back(ck.finish(inst, "ktflag_cli instance --type " + cfg.type + " --family p --u " + rs->word_str(u) + " --w " +
                                          rs->word_str(w)));
      }
    }
    return out;
  });
  return make_report("psum " + cfg.type, results, detail::since(t0));
}

/// ℙⁿ, all (u,v,w) ∈ [n]³: p̃, r̃, q̃ ∈ ℤ₊[e^{−β}−1] and
/// (−1)^{n+u+v+w} b^w_{u,v} ∈ ℤ₊[e^{β}−1].
inline SuiteReport verify_pn(int n, unsigned jobs = 0, std::uint64_t cap = kDefaultNodeCap) {
  auto t0 = std::chrono::steady_clock::now();
  auto X = pn_space(n);
  ConeCertifier cc(X->roots_ptr());
  const std::size_t m = static_cast<std::size_t>(n + 1);
  auto results = run_tasks(m * m * m, resolve_jobs(jobs), [&](std::size_t t) {
    PnIndex idx{n, static_cast<int>(t / (m * m)), static_cast<int>(t / m % m), static_cast<int>(t % m)};
    detail::Checker ck;
    ck.cone(cc, pn_p_tilde_closed(idx, pn_epsilon(n)), ConeSign::NegativeRoots, cap, "p-tilde");
    ck.cone(cc, pn_r_tilde_closed(idx, pn_epsilon(n)), ConeSign::NegativeRoots, cap, "r-tilde");
    ck.cone(cc, pn_q_tilde(idx, *X), ConeSign::NegativeRoots, cap, "q-tilde");
    ck.cone(cc, detail::signed_poly(n + idx.u + idx.v + idx.w, pn_b(idx)), ConeSign::PositiveRoots, cap, "sign-twisted b");
    std::string inst = "n=" + std::to_string(n) + " u=" + std::to_string(idx.u) + " v=" + std::to_string(idx.v) +
                       " w=" + std::to_string(idx.w);
    return std::vector<InstanceResult>{ck.finish(inst, "ktflag_cli pn --n " + std::to_string(n) + " --family p --form closed --out csv")};
  });
  return make_report("pn " + std::to_string(n), results, detail::since(t0));
}

// ---- tables ----

enum class TableFormat { Csv, Json };

struct TableConfig {
  std::string type = "A2";
  SimpleSubset parabolic;
  Family family = Family::P;
  TableFormat format = TableFormat::Csv;
};

/// All |W^P|³ structure constants of one family, rows ordered by (u, v, w)
/// in fixed-point order. Coefficients use x_i = e^{α_i}.
inline std::string emit_table(const TableConfig& cfg) {
  auto rs = RootSystem::build(cfg.type);
  auto X = FlagVariety::create(rs, cfg.parabolic);
  const std::size_t n = X->num_points();
  std::ostringstream os;
  json entries = json::array();
  if (cfg.format == TableFormat::Csv) os << "u,v,w,coefficient\n";
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      auto k = X->structure_constants(X->point(u), X->point(v), cfg.family);
      for (std::size_t w = 0; w < n; ++w) {
        if (cfg.format == TableFormat::Csv) {
          os << rs->word_str(X->point(u)) << ',' << rs->word_str(X->point(v)) << ',' << rs->word_str(X->point(w)) << ','
             << render_x(k[w], *rs) << '\n';
        } else {
          entries.push_back({{"u", word_json(*rs, X->point(u))},
                             {"v", word_json(*rs, X->point(v))},
                             {"w", word_json(*rs, X->point(w))},
                             {"coef", to_json(k[w])}});
        }
      }
    }
  if (cfg.format == TableFormat::Json) {
    json p = json::array();
    for (auto i : cfg.parabolic.indices()) p.push_back(static_cast<int>(i) + 1);
    json doc = {{"type", cfg.type}, {"parabolic", p}, {"family", family_name(cfg.family)}, {"entries", entries}};
    os << doc.dump(1) << '\n';
  }
  return os.str();
}

enum class PnFamily { P, B, R, Q };
enum class PnForm { Closed, Recurrence };

/// ℙⁿ table over all (u,v,w) ∈ [n]³ with columns n,u,v,w,coefficient;
/// coefficients use y_{ij} = e^{ε_i − ε_j}. The q family is
/// χ(X_w ∩ X^u, ξ^v), by localization regardless of the form.
inline std::string emit_pn_table(int n, PnFamily fam, PnForm form, TableFormat format) {
  auto rs = RootSystem::build("A" + std::to_string(n));
  FlagVarietyPtr X;
  if (fam == PnFamily::Q) X = pn_space(n);
  std::ostringstream os;
  json entries = json::array();
  if (format == TableFormat::Csv) os << "n,u,v,w,coefficient\n";
  for (int u = 0; u <= n; ++u)
    for (int v = 0; v <= n; ++v)
      for (int w = 0; w <= n; ++w) {
        PnIndex idx{n, u, v, w};
        LaurentPoly c(rs->rank());
        const bool rec = form == PnForm::Recurrence;
        switch (fam) {
          case PnFamily::P: c = rec ? pn_p_recur(idx) : pn_p_closed(idx); break;
          case PnFamily::B: c = pn_b(idx, rec); break;
          case PnFamily::R: c = rec ? pn_r_recur(idx) : pn_r_closed(idx); break;
          case PnFamily::Q: c = detail::signed_poly(u + v + w, pn_q_tilde(idx, *X)); break;
        }
        if (format == TableFormat::Csv) {
          os << n << ',' << u << ',' << v << ',' << w << ',' << render_y(c, *rs) << '\n';
        } else {
          entries.push_back({{"n", n}, {"u", u}, {"v", v}, {"w", w}, {"coef", to_json(c)}});
        }
      }
  if (format == TableFormat::Json) os << entries.dump(1) << '\n';
  return os.str();
}

}  // namespace ktflag
