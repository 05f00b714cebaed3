#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ktflag.hpp"

using namespace ktflag;

namespace {

struct VerifyOpts {
  std::string suite;
  std::string type = "A2";
  std::string parabolic;
  unsigned jobs = 0;
  std::uint64_t cap = kDefaultNodeCap;
  int n = 0;
  bool json_out = false;
};

struct PnOpts {
  int n = 2;
  std::string family = "p";
  std::string form = "closed";
  std::string out = "csv";
};

struct TableOpts {
  std::string type = "A2";
  std::string parabolic;
  std::string family = "p";
  std::string out;
  std::string format = "csv";
};

struct InstanceOpts {
  std::string type = "A2";
  std::string parabolic;
  std::string family = "p";
  std::string u = "e", v = "e", w;
  std::uint64_t cap = kDefaultNodeCap;
};

Family parse_family(const std::string& f) {
  static const std::map<std::string, Family> m{{"p", Family::P}, {"b", Family::B}, {"c", Family::C}, {"d", Family::D}};
  auto it = m.find(f);
  if (it == m.end()) throw DomainError("unknown family '" + f + "'");
  return it->second;
}

// Sign exponent and cone used when certifying one coefficient of the family.
struct ConeSpec {
  int parity;
  ConeSign sign;
};

int run_verify(const VerifyOpts& o) {
  SuiteReport r;
  if (o.suite == "pn") {
    if (o.n < 1) throw DomainError("verify pn needs --n");
    r = verify_pn(o.n, o.jobs, o.cap);
  } else {
    SuiteConfig cfg;
    cfg.type = o.type;
    cfg.parabolic = SimpleSubset::parse(o.parabolic, RootSystem::build(o.type)->rank());
    cfg.jobs = o.jobs;
    cfg.cap = o.cap;
    if (o.suite == "gk") r = verify_gk(cfg);
    else if (o.suite == "gr") r = verify_gr(cfg);
    else if (o.suite == "translation") r = verify_translation(cfg);
    else if (o.suite == "richardson") r = verify_richardson(cfg);
    else r = verify_psum(cfg);
  }
  if (o.json_out) {
    std::cout << r.to_json().dump(2) << '\n';
  } else {
    std::cout << r.summary() << '\n';
    for (const auto& f : r.failures)
      std::cout << "  " << f.instance << ": " << f.detail << "\n    value: " << f.value << "\n    repro: " << f.repro << '\n';
  }
  return r.ok() ? 0 : 1;
}

int run_pn(const PnOpts& o) {
  static const std::map<std::string, PnFamily> fam{{"p", PnFamily::P}, {"b", PnFamily::B}, {"r", PnFamily::R}, {"q", PnFamily::Q}};
  std::cout << emit_pn_table(o.n, fam.at(o.family), o.form == "recur" ? PnForm::Recurrence : PnForm::Closed,
                             o.out == "json" ? TableFormat::Json : TableFormat::Csv);
  return 0;
}

int run_tables(const TableOpts& o) {
  TableConfig cfg;
  cfg.type = o.type;
  cfg.parabolic = SimpleSubset::parse(o.parabolic, RootSystem::build(o.type)->rank());
  cfg.family = parse_family(o.family);
  cfg.format = o.format == "json" ? TableFormat::Json : TableFormat::Csv;
  std::string text = emit_table(cfg);
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error("cannot open " + o.out);
    f << text;
  }
  return 0;
}

// One coefficient with its sign-twisted cone verdict.
json certify_entry(const ConeCertifier& cc, const LaurentPoly& value, ConeSpec spec, std::uint64_t cap, bool& ok) {
  LaurentPoly twisted = LaurentPoly::constant(value.rank(), sign_pow(spec.parity)) * value;
  ConeResult r = cc.certify(twisted, spec.sign, cap);
  ok = ok && r.verdict == Verdict::Member;
  return {{"value", to_json(value)},
          {"twisted", to_json(twisted)},
          {"cone", cone_sign_name(spec.sign)},
          {"certificate", to_json(r)}};
}

int run_instance(const InstanceOpts& o) {
  auto rs = RootSystem::build(o.type);
  auto X = FlagVariety::create(rs, SimpleSubset::parse(o.parabolic, rs->rank()));
  ConeCertifier cc(rs);
  WeylElem u = rs->parse_word(o.u), v = rs->parse_word(o.v);
  const int dim = X->dimension();
  bool ok = true;
  json out = json::array();
  auto targets = [&](auto&& fn) {
    for (std::size_t i = 0; i < X->num_points(); ++i)
      if (o.w.empty() || X->point(i) == rs->parse_word(o.w)) fn(i);
  };
  if (o.family == "f" || o.family == "e") {
    WeylElem w = rs->parse_word(o.w.empty() ? "e" : o.w);
    auto k = o.family == "f" ? X->translated_coeffs(v, w) : X->expand(X->schubert(w, Variant::Opposite), Basis::OrdinaryO);
    for (std::size_t i = 0; i < X->num_points(); ++i) {
      if (o.u != "e" && X->point(i) != u) continue;
      int par = rs->length(w) + (o.family == "f" ? X->length(i) : dim - X->length(i));
      json e = certify_entry(cc, k[i], {par, ConeSign::NegativeRoots}, o.cap, ok);
      e["u"] = rs->word_str(X->point(i));
      out.push_back(e);
    }
  } else if (o.family == "richardson") {
    WeylElem w = rs->parse_word(o.w.empty() ? "e" : o.w);
    auto a = X->expand(X->richardson_class(v, w), Basis::OrdinaryO);
    const int codim = dim - rs->length(w) + rs->length(v);
    for (std::size_t i = 0; i < X->num_points(); ++i) {
      json e = certify_entry(cc, a[i], {codim + dim - X->length(i), ConeSign::NegativeRoots}, o.cap, ok);
      e["u"] = rs->word_str(X->point(i));
      out.push_back(e);
    }
  } else {
    Family fam = parse_family(o.family);
    auto k = X->structure_constants(u, v, fam);
    targets([&](std::size_t i) {
      int par = rs->length(u) + rs->length(v) + rs->length(X->point(i));
      ConeSpec spec{par, ConeSign::NegativeRoots};
      if (fam == Family::B) spec = {dim + par, ConeSign::PositiveRoots};
      if (fam == Family::D) spec = {0, ConeSign::PositiveRoots};
      json e = certify_entry(cc, k[i], spec, o.cap, ok);
      e["w"] = rs->word_str(X->point(i));
      out.push_back(e);
    });
  }
  std::cout << out.dump(2) << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant K-theory structure constants of flag varieties"};
  app.require_subcommand(1);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Run a positivity sweep; exit 0 iff every instance is certified");
  verify->add_option("suite", vo.suite)->required()->check(CLI::IsMember({"gk", "gr", "translation", "richardson", "psum", "pn"}));
  verify->add_option("--type", vo.type, "Root system tag (A1..A6, A1xA1, B2, G2)");
  verify->add_option("--parabolic", vo.parabolic, "Simple roots of the Levi, e.g. 1,3");
  verify->add_option("--jobs", vo.jobs, "Worker threads (default: KTFLAG_JOBS or 1)");
  verify->add_option("--cap", vo.cap, "Search node cap per instance");
  verify->add_option("--n", vo.n, "Projective dimension for the pn suite");
  verify->add_flag("--json", vo.json_out, "Print the report as JSON");

  PnOpts po;
  auto* pn = app.add_subcommand("pn", "Structure-constant tables of projective space");
  pn->add_option("--n", po.n)->check(CLI::Range(1, 6));
  pn->add_option("--family", po.family)->check(CLI::IsMember({"p", "b", "r", "q"}));
  pn->add_option("--form", po.form)->check(CLI::IsMember({"closed", "recur"}));
  pn->add_option("--out", po.out)->check(CLI::IsMember({"csv", "json"}));

  TableOpts to;
  auto* tables = app.add_subcommand("tables", "Structure-constant tables of G/P");
  tables->add_option("--type", to.type);
  tables->add_option("--parabolic", to.parabolic);
  tables->add_option("--family", to.family)->check(CLI::IsMember({"p", "b", "c", "d"}));
  tables->add_option("--out", to.out, "Output path, stdout if omitted");
  tables->add_option("--format", to.format)->check(CLI::IsMember({"csv", "json"}));

  InstanceOpts io;
  auto* inst = app.add_subcommand("instance", "Compute and certify a single instance");
  inst->add_option("--type", io.type);
  inst->add_option("--parabolic", io.parabolic);
  inst->add_option("--family", io.family)->check(CLI::IsMember({"p", "b", "c", "d", "f", "e", "richardson"}));
  inst->add_option("--u", io.u);
  inst->add_option("--v", io.v);
  inst->add_option("--w", io.w);
  inst->add_option("--cap", io.cap);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*verify) return run_verify(vo);
    if (*pn) return run_pn(po);
    if (*tables) return run_tables(to);
    return run_instance(io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
