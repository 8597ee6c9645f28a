#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sflab/dinat.hpp"
#include "sflab/error.hpp"
#include "sflab/json_io.hpp"
#include "sflab/param.hpp"
#include "sflab/suite.hpp"
#include "sflab/typing.hpp"

using json = nlohmann::json;
using namespace sflab;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInconclusive = 3 };

void emit(const json& j) { std::cout << j.dump() << "\n"; }

int tri_exit(Tri t) {
  if (t == Tri::True) return kOk;
  return t == Tri::False ? kNegative : kInconclusive;
}

int verdict_exit(const SampleVerdict& v) {
  switch (v.verdict) {
    case SampleVerdict::Kind::Pass: return kOk;
    case SampleVerdict::Kind::Refuted: return kNegative;
    case SampleVerdict::Kind::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

std::string read_source(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Syntax, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Reduction parse_reduction(const std::string& s) {
  if (s == "beta") return Reduction::Beta;
  if (s == "eta") return Reduction::Eta;
  if (s == "betaeta") return Reduction::BetaEta;
  if (s == "wh") return Reduction::WeakHead;
  throw Error(ErrorCode::Syntax, "unknown reduction: " + s);
}

Context parse_context(const std::vector<std::string>& decls) {
  Context ctx;
  for (const std::string& d : decls) {
    auto colon = d.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::Syntax, "expected x:type, got " + d);
    std::string x = d.substr(0, colon);
    x.erase(0, x.find_first_not_of(' '));
    x.erase(x.find_last_not_of(' ') + 1);
    ctx[x] = parse_type(d.substr(colon + 1));
  }
  return ctx;
}

json classification_json(const Ty& t) {
  TypeClassification c = classify(t);
  return {{"type", render_type(t)},      {"simple", c.simple},
          {"pi", c.pi},                  {"sigma0", c.sigma0},
          {"sigma", c.sigma},            {"forall_plus2", c.forall_plus2},
          {"forall_minus2", c.forall_minus2}, {"proper", c.proper},
          {"forall_plus", c.forall_plus}, {"forall_minus", c.forall_minus},
          {"forall_trivial", c.forall_trivial}};
}

json check_json(const DerivationCheck& c) {
  json j = {{"ok", c.ok}};
  if (!c.ok) {
    j["rule"] = c.rule;
    j["path"] = c.path;
    j["message"] = c.message;
  }
  return j;
}

json terms_json(const std::vector<Term>& ts) {
  json a = json::array();
  for (const Term& t : ts) a.push_back(render(t));
  return a;
}

json verdict_json(const SampleVerdict& v) {
  json j = {{"samples", v.samples},
            {"unknown", v.unknown},
            {"verdict", sample_verdict_name(v.verdict)}};
  if (v.sample_id) j["sample_id"] = *v.sample_id;
  if (!v.witness.empty()) j["witness"] = json::parse(v.witness);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sflab: closure semantics, dinaturality and parametricity workbench"};
  app.require_subcommand(1);
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t sn_fuel = kDefaultSnFuel;
  app.add_option("--fuel", fuel, "reduction steps per normalization")->capture_default_str();
  app.add_option("--sn-fuel", sn_fuel, "explored nodes for strong normalization")
      ->capture_default_str();

  std::string term_text, type_text, other_text;
  std::function<int()> action;

  // ---- terms
  auto* parse = app.add_subcommand("parse", "parse and render a term");
  parse->add_option("term", term_text)->required();
  parse->callback([&] {
    action = [&] {
      Term t = parse_term(term_text);
      std::vector<std::string> fv;
      for (const auto& x : free_names(t)) fv.push_back(x);
      emit({{"term", render(t)}, {"size", t.size()}, {"free", fv}, {"closed", is_closed(t)},
            {"beta_normal", t.beta_normal()}});
      return kOk;
    };
  });

  std::string reduction = "beta", strategy = "lo";
  auto* normalize_cmd = app.add_subcommand("normalize", "normal form under a reduction");
  normalize_cmd->add_option("term", term_text)->required();
  normalize_cmd->add_option("--reduction", reduction, "beta|eta|betaeta|wh")->capture_default_str();
  normalize_cmd->add_option("--strategy", strategy, "lo (leftmost outermost) | ri")
      ->capture_default_str();
  normalize_cmd->callback([&] {
    action = [&] {
      Term t = parse_term(term_text);
      Strategy st = strategy == "ri" ? Strategy::RightmostInnermost : Strategy::LeftmostOutermost;
      NormalizeOutcome o = normalize(t, parse_reduction(reduction), fuel, st);
      json j = {{"term", render(t)}, {"reduction", reduction}, {"steps", o.steps}};
      j["normal_form"] = o.result ? json(render(*o.result)) : json(nullptr);
      j["exhausted"] = !o.result;
      emit(j);
      return o.result ? kOk : kInconclusive;
    };
  });

  auto* sn = app.add_subcommand("sn", "strong normalization");
  sn->add_option("term", term_text)->required();
  sn->callback([&] {
    action = [&] {
      Term t = parse_term(term_text);
      SnVerdict v = is_strongly_normalizing(t, sn_fuel);
      const char* status = v.status == SnVerdict::Status::Yes  ? "yes"
                           : v.status == SnVerdict::Status::No ? "no"
                                                               : "unknown";
      json j = {{"term", render(t)}, {"sn", status}, {"explored", v.explored}};
      if (!v.cycle.empty()) j["cycle"] = terms_json(v.cycle);
      emit(j);
      if (v.status == SnVerdict::Status::Yes) return kOk;
      return v.status == SnVerdict::Status::No ? kNegative : kInconclusive;
    };
  });

  // ---- types
  auto* type = app.add_subcommand("type", "type classification and translations");
  type->require_subcommand(1);
  auto* classify_cmd = type->add_subcommand("classify", "membership in the type classes");
  classify_cmd->add_option("type", type_text)->required();
  classify_cmd->callback([&] {
    action = [&] {
      emit(classification_json(parse_type(type_text)));
      return kOk;
    };
  });
  auto* skeleton_cmd = type->add_subcommand("skeleton", "quantifier-free skeleton");
  skeleton_cmd->add_option("type", type_text)->required();
  skeleton_cmd->callback([&] {
    action = [&] {
      Ty t = parse_type(type_text);
      emit({{"type", render_type(t)}, {"skeleton", render_type(skeleton(t))}});
      return kOk;
    };
  });
  std::string sign = "plus";
  auto* translate_cmd = type->add_subcommand("translate", "positive or negative translation");
  translate_cmd->add_option("type", type_text)->required();
  translate_cmd->add_option("--sign", sign, "plus|minus")->capture_default_str();
  translate_cmd->callback([&] {
    action = [&] {
      Ty t = parse_type(type_text);
      if (sign != "plus" && sign != "minus") throw Error(ErrorCode::Syntax, "sign is plus or minus");
      Ty r = sign == "plus" ? translate_plus(t) : translate_minus(t);
      emit({{"type", render_type(t)}, {"sign", sign}, {"translation", render_type(r)}});
      return kOk;
    };
  });

  std::string id_form = "plus";
  auto* idsigma = app.add_subcommand("idsigma", "identity term of a type and its derivation");
  idsigma->add_option("type", type_text)->required();
  idsigma->add_option("--form", id_form, "plus (sigma -> sigma+), minus, trivial")
      ->capture_default_str();
  idsigma->callback([&] {
    action = [&] {
      Ty t = parse_type(type_text);
      Derivation d = id_form == "minus"     ? derive_id_minus(t)
                     : id_form == "trivial" ? derive_id_trivial(t)
                                            : derive_id_plus(t);
      DerivationCheck c = check_derivation(d);
      emit({{"type", render_type(t)},
            {"id", render(id_term(t))},
            {"judgement", render(d.concl.term) + " : " + render_type(d.concl.ty)},
            {"check", check_json(c)},
            {"derivation", json::parse(derivation_to_json(d))}});
      return c.ok ? kOk : kNegative;
    };
  });

  // ---- typing
  bool positive = false, simple = false, emit_derivation = false;
  std::vector<std::string> ctx_decls;
  auto* typecheck = app.add_subcommand("typecheck", "decide a typing judgement");
  typecheck->add_option("term", term_text)->required();
  typecheck->add_option("type", type_text)->required();
  typecheck->add_flag("--positive", positive, "positive-type checker (no forall elimination)");
  typecheck->add_flag("--simple", simple, "simple types only");
  typecheck->add_option("--ctx", ctx_decls, "declaration x:type, repeatable");
  typecheck->add_flag("--derivation", emit_derivation, "include the derivation");
  typecheck->callback([&] {
    action = [&] {
      Term m = parse_term(term_text);
      Ty t = parse_type(type_text);
      Context ctx = parse_context(ctx_decls);
      auto d = simple ? check_simple(ctx, m, t) : check_positive(ctx, m, t);
      json j = {{"term", render(m)}, {"type", render_type(t)}, {"typable", d.has_value()},
                {"checker", simple ? "simple" : "positive"}};
      if (d && emit_derivation) j["derivation"] = json::parse(derivation_to_json(*d));
      emit(j);
      return d ? kOk : kNegative;
    };
  });

  std::size_t eta_bound = 3;
  auto* etaretype = app.add_subcommand("etaretype", "search eta-variants typable at a type");
  etaretype->add_option("term", term_text)->required();
  etaretype->add_option("type", type_text)->required();
  etaretype->add_option("--bound", eta_bound)->capture_default_str();
  etaretype->callback([&] {
    action = [&] {
      Term m = parse_term(term_text);
      Ty t = parse_type(type_text);
      auto r = eta_retype(m, t, eta_bound);
      json j = {{"term", render(m)}, {"type", render_type(t)}, {"bound", eta_bound}};
      if (r) {
        j["found"] = render(r->term);
        j["distance"] = r->distance;
      } else {
        j["found"] = nullptr;
      }
      emit(j);
      return r ? kOk : kInconclusive;
    };
  });

  std::string file;
  auto* derivation = app.add_subcommand("derivation", "derivation files");
  derivation->require_subcommand(1);
  auto* dcheck = derivation->add_subcommand("check", "validate a derivation (JSON, '-' for stdin)");
  dcheck->add_option("file", file)->required();
  dcheck->callback([&] {
    action = [&] {
      Derivation d = derivation_from_json(read_source(file));
      DerivationCheck c = check_derivation(d);
      json j = check_json(c);
      j["judgement"] = render(d.concl.term) + " : " + render_type(d.concl.ty);
      j["size"] = derivation_size(d);
      emit(j);
      return c.ok ? kOk : kNegative;
    };
  });

  auto* gammainf = app.add_subcommand("gammainf", "typability in the infinite context");
  gammainf->add_option("term", term_text)->required();
  gammainf->add_option("type", type_text)->required();
  gammainf->callback([&] {
    action = [&] {
      Term m = parse_term(term_text);
      Ty t = parse_type(type_text);
      json ctx = json::object();
      for (const auto& [x, ty] : gamma_inf_context(m)) ctx[x] = render_type(ty);
      bool ok = gamma_inf_check(m, t);
      emit({{"term", render(m)}, {"type", render_type(t)}, {"context", ctx}, {"typable", ok}});
      return ok ? kOk : kNegative;
    };
  });

  // ---- semantics
  std::string kind_text = "sbeta";
  std::vector<std::string> gens_text, extra_text;
  auto* closure = app.add_subcommand("closure", "closure of generators inside their reduct universe");
  closure->add_option("generators", gens_text)->required();
  closure->add_option("--kind", kind_text)->capture_default_str();
  closure->add_option("--extra", extra_text, "additional universe seeds");
  closure->callback([&] {
    action = [&] {
      Semantics k = parse_semantics(kind_text);
      std::vector<Term> gens, seeds;
      for (const auto& g : gens_text) gens.push_back(parse_term(g));
      seeds = gens;
      for (const auto& e : extra_text) seeds.push_back(parse_term(e));
      Universe u = build_universe(seeds, 4096, {k});
      TermSet s = close(gens, k, u);
      emit({{"kind", semantics_name(k)},
            {"generators", terms_json(gens)},
            {"universe", u.size()},
            {"closure", terms_json(s.terms())}});
      return kOk;
    };
  });

  std::string order_name = "sqsubseteq";
  auto* order = app.add_subcommand("order", "value and decomposition orders: is Q below P");
  order->add_option("q", term_text)->required();
  order->add_option("p", other_text)->required();
  order->add_option("--order", order_name, "sqsubseteq|triangle|triangle_star|cr2")
      ->capture_default_str();
  order->callback([&] {
    action = [&] {
      Term q = parse_term(term_text), p = parse_term(other_text);
      bool r = false;
      if (order_name == "sqsubseteq") {
        r = sqsubseteq(q, p, sn_fuel);
      } else if (order_name == "triangle") {
        r = triangle(q, p, sn_fuel);
      } else if (order_name == "cr2") {
        r = member_cr2(q, p, sn_fuel);
      } else if (order_name == "triangle_star") {
        Universe u = build_universe({q, p}, 4096, {Semantics::CR2});
        r = triangle_star(q, p, u).member;
      } else {
        throw Error(ErrorCode::Syntax, "unknown order: " + order_name);
      }
      emit({{"q", render(q)}, {"p", render(p)}, {"order", order_name}, {"below", r}});
      return r ? kOk : kNegative;
    };
  });

  std::vector<std::string> checks{"all"};
  std::uint32_t universe_size = 5;
  PropertyConfig pcfg;
  auto* props = app.add_subcommand("props", "closure property checks on the standard universe");
  props->add_option("--kind", kind_text)->capture_default_str();
  props->add_option("--check", checks, "axioms|fclosure|su|ss|wss|adequacy|wh|all")
      ->capture_default_str();
  props->add_option("--universe-size", universe_size)->capture_default_str();
  props->add_option("--samples", pcfg.samples)->capture_default_str();
  props->add_option("--seed", pcfg.seed)->capture_default_str();
  props->callback([&] {
    action = [&] {
      Semantics k = parse_semantics(kind_text);
      pcfg.fuel = fuel;
      Universe u = standard_universe(universe_size, {k});
      std::vector<std::string> run = checks;
      if (std::find(run.begin(), run.end(), "all") != run.end()) {
        run = {"axioms", "fclosure", "su", "ss", "wss", "adequacy", "wh"};
      }
      int code = kOk;
      for (const std::string& c : run) {
        PropertyReport r;
        if (c == "axioms") r = closure_axioms_check(k, u, pcfg);
        else if (c == "fclosure") r = f_closure_check(k, u, pcfg);
        else if (c == "su") r = su_check(k, u, pcfg);
        else if (c == "ss") r = ss_check(k, u, pcfg);
        else if (c == "wss") r = wss_check(k, u, pcfg);
        else if (c == "adequacy") r = adequacy_check(k, u, pcfg);
        else if (c == "wh") r = wh_expansion_check(k, u, pcfg);
        else throw Error(ErrorCode::Syntax, "unknown check: " + c);
        std::cout << report_json(r) << "\n";
        if (!r.passed()) code = kNegative;
      }
      return code;
    };
  });

  // ---- dinaturality and parametricity
  std::string gamma_text = "beta";
  auto* dinat = app.add_subcommand("dinat", "syntactic dinaturality of a closed term");
  dinat->add_option("term", term_text)->required();
  dinat->add_option("type", type_text)->required();
  dinat->add_option("--gamma", gamma_text, "beta|betaeta")->capture_default_str();
  dinat->callback([&] {
    action = [&] {
      Term m = parse_term(term_text);
      Ty t = parse_type(type_text);
      DinatResult r = dinat_check(m, t, parse_reduction(gamma_text), fuel);
      json j = {{"term", render(m)},
                {"type", render_type(t)},
                {"gamma", gamma_text},
                {"verdict", tri_name(r.verdict)},
                {"checked", render_type(r.checked)},
                {"lhs", render(r.lhs)},
                {"rhs", render(r.rhs)}};
      j["lhs_nf"] = r.lhs_nf ? json(render(*r.lhs_nf)) : json(nullptr);
      j["rhs_nf"] = r.rhs_nf ? json(render(*r.rhs_nf)) : json(nullptr);
      emit(j);
      return tri_exit(r.verdict);
    };
  });

  SampleConfig scfg;
  auto sampled = [&](CLI::App* cmd) {
    cmd->add_option("term", term_text)->required();
    cmd->add_option("type", type_text)->required();
    cmd->add_option("--kind", kind_text)->capture_default_str();
    cmd->add_option("--samples", scfg.samples)->capture_default_str();
    cmd->add_option("--seed", scfg.seed)->capture_default_str();
  };
  auto run_sampled = [&](bool relational) {
    Term m = parse_term(term_text);
    Ty t = parse_type(type_text);
    Semantics k = parse_semantics(kind_text);
    scfg.fuel = fuel;
    SampleVerdict v = relational ? parametric_sample_test(m, t, k, scfg)
                                 : realizer_sample_test(m, t, k, scfg);
    json j = {{"term", render(m)}, {"type", render_type(t)}, {"kind", semantics_name(k)}};
    j.update(verdict_json(v));
    emit(j);
    return verdict_exit(v);
  };
  auto* param = app.add_subcommand("param", "sampled relational parametricity");
  sampled(param);
  param->callback([&] { action = [&] { return run_sampled(true); }; });
  auto* realize = app.add_subcommand("realize", "sampled realizability");
  sampled(realize);
  realize->callback([&] { action = [&] { return run_sampled(false); }; });

  // ---- enumeration and the suite
  std::uint32_t max_size = 5;
  auto* enumerate = app.add_subcommand("enumerate", "closed beta-normal terms by size");
  enumerate->add_option("--max-size", max_size)->capture_default_str();
  enumerate->add_option("--typable", type_text, "keep terms typable at this type");
  enumerate->callback([&] {
    action = [&] {
      std::optional<Ty> t;
      if (!type_text.empty()) t = parse_type(type_text);
      for (const Term& m : enumerate_closed_beta_normal(max_size)) {
        if (t && !check_positive({}, m, *t)) continue;
        emit({{"term", render(m)}, {"size", m.size()}});
      }
      return kOk;
    };
  });

  SuiteConfig suite_cfg;
  std::string types_file, eta_kind_text = "sbetaeta", table_file;
  bool typable_only = false;
  auto* suite = app.add_subcommand("suite", "typability / dinaturality / parametricity / realizability");
  suite->add_option("--max-size", suite_cfg.max_term_size)->capture_default_str();
  suite->add_option("--types", types_file, "file with one type per line");
  suite->add_option("--gamma", gamma_text, "dinaturality on proper entries")->capture_default_str();
  suite->add_option("--kind", kind_text, "semantics for proper entries")->capture_default_str();
  suite->add_option("--eta-kind", eta_kind_text, "semantics for eta entries")->capture_default_str();
  suite->add_option("--samples", suite_cfg.samples)->capture_default_str();
  suite->add_option("--seed", suite_cfg.seed)->capture_default_str();
  suite->add_option("--eta-bound", suite_cfg.eta_bound)->capture_default_str();
  suite->add_flag("--typable-only", typable_only, "sample typable rows only");
  suite->add_option("--table", table_file, "write the summary table here instead of stderr");
  suite->callback([&] {
    action = [&] {
      if (!types_file.empty()) suite_cfg.types = parse_type_list(read_source(types_file));
      suite_cfg.gamma = parse_reduction(gamma_text);
      suite_cfg.kind = parse_semantics(kind_text);
      suite_cfg.eta_kind = parse_semantics(eta_kind_text);
      suite_cfg.fuel = fuel;
      suite_cfg.sample_all_rows = !typable_only;
      apply_seed_override(suite_cfg);
      SuiteReport r = run_suite(suite_cfg);
      std::cout << suite_rows_jsonl(r) << suite_matrix_json(r) << "\n"
                << suite_violations_json(r) << "\n";
      if (table_file.empty()) {
        std::cerr << suite_summary_table(r);
      } else {
        std::ofstream(table_file) << suite_summary_table(r);
      }
      return r.violations.empty() ? kOk : kNegative;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action();
  } catch (const Error& e) {
    emit({{"error", error_code_name(e.code())}, {"message", e.what()}});
    return e.code() == ErrorCode::FuelExhausted ? kInconclusive : kUsage;
  } catch (const std::exception& e) {
    emit({{"error", "internal"}, {"message", e.what()}});
    return kUsage;
  }
}
