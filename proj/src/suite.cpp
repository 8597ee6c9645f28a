#include "sflab/suite.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sflab/dinat.hpp"
#include "sflab/error.hpp"
#include "sflab/typing.hpp"

namespace sflab {

using json = nlohmann::json;

std::vector<Ty> default_suite_types() {
  return {parse_type("forall X.X->X"), parse_type("forall Z.(Z->Z)->Z->Z"),
          parse_type("forall X.X->X->X"), parse_type("forall X.forall Y.X->Y->X"),
          parse_type("((forall Y.X)->X)->X->X")};
}

std::vector<Ty> parse_type_list(const std::string& text) {
  std::vector<Ty> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(parse_type(line.substr(b)));
  }
  return out;
}

void apply_seed_override(SuiteConfig& cfg) {
  if (const char* s = std::getenv("SFLAB_SEED")) cfg.seed = std::stoull(s);
}

namespace {

void evaluate(SuiteRow& row, const SuiteConfig& cfg) {
  const Term& m = row.term;
  if (row.proper) {
    row.typable = check_positive({}, m, row.type) ? Tri::True : Tri::False;
  } else if (check_positive_unchecked({}, m, row.type)) {
    row.typable = Tri::True;
  } else if (auto e = eta_retype(m, row.type, cfg.eta_bound)) {
    row.typable = Tri::True;
    row.eta_retyped = e->term;
  } else {
    row.typable = Tri::Unknown;
  }
  try {
    row.dinatural =
        dinat_check(m, row.type, row.proper ? cfg.gamma : Reduction::BetaEta, cfg.fuel).verdict;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FuelExhausted) throw;
    row.dinatural = Tri::Unknown;
  }
  if (cfg.sample_all_rows || row.typable == Tri::True) {
    SampleConfig sc;
    sc.samples = cfg.samples;
    sc.seed = cfg.seed;
    sc.fuel = cfg.fuel;
    const Semantics kind = row.proper ? cfg.kind : cfg.eta_kind;
    row.parametric = parametric_sample_test(m, row.type, kind, sc);
    row.realizer = realizer_sample_test(m, row.type, kind, sc);
  }

  using K = SampleVerdict::Kind;
  bool inconclusive = false;
  if (row.typable == Tri::True && row.dinatural == Tri::False) {
    row.reasons.push_back("typable but not dinatural");
  }
  if (row.typable == Tri::False && row.dinatural == Tri::True) {
    row.reasons.push_back("dinatural but not typable");
  }
  if (row.typable == Tri::Unknown && row.dinatural == Tri::True) inconclusive = true;
  if (row.dinatural == Tri::Unknown) inconclusive = true;
  if (row.typable == Tri::True) {
    if (row.parametric && row.parametric->verdict == K::Refuted) {
      row.reasons.push_back("typable but refuted by parametricity sampling");
    }
    if (row.realizer && row.realizer->verdict == K::Refuted) {
      row.reasons.push_back("typable but refuted by realizer sampling");
    }
  }
  if (!row.reasons.empty()) {
    row.status = "violation";
  } else {
    row.status = inconclusive ? "inconclusive" : "ok";
  }
}

json verdict_json(const std::optional<SampleVerdict>& v) {
  if (!v) return nullptr;
  json j;
  j["verdict"] = sample_verdict_name(v->verdict);
  j["samples"] = v->samples;
  j["unknown"] = v->unknown;
  if (v->sample_id) j["sample_id"] = *v->sample_id;
  if (!v->witness.empty()) j["witness"] = json::parse(v->witness);
  return j;
}

json row_json(const SuiteRow& r) {
  json j;
  j["term_index"] = r.term_index;
  j["type_index"] = r.type_index;
  j["term"] = render(r.term);
  j["type"] = render_type(r.type);
  j["mode"] = r.proper ? "proper" : "eta";
  j["typable"] = tri_name(r.typable);
  j["eta_retyped"] = r.eta_retyped ? json(render(*r.eta_retyped)) : json(nullptr);
  j["dinatural"] = tri_name(r.dinatural);
  j["parametric"] = verdict_json(r.parametric);
  j["realizer"] = verdict_json(r.realizer);
  j["status"] = r.status;
  j["reasons"] = r.reasons;
  return j;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.config = cfg;
  rep.types = cfg.types.empty() ? default_suite_types() : cfg.types;
  std::vector<bool> proper;
  for (const Ty& t : rep.types) {
    TypeClassification c = classify(t);
    if (!c.forall_plus2) {
      throw Error(ErrorCode::WrongClass, "suite type outside the positive class: " + render_type(t));
    }
    proper.push_back(c.forall_plus);
  }
  rep.terms = enumerate_closed_beta_normal(cfg.max_term_size);
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    for (std::size_t j = 0; j < rep.types.size(); ++j) {
      SuiteRow r;
      r.term_index = i;
      r.type_index = j;
      r.term = rep.terms[i];
      r.type = rep.types[j];
      r.proper = proper[j];
      rep.rows.push_back(std::move(r));
    }
  }
  const auto n = static_cast<std::int64_t>(rep.rows.size());
  std::vector<std::string> errors(rep.rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      evaluate(rep.rows[i], cfg);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    SuiteRow& r = rep.rows[i];
    if (!errors[i].empty()) {
      r.status = "inconclusive";
      r.reasons = {"error: " + errors[i]};
    }
    if (r.status == "violation") rep.violations.push_back(i);
    if (r.status == "inconclusive") rep.inconclusive.push_back(i);
  }
  return rep;
}

std::string suite_rows_jsonl(const SuiteReport& r) {
  std::string out;
  for (const SuiteRow& row : r.rows) out += row_json(row).dump() + "\n";
  return out;
}

std::string suite_matrix_json(const SuiteReport& r) {
  json types = json::array();
  for (std::size_t j = 0; j < r.types.size(); ++j) {
    json cell = {{"type", render_type(r.types[j])}};
    std::map<std::string, std::size_t> counts;
    std::size_t prefuted = 0, rrefuted = 0, rows = 0;
    for (const SuiteRow& row : r.rows) {
      if (row.type_index != j) continue;
      ++rows;
      counts[std::string("typable=") + tri_name(row.typable) + ",dinatural=" +
             tri_name(row.dinatural)]++;
      if (row.typable != Tri::True) continue;
      if (row.parametric && row.parametric->verdict == SampleVerdict::Kind::Refuted) ++prefuted;
      if (row.realizer && row.realizer->verdict == SampleVerdict::Kind::Refuted) ++rrefuted;
    }
    cell["rows"] = rows;
    cell["counts"] = counts;
    cell["typable_refuted_parametric"] = prefuted;
    cell["typable_refuted_realizer"] = rrefuted;
    types.push_back(cell);
  }
  json j = {{"matrix", types},
            {"violations", r.violations.size()},
            {"inconclusive", r.inconclusive.size()},
            {"seed", r.config.seed},
            {"kind", semantics_name(r.config.kind)},
            {"eta_kind", semantics_name(r.config.eta_kind)},
            {"max_term_size", r.config.max_term_size},
            {"samples", r.config.samples}};
  return j.dump();
}

std::string suite_violations_json(const SuiteReport& r) {
  json v = json::array();
  for (std::size_t i : r.violations) v.push_back(row_json(r.rows[i]));
  json inc = json::array();
  for (std::size_t i : r.inconclusive) inc.push_back(row_json(r.rows[i]));
  return json{{"violations", v}, {"inconclusive", inc}}.dump();
}

std::string suite_summary_table(const SuiteReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(30) << "type" << std::right << std::setw(6) << "rows"
     << std::setw(9) << "typable" << std::setw(11) << "dinatural" << std::setw(8) << "agree"
     << std::setw(9) << "p-pass" << std::setw(9) << "r-pass" << std::setw(7) << "viol"
     << std::setw(7) << "inc" << "\n";
  for (std::size_t j = 0; j < r.types.size(); ++j) {
    std::size_t rows = 0, typ = 0, din = 0, agree = 0, pp = 0, rp = 0, viol = 0, inc = 0;
    for (const SuiteRow& row : r.rows) {
      if (row.type_index != j) continue;
      ++rows;
      typ += row.typable == Tri::True;
      din += row.dinatural == Tri::True;
      agree += (row.typable == Tri::True) == (row.dinatural == Tri::True);
      pp += row.parametric && row.parametric->verdict == SampleVerdict::Kind::Pass;
      rp += row.realizer && row.realizer->verdict == SampleVerdict::Kind::Pass;
      viol += row.status == "violation";
      inc += row.status == "inconclusive";
    }
    os << std::left << std::setw(30) << render_type(r.types[j]) << std::right << std::setw(6)
       << rows << std::setw(9) << typ << std::setw(11) << din << std::setw(8) << agree
       << std::setw(9) << pp << std::setw(9) << rp << std::setw(7) << viol << std::setw(7) << inc
       << "\n";
  }
  os << "violations: " << r.violations.size() << ", inconclusive: " << r.inconclusive.size()
     << "\n";
  return os.str();
}

}  // namespace sflab
