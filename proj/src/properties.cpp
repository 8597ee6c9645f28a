#include <algorithm>

#include <json.hpp>

#include "sflab/error.hpp"
#include "universe_data.hpp"

namespace sflab {

using json = nlohmann::json;

namespace {

enum Salt : std::uint64_t {
  kAxioms = 1ull << 40,
  kFClosure = 2ull << 40,
  kUnion = 3ull << 40,
  kSubst = 4ull << 40,
  kWeakSubst = 5ull << 40,
  kAdequacy = 6ull << 40,
  kWhExp = 7ull << 40,
};

Bits random_bits(const Universe& u, std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  Bits b(u.size());
  std::size_t n = lo + rng() % (hi - lo + 1);
  for (std::size_t i = 0; i < n; ++i) b.set(rng() % u.size());
  return b;
}

json bits_json(const Universe& u, const Bits& b) {
  json a = json::array();
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) a.push_back(render(u.term(i)));
  return a;
}

json terms_json(const std::vector<Term>& ts) {
  json a = json::array();
  for (const Term& t : ts) a.push_back(render(t));
  return a;
}

PropertyReport start(const char* check, Semantics kind) {
  PropertyReport r;
  r.check = check;
  r.kind = kind;
  r.method = "fixpoint";
  return r;
}

void fail(PropertyReport& r, const PropertyConfig& cfg, json w) {
  ++r.failures;
  if (r.witnesses.size() < cfg.max_witnesses) r.witnesses.push_back(w.dump());
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

// Singleton closures by fixpoint, one column per generator.
std::vector<Bits> singleton_columns(const Universe& u, Semantics kind) {
  OrderMatrix m = singleton_closure_matrix(u, kind);
  std::vector<Bits> cols(u.size(), Bits(u.size()));
  for (std::uint32_t q = 0; q < u.size(); ++q) {
    for (auto p = m.rows[q].find_first(); p != Bits::npos; p = m.rows[q].find_next(p)) {
      cols[p].set(q);
    }
  }
  return cols;
}

std::string substitution_var(const Universe& u) {
  std::set<std::string> names;
  for (const Term& t : u.terms()) {
    auto f = free_names(t);
    names.insert(f.begin(), f.end());
  }
  if (names.empty() || names.count("x")) return "x";
  return *names.begin();
}

std::vector<Term> default_substituends(const Universe& u) {
  std::vector<Term> out;
  for (const Term& t : u.terms()) {
    if (is_closed(t)) out.push_back(t);
  }
  if (out.empty()) out = {parse_term("\\x.x"), parse_term("\\u.\\v.u")};
  return out;
}

// Indices into a space of `total` cases: all of them, or a sorted sample.
std::vector<std::size_t> pick_cases(std::size_t total, const PropertyConfig& cfg, std::uint64_t salt,
                                    bool& exhaustive) {
  std::vector<std::size_t> idx;
  exhaustive = total <= cfg.samples;
  if (exhaustive) {
    for (std::size_t i = 0; i < total; ++i) idx.push_back(i);
    return idx;
  }
  auto rng = sample_rng(cfg.seed, salt);
  for (std::size_t i = 0; i < cfg.samples; ++i) idx.push_back(rng() % total);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

bool in_language(const Term& t, Semantics kind) { return !over_sn(kind) || is_sn(t); }

}  // namespace

PropertyReport closure_axioms_check(Semantics kind, const Universe& u, const PropertyConfig& cfg) {
  PropertyReport r = start("closure_axioms", kind);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto rng = sample_rng(cfg.seed, kAxioms + i);
    Bits s = random_bits(u, rng, 1, 3);
    Bits s2 = s | random_bits(u, rng, 0, 2);
    Bits c = close_bits(u, s, kind);
    Bits c2 = close_bits(u, s2, kind);
    ++r.samples;
    const char* broken = nullptr;
    if (!s.is_subset_of(c)) {
      broken = "extensive";
    } else if (!c.is_subset_of(c2)) {
      broken = "monotone";
    } else if (close_bits(u, c, kind) != c) {
      broken = "idempotent";
    } else if (close_bits_serial(u, s, kind) != c) {
      broken = "serial-agreement";
    }
    if (broken) {
      fail(r, cfg, {{"sample_id", i}, {"property", broken}, {"s", bits_json(u, s)},
                    {"superset", bits_json(u, s2)}});
    }
  }
  return r;
}

PropertyReport f_closure_check(Semantics kind, const Universe& u, const PropertyConfig& cfg) {
  PropertyReport r = start("f_closure", kind);
  r.method = "fixpoint+characterization";
  const std::vector<Term>& terms = u.terms();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto rng = sample_rng(cfg.seed, kFClosure + i);
    Bits s = random_bits(u, rng, 1, 2);
    std::vector<Term> sg = u.terms_of(s);
    // Target generators: half the time an application M0 P0 with P0 in s,
    // so that s -> t is not trivially empty.
    std::vector<Term> tg;
    if (rng() % 2 == 0) {
      Term cand = Term::app(terms[rng() % terms.size()], sg[rng() % sg.size()]);
      if (in_language(cand, kind)) tg.push_back(cand);
    }
    if (tg.empty()) tg = u.terms_of(random_bits(u, rng, 1, 2));
    ++r.samples;

    Bits cs = close_bits(u, s, kind);
    std::vector<Term> cs_terms = u.terms_of(cs);
    Bits arrow(u.size()), rhs(u.size());
    bool unknown = false;
    for (std::uint32_t m = 0; m < u.size(); ++m) {
      Tri a = Tri::True;
      for (const Term& p : sg) {
        a = tri_and(a, member_generated(Term::app(terms[m], p), tg, kind, cfg.fuel));
        if (a == Tri::False) break;
      }
      Tri b = Tri::True;
      for (const Term& p : cs_terms) {
        b = tri_and(b, member_generated(Term::app(terms[m], p), tg, kind, cfg.fuel));
        if (b == Tri::False) break;
      }
      if (a == Tri::Unknown || b == Tri::Unknown) unknown = true;
      if (a == Tri::True) arrow.set(m);
      if (b == Tri::True) rhs.set(m);
    }
    Bits lhs = close_bits(u, arrow, kind);
    // rhs only sees the part of Cl(s) inside u, so it can over-approximate:
    // lhs \ rhs is a genuine counterexample, rhs \ lhs is inconclusive.
    Bits bad = lhs - rhs;
    if (bad.any()) {
      fail(r, cfg, {{"sample_id", i}, {"s", terms_json(sg)}, {"t", terms_json(tg)},
                    {"in_closure_not_in_arrow", bits_json(u, bad)}});
    } else if (unknown || (rhs - lhs).any()) {
      ++r.unknown;
    }
  }
  return r;
}

PropertyReport su_check(Semantics kind, const Universe& u, const PropertyConfig& cfg) {
  PropertyReport r = start("su", kind);
  std::vector<Bits> cols = singleton_columns(u, kind);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto rng = sample_rng(cfg.seed, kUnion + i);
    Bits s = random_bits(u, rng, 1, 4);
    Bits whole = close_bits(u, s, kind);
    Bits joined(u.size());
    for (auto p = s.find_first(); p != Bits::npos; p = s.find_next(p)) joined |= cols[p];
    ++r.samples;
    if (whole != joined) {
      fail(r, cfg, {{"sample_id", i}, {"s", bits_json(u, s)},
                    {"only_in_closure", bits_json(u, whole - joined)}});
    }
  }
  return r;
}

PropertyReport ss_check(Semantics kind, const Universe& u, const PropertyConfig& cfg,
                        const std::vector<Term>& substituends) {
  PropertyReport r = start("ss", kind);
  r.method = "fixpoint premise, characterization conclusion";
  const std::string x = substitution_var(u);
  std::vector<Term> subs = substituends.empty() ? default_substituends(u) : substituends;
  std::vector<Bits> cols = singleton_columns(u, kind);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t p = 0; p < u.size(); ++p) {
    for (auto q = cols[p].find_first(); q != Bits::npos; q = cols[p].find_next(q)) {
      if (q != p && (occurs_free(u.term(p), x) || occurs_free(u.term(q), x))) {
        pairs.emplace_back(p, static_cast<std::uint32_t>(q));
      }
    }
  }
  for (std::size_t c : pick_cases(pairs.size() * subs.size(), cfg, kSubst, r.exhaustive)) {
    const auto [p, q] = pairs[c / subs.size()];
    const Term& sub = subs[c % subs.size()];
    Term gen = substitute(u.term(p), sub, x);
    Term got = substitute(u.term(q), sub, x);
    ++r.samples;
    if (!in_language(gen, kind) || !in_language(got, kind)) {
      ++r.unknown;
      continue;
    }
    Tri t = member_singleton(got, gen, kind, cfg.fuel);
    if (t == Tri::Unknown) ++r.unknown;
    if (t == Tri::False) {
      fail(r, cfg, {{"sample_id", c}, {"P", render(u.term(p))}, {"P'", render(u.term(q))},
                    {"Q", render(sub)}, {"x", x}});
    }
  }
  return r;
}

PropertyReport wss_check(Semantics kind, const Universe& u, const PropertyConfig& cfg,
                         const std::vector<Term>& substituends) {
  PropertyReport r = start("wss", kind);
  r.method = "fixpoint premise, characterization conclusion";
  const std::string x = substitution_var(u);
  std::vector<Term> subs = substituends.empty() ? default_substituends(u) : substituends;
  std::vector<Bits> cols = singleton_columns(u, kind);
  // Generators P x with x not free in P.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t g = 0; g < u.size(); ++g) {
    const Term& t = u.term(g);
    if (!t.is_app() || !t.arg().is_free() || t.arg().name() != x || occurs_free(t.fun(), x)) {
      continue;
    }
    for (auto q = cols[g].find_first(); q != Bits::npos; q = cols[g].find_next(q)) {
      pairs.emplace_back(g, static_cast<std::uint32_t>(q));
    }
  }
  for (std::size_t c : pick_cases(pairs.size() * subs.size(), cfg, kWeakSubst, r.exhaustive)) {
    const auto [g, q] = pairs[c / subs.size()];
    const Term& sub = subs[c % subs.size()];
    Term got = substitute(u.term(q), sub, x);
    if (!in_language(got, kind)) continue;  // premise P'[Q/x] in L fails
    Term gen = Term::app(u.term(g).fun(), sub);
    ++r.samples;
    if (!in_language(gen, kind)) {
      ++r.unknown;
      continue;
    }
    Tri t = member_singleton(got, gen, kind, cfg.fuel);
    if (t == Tri::Unknown) ++r.unknown;
    if (t == Tri::False) {
      fail(r, cfg, {{"sample_id", c}, {"P", render(u.term(g))}, {"P'", render(u.term(q))},
                    {"Q", render(sub)}, {"x", x}});
    }
  }
  return r;
}

Tri adequacy_instance(Semantics kind, const Universe& u, const std::vector<Term>& s_gens,
                      const std::vector<Term>& t_gens, const Term& m, const std::string& x,
                      std::uint64_t fuel) {
  std::vector<Term> s = u.terms_of(close_bits(u, u.bits_of(s_gens), kind));
  Tri premise = Tri::True;
  for (const Term& p : s) {
    premise = tri_and(premise, member_generated(substitute(m, p, x), t_gens, kind, fuel));
    if (premise == Tri::False) return Tri::True;
  }
  if (premise == Tri::Unknown) return Tri::Unknown;
  Term lam = abstract(x, m);
  Tri out = Tri::True;
  for (const Term& p : s) {
    Term app = Term::app(lam, p);
    if (!in_language(app, kind)) return Tri::False;
    out = tri_and(out, member_generated(app, t_gens, kind, fuel));
    if (out == Tri::False) break;
  }
  return out;
}

PropertyReport adequacy_check(Semantics kind, const Universe& u, const PropertyConfig& cfg) {
  PropertyReport r = start("adequacy", kind);
  const std::string x = substitution_var(u);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto rng = sample_rng(cfg.seed, kAdequacy + i);
    std::vector<Term> sg = u.terms_of(random_bits(u, rng, 1, 2));
    std::vector<Term> tg = rng() % 3 == 0 ? sg : u.terms_of(random_bits(u, rng, 1, 2));
    std::size_t k = rng() % (u.size() + 1);
    Term m = k == u.size() ? Term::free(x) : u.term(static_cast<std::uint32_t>(k));
    ++r.samples;
    Tri t = adequacy_instance(kind, u, sg, tg, m, x, cfg.fuel);
    if (t == Tri::Unknown) ++r.unknown;
    if (t == Tri::False) {
      fail(r, cfg, {{"sample_id", i}, {"s", terms_json(sg)}, {"t", terms_json(tg)},
                    {"M", render(m)}, {"x", x}});
    }
  }
  return r;
}

PropertyReport wh_expansion_check(Semantics kind, const Universe& u, const PropertyConfig& cfg) {
  PropertyReport r = start("wh_expansion", kind);
  r.method = "fixpoint+characterization";
  std::vector<std::vector<std::uint32_t>> expanders(u.size());
  for (std::uint32_t q = 0; q < u.size(); ++q) {
    if (auto w = u.wh_succ(q)) expanders[*w].push_back(q);
  }
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto rng = sample_rng(cfg.seed, kWhExp + i);
    Bits g = random_bits(u, rng, 1, 3);
    std::vector<Term> gens = u.terms_of(g);
    Bits s = close_bits(u, g, kind);
    ++r.samples;
    for (auto p = s.find_first(); p != Bits::npos; p = s.find_next(p)) {
      const Term& pt = u.term(p);
      std::vector<Term> cands;
      for (std::uint32_t q : expanders[p]) cands.push_back(u.term(q));
      FreshNames fresh(free_names(pt));
      Term lam = Term::lam(fresh.fresh("v"), shift(pt, 1));
      cands.push_back(Term::app(lam, u.term(rng() % u.size())));
      for (const Term& q : cands) {
        if (!is_sn(q)) continue;
        auto id = u.find(q);
        bool ok = id ? s.test(*id) : member_generated(q, gens, kind, cfg.fuel) == Tri::True;
        if (!ok) {
          fail(r, cfg, {{"sample_id", i}, {"s", terms_json(gens)}, {"P", render(pt)},
                        {"Q", render(q)}});
        }
      }
    }
  }
  return r;
}

std::string report_json(const PropertyReport& r) {
  json j{{"check", r.check},
         {"kind", semantics_name(r.kind)},
         {"samples", r.samples},
         {"failures", r.failures},
         {"unknown", r.unknown},
         {"exhaustive", r.exhaustive},
         {"method", r.method},
         {"verdict", r.passed() ? "pass" : "fail"}};
  j["witnesses"] = json::array();
  for (const std::string& w : r.witnesses) j["witnesses"].push_back(json::parse(w));
  return j.dump();
}

}  // namespace sflab
