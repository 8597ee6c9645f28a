#include <algorithm>

#include <json.hpp>

#include "sflab/error.hpp"
#include "universe_data.hpp"

namespace sflab {

using json = nlohmann::json;

namespace {

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

using Env = std::map<std::string, Generators>;

// Terms that stand for a variable-typed domain: the generators and their
// closure inside u. Generators alone would do for kinds whose closure
// commutes with arrows on raw domains; saturation, CR and CR1 do not.
std::vector<Term> var_domain(const Generators& gens, const Interpretation& in) {
  if (in.u.size() == 0) return gens;
  Bits b(in.u.size());
  std::vector<Term> out;
  for (const Term& g : gens) {
    if (auto i = in.u.find(g)) {
      b.set(*i);
    } else {
      out.push_back(g);
    }
  }
  for (const Term& t : in.u.terms_of(close_bits(in.u, b, in.kind))) out.push_back(t);
  return out;
}

Tri member(const Term& m, const Ty& sigma, Env& env, const Interpretation& in);

std::vector<Term> materialize(const Ty& sigma, Env& env, const Interpretation& in) {
  std::vector<Term> out;
  for (const Term& t : in.u.terms()) {
    if (member(t, sigma, env, in) == Tri::True) out.push_back(t);
  }
  return out;
}

Tri member(const Term& m, const Ty& sigma, Env& env, const Interpretation& in) {
  switch (sigma.kind()) {
    case Ty::Kind::Var: {
      auto it = env.find(sigma.name());
      if (it == env.end()) {
        throw Error(ErrorCode::UncoveredVariable, "no set assigned to " + sigma.name());
      }
      return member_generated(m, it->second, in.kind, in.fuel);
    }
    case Ty::Kind::Arrow: {
      std::vector<Term> dom;
      if (sigma.dom().is_var()) {
        auto it = env.find(sigma.dom().name());
        if (it == env.end()) {
          throw Error(ErrorCode::UncoveredVariable, "no set assigned to " + sigma.dom().name());
        }
        dom = var_domain(it->second, in);
      } else {
        dom = materialize(sigma.dom(), env, in);
      }
      Tri out = Tri::True;
      for (const Term& p : dom) {
        out = tri_and(out, member(Term::app(m, p), sigma.cod(), env, in));
        if (out == Tri::False) break;
      }
      return out;
    }
    case Ty::Kind::Forall: {
      if (!type_occurs_free(sigma.body(), sigma.name())) return member(m, sigma.body(), env, in);
      if (in.family.empty()) throw Error(ErrorCode::EmptyDomain, "empty quantifier family");
      std::optional<Generators> saved;
      if (auto it = env.find(sigma.name()); it != env.end()) saved = it->second;
      Tri out = Tri::True;
      for (const Generators& g : in.family) {
        env[sigma.name()] = g;
        out = tri_and(out, member(m, sigma.body(), env, in));
        if (out == Tri::False) break;
      }
      if (saved) {
        env[sigma.name()] = *saved;
      } else {
        env.erase(sigma.name());
      }
      return out;
    }
  }
  return Tri::Unknown;
}

json terms_json(const std::vector<Term>& ts) {
  json a = json::array();
  for (const Term& t : ts) a.push_back(render(t));
  return a;
}

}  // namespace

Tri arrow_member(const Term& m, const TermSet& s, const TermSet& t, std::uint64_t fuel) {
  if (s.members.none() && over_sn(s.kind)) {
    throw Error(ErrorCode::EmptyDomain, "arrow over an empty domain");
  }
  std::vector<Term> target = t.terms();
  Tri out = Tri::True;
  for (const Term& p : s.terms()) {
    out = tri_and(out, member_generated(Term::app(m, p), target, t.kind, fuel));
    if (out == Tri::False) break;
  }
  return out;
}

Tri interpret_member(const Term& m, const Ty& sigma, const Interpretation& in) {
  Env env = in.assignment;
  return member(m, sigma, env, in);
}

TermSet interpret_type(const Ty& sigma, const Interpretation& in) {
  TermSet out;
  out.u = in.u;
  out.kind = in.kind;
  out.members = in.u.empty_bits();
  Env env = in.assignment;
  for (std::uint32_t i = 0; i < in.u.size(); ++i) {
    if (member(in.u.term(i), sigma, env, in) == Tri::True) out.members.set(i);
  }
  return out;
}

const char* sample_verdict_name(SampleVerdict::Kind k) {
  switch (k) {
    case SampleVerdict::Kind::Pass: return "pass";
    case SampleVerdict::Kind::Refuted: return "refuted";
    case SampleVerdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

Sample make_sample(Semantics kind, const SampleConfig& cfg, std::size_t index) {
  static const std::vector<Term> small = enumerate_closed_beta_normal(4);
  auto rng = sample_rng(cfg.seed, index);
  std::vector<Term> seeds{Term::free("a"), Term::free("b"), Term::free("c")};
  std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
  for (std::size_t i = 0; i < cfg.extra_seeds; ++i) seeds.push_back(small[pick(rng)]);
  if (rng() % 2 == 0) {
    Term redex = Term::app(small[pick(rng)], seeds[rng() % seeds.size()]);
    if (is_sn(redex)) seeds.push_back(redex);
  }
  std::sort(seeds.begin(), seeds.end(), term_less);
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  Sample s;
  s.u = build_universe(seeds, 4096, {kind});
  s.pool = s.u.terms();
  return s;
}

namespace {

Generators draw(std::mt19937_64& rng, const std::vector<Term>& pool, std::size_t lo,
                std::size_t hi) {
  std::size_t n = lo + rng() % (hi - lo + 1);
  Generators g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(pool[rng() % pool.size()]);
  std::sort(g.begin(), g.end(), term_less);
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

SampleVerdict realizer_sample_test(const Term& m, const Ty& sigma, Semantics kind,
                                   const SampleConfig& cfg) {
  if (!is_closed(m)) throw Error(ErrorCode::NotClosed, "realizer test needs a closed term");
  if (over_sn(kind) && !is_sn(m)) throw Error(ErrorCode::NotSN, "term not strongly normalizing");
  SampleVerdict v;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Sample s = make_sample(kind, cfg, i);
    auto rng = sample_rng(cfg.seed ^ 0x5bd1e995u, i);
    Interpretation in;
    in.kind = kind;
    in.u = s.u;
    in.fuel = cfg.fuel;
    for (const std::string& x : type_free_vars(sigma)) in.assignment[x] = draw(rng, s.pool, 1, 3);
    in.family = {{Term::free("a")}, {Term::free("b")}};
    std::size_t extra = rng() % 4;
    for (std::size_t k = 0; k < extra; ++k) in.family.push_back(draw(rng, s.pool, 1, 3));
    ++v.samples;
    Tri r = interpret_member(m, sigma, in);
    if (r == Tri::Unknown) ++v.unknown;
    if (r == Tri::False) {
      v.verdict = SampleVerdict::Kind::Refuted;
      v.sample_id = i;
      json w;
      w["assignment"] = json::object();
      for (const auto& [x, g] : in.assignment) w["assignment"][x] = terms_json(g);
      w["family"] = json::array();
      for (const auto& g : in.family) w["family"].push_back(terms_json(g));
      v.witness = w.dump();
      return v;
    }
  }
  if (v.unknown > 0) v.verdict = SampleVerdict::Kind::Inconclusive;
  return v;
}

}  // namespace sflab
