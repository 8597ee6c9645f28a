#include "sflab/param.hpp"

#include <algorithm>

#include <json.hpp>

#include "sflab/dinat.hpp"
#include "sflab/error.hpp"

namespace sflab {

using json = nlohmann::json;

namespace {

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

std::vector<Term> closure_in(const Universe& u, const Term& t, Semantics kind) {
  if (u.size() == 0) return {t};
  auto i = u.find(t);
  if (!i) return {t};
  Bits b(u.size());
  b.set(*i);
  return u.terms_of(close_bits(u, b, kind));
}

// Related pairs standing for a relation used as an arrow domain.
std::vector<TermPair> var_domain(const Rel& r, const Universe& u) {
  std::vector<TermPair> out = r.base;
  for (const auto& [a, b] : r.base) {
    for (const Term& m : closure_in(u, a, r.kind)) {
      for (const Term& n : closure_in(u, b, r.kind)) out.emplace_back(m, n);
    }
  }
  std::sort(out.begin(), out.end(), [](const TermPair& x, const TermPair& y) {
    if (x.first != y.first) return term_less(x.first, y.first);
    return term_less(x.second, y.second);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using Env = std::map<std::string, Rel>;

Tri member(const TermPair& pq, const Ty& sigma, Env& env, const RelInterpretation& in);

const Rel& lookup(const Env& env, const std::string& x) {
  auto it = env.find(x);
  if (it == env.end()) throw Error(ErrorCode::UncoveredVariable, "no relation assigned to " + x);
  return it->second;
}

Tri member(const TermPair& pq, const Ty& sigma, Env& env, const RelInterpretation& in) {
  switch (sigma.kind()) {
    case Ty::Kind::Var: return rel_member(pq, lookup(env, sigma.name()), in.fuel);
    case Ty::Kind::Arrow: {
      std::vector<TermPair> dom;
      if (sigma.dom().is_var()) {
        dom = var_domain(lookup(env, sigma.dom().name()), in.u);
      } else {
        for (const Term& m : in.u.terms()) {
          for (const Term& n : in.u.terms()) {
            if (member({m, n}, sigma.dom(), env, in) == Tri::True) dom.emplace_back(m, n);
          }
        }
      }
      Tri out = Tri::True;
      for (const auto& [m, n] : dom) {
        out = tri_and(out, member({Term::app(pq.first, m), Term::app(pq.second, n)}, sigma.cod(),
                                  env, in));
        if (out == Tri::False) break;
      }
      return out;
    }
    case Ty::Kind::Forall: {
      if (!type_occurs_free(sigma.body(), sigma.name())) return member(pq, sigma.body(), env, in);
      if (in.family.empty()) throw Error(ErrorCode::EmptyDomain, "empty quantifier family");
      std::optional<Rel> saved;
      if (auto it = env.find(sigma.name()); it != env.end()) saved = it->second;
      Tri out = Tri::True;
      for (const Rel& r : in.family) {
        env[sigma.name()] = r;
        out = tri_and(out, member(pq, sigma.body(), env, in));
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

json pairs_json(const std::vector<TermPair>& ps) {
  json a = json::array();
  for (const auto& [p, q] : ps) a.push_back(json::array({render(p), render(q)}));
  return a;
}

std::vector<TermPair> draw_pairs(std::mt19937_64& rng, const std::vector<Term>& pool,
                                 std::size_t lo, std::size_t hi) {
  std::size_t n = lo + rng() % (hi - lo + 1);
  std::vector<TermPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Term& a = pool[rng() % pool.size()];
    const Term& b = pool[rng() % pool.size()];
    out.emplace_back(a, b);
  }
  return out;
}

RelInterpretation draw_interpretation(const Sample& s, Semantics kind, const SampleConfig& cfg,
                                      std::mt19937_64& rng, const std::set<std::string>& vars) {
  RelInterpretation in;
  in.kind = kind;
  in.u = s.u;
  in.fuel = cfg.fuel;
  for (const std::string& x : vars) in.rels[x] = make_rel(s.u, kind, draw_pairs(rng, s.pool, 1, 3));
  const Term a = Term::free("a"), b = Term::free("b");
  in.family.push_back(make_rel(s.u, kind, {{a, a}}));
  in.family.push_back(make_rel(s.u, kind, {{a, b}}));
  std::size_t extra = rng() % 4;
  for (std::size_t k = 0; k < extra; ++k) {
    in.family.push_back(make_rel(s.u, kind, draw_pairs(rng, s.pool, 1, 3)));
  }
  return in;
}

json interpretation_json(const RelInterpretation& in) {
  json w;
  w["assignment"] = json::object();
  for (const auto& [x, r] : in.rels) w["assignment"][x] = pairs_json(r.base);
  w["family"] = json::array();
  for (const Rel& r : in.family) w["family"].push_back(pairs_json(r.base));
  return w;
}

}  // namespace

Rel make_rel(const Universe& u, Semantics kind, std::vector<TermPair> base) {
  Rel r;
  r.kind = kind;
  std::vector<Term> ls, rs;
  for (const auto& [a, b] : base) {
    ls.push_back(a);
    rs.push_back(b);
  }
  r.base = std::move(base);
  r.left = close(ls, kind, u);
  r.right = close(rs, kind, u);
  return r;
}

Tri rel_member(const TermPair& pq, const Rel& r, std::uint64_t fuel) {
  Tri out = Tri::False;
  for (const auto& [a, b] : r.base) {
    Tri t = tri_and(member_singleton(pq.first, a, r.kind, fuel),
                    member_singleton(pq.second, b, r.kind, fuel));
    if (t == Tri::True) return t;
    if (t == Tri::Unknown) out = Tri::Unknown;
  }
  return out;
}

Tri rel_member(const TermPair& pq, const RelMeet& r, std::uint64_t fuel) {
  Tri out = Tri::True;
  for (const Rel& part : r.parts) {
    out = tri_and(out, rel_member(pq, part, fuel));
    if (out == Tri::False) break;
  }
  return out;
}

Tri arrow_rel_member(const TermPair& pq, const Rel& r, const Rel& r2, const Universe& u,
                     std::uint64_t fuel) {
  if (r.kind != r2.kind) throw Error(ErrorCode::WrongClass, "relations of different kinds");
  Tri out = Tri::True;
  for (const auto& [m, n] : var_domain(r, u)) {
    out = tri_and(out, rel_member({Term::app(pq.first, m), Term::app(pq.second, n)}, r2, fuel));
    if (out == Tri::False) break;
  }
  return out;
}

Tri interpret_rel_member(const TermPair& pq, const Ty& sigma, const RelInterpretation& in) {
  Env env = in.rels;
  return member(pq, sigma, env, in);
}

SampleVerdict parametric_sample_test(const Term& m, const Ty& sigma, Semantics kind,
                                     const SampleConfig& cfg) {
  if (!is_closed(m)) throw Error(ErrorCode::NotClosed, "parametricity test needs a closed term");
  if (over_sn(kind) && !is_sn(m)) throw Error(ErrorCode::NotSN, "term not strongly normalizing");
  SampleVerdict v;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Sample s = make_sample(kind, cfg, i);
    auto rng = sample_rng(cfg.seed ^ 0x27d4eb2fu, i);
    RelInterpretation in = draw_interpretation(s, kind, cfg, rng, type_free_vars(sigma));
    ++v.samples;
    Tri r = interpret_rel_member({m, m}, sigma, in);
    if (r == Tri::Unknown) ++v.unknown;
    if (r == Tri::False) {
      v.verdict = SampleVerdict::Kind::Refuted;
      v.sample_id = i;
      v.witness = interpretation_json(in).dump();
      return v;
    }
  }
  if (v.unknown > 0) v.verdict = SampleVerdict::Kind::Inconclusive;
  return v;
}

SampleVerdict abstraction_smoke(const Derivation& d, Semantics kind, const SampleConfig& cfg) {
  DerivationCheck c = check_derivation(d);
  if (!c.ok) throw Error(ErrorCode::InvalidDerivation, c.message);
  const Context& ctx = d.concl.ctx;
  std::set<std::string> vars = type_free_vars(d.concl.ty);
  for (const auto& x : context_free_type_vars(ctx)) vars.insert(x);
  std::vector<std::string> names;
  for (const auto& [x, t] : ctx) {
    if (occurs_free(d.concl.term, x)) names.push_back(x);
  }
  SampleVerdict v;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Sample s = make_sample(kind, cfg, i);
    auto rng = sample_rng(cfg.seed ^ 0x165667b1u, i);
    RelInterpretation in = draw_interpretation(s, kind, cfg, rng, vars);
    std::vector<Term> left, right;
    bool drawn = true;
    json tuple = json::object();
    for (const std::string& x : names) {
      std::vector<TermPair> related;
      for (const Term& p : s.u.terms()) {
        for (const Term& q : s.u.terms()) {
          if (interpret_rel_member({p, q}, ctx.at(x), in) == Tri::True) related.emplace_back(p, q);
        }
      }
      if (related.empty()) {
        drawn = false;
        break;
      }
      const TermPair& pick = related[rng() % related.size()];
      left.push_back(pick.first);
      right.push_back(pick.second);
      tuple[x] = json::array({render(pick.first), render(pick.second)});
    }
    ++v.samples;
    if (!drawn) {
      ++v.unknown;
      continue;
    }
    const Term lhs = substitute_many(d.concl.term, names, left);
    const Term rhs = substitute_many(d.concl.term, names, right);
    Tri r = interpret_rel_member({lhs, rhs}, d.concl.ty, in);
    if (r == Tri::Unknown) ++v.unknown;
    if (r == Tri::False) {
      v.verdict = SampleVerdict::Kind::Refuted;
      v.sample_id = i;
      json w = interpretation_json(in);
      w["context"] = tuple;
      v.witness = w.dump();
      return v;
    }
  }
  if (v.unknown > 0) v.verdict = SampleVerdict::Kind::Inconclusive;
  return v;
}

Tri rf_base(const TermPair& pq, const std::string& f, Reduction gamma, std::uint64_t fuel) {
  return equiv(Term::app(Term::free(f), pq.first), pq.second, gamma, fuel);
}

Tri rf_instance(const Term& m, const Ty& sigma, Reduction gamma, std::uint64_t fuel) {
  if (!is_simple(sigma)) throw Error(ErrorCode::WrongClass, "relation instance needs a simple type");
  const std::set<std::string> z = type_free_vars(sigma);
  std::vector<Term> ks, hs;
  Ty cur = sigma;
  std::size_t i = 0;
  while (cur.is_arrow()) {
    const Term x = Term::free("x" + std::to_string(++i));
    ks.push_back(Term::app(k_term(cur.dom(), z), x));
    hs.push_back(Term::app(h_term(cur.dom(), z), x));
    cur = cur.cod();
  }
  const auto pos = std::distance(z.begin(), z.find(cur.name()));
  return rf_base({sflab::apply(m, ks), sflab::apply(m, hs)}, indeterminate_name(static_cast<std::size_t>(pos)),
                 gamma, fuel);
}

}  // namespace sflab
