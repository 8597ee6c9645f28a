#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_set>

#include "sflab/error.hpp"
#include "universe_data.hpp"

namespace sflab {

const TermFacts& term_facts(const Term& t, std::uint64_t fuel) {
  thread_local std::unordered_map<std::uint64_t, std::unordered_map<Term, TermFacts>> cache;
  thread_local std::size_t stored = 0;
  auto& m = cache[fuel];
  if (auto it = m.find(t); it != m.end()) return it->second;
  if (stored > 2000000) {
    cache.clear();
    stored = 0;
  }
  auto& fresh = cache[fuel];
  TermFacts f;
  f.sn = is_strongly_normalizing(t, fuel).status;
  if (f.sn == SnVerdict::Status::Yes) {
    ReductGraph g = explore_reducts(t, Reduction::Beta, fuel);
    f.reach = g.nodes;
    for (const Term& r : f.reach) {
      if (r.is_lam()) f.values.push_back(r);
    }
    std::sort(f.values.begin(), f.values.end(), term_less);
    f.nf = normalize(t, Reduction::Beta, std::max<std::uint64_t>(fuel, kDefaultFuel)).result;
  }
  stored += 1 + f.reach.size();
  return fresh.emplace(t, std::move(f)).first->second;
}

namespace {

const TermFacts& sn_facts(const Term& t, std::uint64_t fuel) {
  const TermFacts& f = term_facts(t, fuel);
  if (f.sn != SnVerdict::Status::Yes) {
    throw Error(ErrorCode::NotSN, "term not shown strongly normalizing: " + render(t));
  }
  return f;
}

bool reaches(const TermFacts& from, const Term& to) {
  return std::find(from.reach.begin(), from.reach.end(), to) != from.reach.end();
}

bool subset_sorted(const std::vector<Term>& a, const std::vector<Term>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end(), term_less);
}

// Side condition on one filler pair.
bool filler_ok(const Term& f, const Term& g, std::uint64_t fuel) {
  const TermFacts& ff = sn_facts(f, fuel);
  const TermFacts& fg = sn_facts(g, fuel);
  if (!ff.values.empty()) return subset_sorted(ff.values, fg.values);
  return ff.nf && fg.nf && *ff.nf == *fg.nf;
}

bool walk(const Term& q, const Term& p, std::uint64_t fuel) {
  if (q == p) return true;
  if (is_nn(q) && q.loose() == 0 && p.loose() == 0 && filler_ok(q, p, fuel)) return true;
  if (q.kind() != p.kind()) return false;
  if (q.is_lam()) return walk(q.body(), p.body(), fuel);
  if (q.is_app()) return walk(q.fun(), p.fun(), fuel) && walk(q.arg(), p.arg(), fuel);
  return false;
}

}  // namespace

bool sqsubseteq(const Term& q, const Term& p, std::uint64_t fuel) {
  const TermFacts& fq = sn_facts(q, fuel);
  const TermFacts& fp = sn_facts(p, fuel);
  if (reaches(fp, q)) return true;
  if (!fq.values.empty()) return subset_sorted(fq.values, fp.values);
  return fq.nf && fp.nf && *fq.nf == *fp.nf;
}

bool member_cr1(const Term& q, const Term& p, std::uint64_t fuel) { return sqsubseteq(q, p, fuel); }

Term principal_reduct(const Term& p) {
  if (!is_nn(p)) throw Error(ErrorCode::NotNN, "principal_reduct: not neutral non-normal");
  if (auto w = wh_reduct(p)) return *w;
  return reducts(p, Reduction::Beta).front();
}

bool triangle(const Term& q, const Term& p, std::uint64_t fuel) {
  sn_facts(q, fuel);
  if (reaches(sn_facts(p, fuel), q)) return true;
  return walk(q, p, fuel);
}

StarResult triangle_star(const Term& q, const Term& p, const Universe& u,
                         std::size_t chain_bound) {
  if (chain_bound == 0) chain_bound = u.size();
  StarResult r;
  if (q == p) {
    r.member = true;
    return r;
  }
  std::unordered_set<Term> seen{q};
  std::vector<Term> frontier{q};
  for (std::size_t depth = 0; depth < chain_bound && !frontier.empty(); ++depth) {
    std::vector<Term> next;
    for (const Term& cur : frontier) {
      if (triangle(cur, p)) {
        r.member = true;
        return r;
      }
      for (const Term& t : u.terms()) {
        if (!seen.count(t) && triangle(cur, t)) {
          seen.insert(t);
          next.push_back(t);
        }
      }
    }
    frontier = std::move(next);
  }
  r.bound_exhausted = !frontier.empty();
  return r;
}

bool member_cr2(const Term& q, const Term& p, std::uint64_t fuel) {
  const TermFacts& fq = sn_facts(q, fuel);
  sn_facts(p, fuel);
  std::unordered_map<Term, bool> memo;
  std::function<bool(const Term&)> rec = [&](const Term& m) -> bool {
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    memo[m] = false;
    bool ok = triangle(m, p, fuel);
    if (!ok) {
      for (const Term& r : term_facts(m, fuel).reach) {
        if (r != m && triangle(m, r, fuel) && rec(r)) {
          ok = true;
          break;
        }
      }
    }
    memo[m] = ok;
    return ok;
  };
  (void)fq;
  return rec(q);
}

namespace {

Tri from_bool(bool b) { return b ? Tri::True : Tri::False; }

Tri sn_gate(const Term& m, std::uint64_t fuel) {
  auto s = term_facts(m, fuel).sn;
  if (s == SnVerdict::Status::No) return Tri::False;
  if (s == SnVerdict::Status::Unknown) return Tri::Unknown;
  return Tri::True;
}

}  // namespace

Tri member_singleton(const Term& m, const Term& gen, Semantics kind, std::uint64_t fuel) {
  switch (kind) {
    case Semantics::SBeta: return equiv(m, gen, Reduction::Beta, fuel);
    case Semantics::SBetaEta: return equiv(m, gen, Reduction::BetaEta, fuel);
    case Semantics::SBetaSat: {
      Term cur = m;
      for (std::uint64_t i = 0; i <= fuel; ++i) {
        if (cur == gen) return Tri::True;
        auto w = wh_reduct(cur);
        if (!w) return Tri::False;
        if (w->size() > kMaxTermSize) return Tri::Unknown;
        cur = *w;
      }
      return Tri::Unknown;
    }
    case Semantics::SBetaDown: {
      ReductGraph g = explore_reducts(gen, Reduction::Beta, kDefaultSnFuel);
      if (std::find(g.nodes.begin(), g.nodes.end(), m) != g.nodes.end()) return Tri::True;
      return g.complete ? Tri::False : Tri::Unknown;
    }
    case Semantics::CR:
    case Semantics::CR1:
    case Semantics::CR2: {
      const std::uint64_t sn_fuel = kDefaultSnFuel;
      if (term_facts(gen, sn_fuel).sn != SnVerdict::Status::Yes) {
        throw Error(ErrorCode::NotSN, "generator not strongly normalizing: " + render(gen));
      }
      Tri g = sn_gate(m, sn_fuel);
      if (g != Tri::True) return g;
      if (kind == Semantics::CR1) return from_bool(sqsubseteq(m, gen, sn_fuel));
      if (kind == Semantics::CR2) return from_bool(member_cr2(m, gen, sn_fuel));
      const TermFacts& fg = term_facts(gen, sn_fuel);
      std::unordered_map<Term, bool> memo;
      std::function<bool(const Term&)> in = [&](const Term& t) -> bool {
        if (auto it = memo.find(t); it != memo.end()) return it->second;
        bool r = reaches(fg, t);
        if (!r && !t.is_lam()) {
          r = true;
          for (const Term& y : reducts(t, Reduction::Beta)) r = r && in(y);
        }
        memo[t] = r;
        return r;
      };
      return from_bool(in(m));
    }
  }
  return Tri::Unknown;
}

Tri member_generated(const Term& m, const std::vector<Term>& gens, Semantics kind,
                     std::uint64_t fuel) {
  Tri out = Tri::False;
  for (const Term& g : gens) {
    Tri t = member_singleton(m, g, kind, fuel);
    if (t == Tri::True) return t;
    if (t == Tri::Unknown) out = Tri::Unknown;
  }
  return out;
}

OrderMatrix sqsubseteq_matrix(const Universe& u, bool parallel) {
  const auto n = static_cast<std::int64_t>(u.size());
  OrderMatrix m;
  m.rows.assign(u.size(), Bits(u.size()));
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::int64_t q = 0; q < n; ++q) {
    const Bits& vq = u.values(q);
    for (std::int64_t p = 0; p < n; ++p) {
      bool below = u.reach(p).test(q) ||
                   (vq.any() ? vq.is_subset_of(u.values(p)) : u.beta_class(q) == u.beta_class(p));
      if (below) m.rows[q].set(p);
    }
  }
  return m;
}

OrderMatrix triangle_matrix(const Universe& u, bool parallel) {
  if (!u.all_sn()) throw Error(ErrorCode::NotSN, "triangle order needs an SN universe");
  const auto n = static_cast<std::int64_t>(u.size());
  OrderMatrix m;
  m.rows.assign(u.size(), Bits(u.size()));
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::int64_t q = 0; q < n; ++q) {
    for (std::int64_t p = 0; p < n; ++p) {
      if (u.reach(p).test(q) || walk(u.term(q), u.term(p), kDefaultSnFuel)) m.rows[q].set(p);
    }
  }
  return m;
}

OrderMatrix transitive_closure(const OrderMatrix& in, bool parallel) {
  OrderMatrix m = in;
  const auto n = static_cast<std::int64_t>(m.rows.size());
  for (std::int64_t i = 0; i < n; ++i) m.rows[i].set(i);
  for (std::int64_t k = 0; k < n; ++k) {
    const Bits rk = m.rows[k];
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      if (m.rows[i].test(k)) m.rows[i] |= rk;
    }
  }
  return m;
}

OrderMatrix singleton_closure_matrix(const Universe& u, Semantics kind, bool parallel) {
  const auto n = static_cast<std::int64_t>(u.size());
  if (over_sn(kind)) closure_rules(u, kind);
  std::vector<Bits> cols(u.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::int64_t p = 0; p < n; ++p) {
    Bits s(u.size());
    s.set(p);
    cols[p] = close_bits_serial(u, s, kind);
  }
  OrderMatrix m;
  m.rows.assign(u.size(), Bits(u.size()));
  for (std::int64_t p = 0; p < n; ++p) {
    for (auto q = cols[p].find_first(); q != Bits::npos; q = cols[p].find_next(q)) m.rows[q].set(p);
  }
  return m;
}

}  // namespace sflab
