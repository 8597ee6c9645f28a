#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "sflab/error.hpp"
#include "sflab/term.hpp"

namespace sflab {

namespace {

bool mentions_index(const Term& t, std::uint32_t k) {
  if (t.loose() <= k) return false;
  switch (t.kind()) {
    case Term::Kind::Bound: return t.index() == k;
    case Term::Kind::Lam: return mentions_index(t.body(), k + 1);
    case Term::Kind::App: return mentions_index(t.fun(), k) || mentions_index(t.arg(), k);
    default: return false;
  }
}

bool is_eta_redex(const Term& t) {
  if (!t.is_lam()) return false;
  const Term& b = t.body();
  return b.is_app() && b.arg().is_bound() && b.arg().index() == 0 &&
         !mentions_index(b.fun(), 0);
}

void beta_reducts(const Term& t, std::vector<Term>& out) {
  if (t.beta_normal()) return;
  if (t.is_lam()) {
    std::vector<Term> inner;
    beta_reducts(t.body(), inner);
    for (const Term& r : inner) out.push_back(Term::lam(t.name(), r));
    return;
  }
  if (!t.is_app()) return;
  if (t.fun().is_lam()) out.push_back(instantiate(t.fun().body(), t.arg()));
  std::vector<Term> inner;
  beta_reducts(t.fun(), inner);
  for (const Term& r : inner) out.push_back(Term::app(r, t.arg()));
  inner.clear();
  beta_reducts(t.arg(), inner);
  for (const Term& r : inner) out.push_back(Term::app(t.fun(), r));
}

void eta_reducts(const Term& t, std::vector<Term>& out) {
  if (t.is_lam()) {
    if (is_eta_redex(t)) out.push_back(shift(t.body().fun(), -1));
    std::vector<Term> inner;
    eta_reducts(t.body(), inner);
    for (const Term& r : inner) out.push_back(Term::lam(t.name(), r));
  } else if (t.is_app()) {
    std::vector<Term> inner;
    eta_reducts(t.fun(), inner);
    for (const Term& r : inner) out.push_back(Term::app(r, t.arg()));
    inner.clear();
    eta_reducts(t.arg(), inner);
    for (const Term& r : inner) out.push_back(Term::app(t.fun(), r));
  }
}

void dedupe(std::vector<Term>& v) {
  std::unordered_set<Term> seen;
  std::vector<Term> out;
  for (const Term& t : v) {
    if (seen.insert(t).second) out.push_back(t);
  }
  v.swap(out);
}

struct Budget {
  std::uint64_t fuel;
  std::uint64_t steps = 0;
  bool exhausted = false;

  bool spend() {
    if (steps >= fuel) {
      exhausted = true;
      return false;
    }
    ++steps;
    return true;
  }
};

// Head reduction to weak head normal form.
Term whnf(const Term& t, Budget& b) {
  std::vector<Term> args;
  Term head = spine(t, &args);
  std::size_t next = 0;
  while (head.is_lam() && next < args.size()) {
    if (!b.spend()) return t;
    head = instantiate(head.body(), args[next++]);
    if (head.is_app()) {
      std::vector<Term> extra;
      head = spine(head, &extra);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(next), extra.begin(), extra.end());
    }
    if (head.size() > kMaxTermSize) {
      b.exhausted = true;
      return t;
    }
  }
  Term r = head;
  for (std::size_t i = next; i < args.size(); ++i) r = Term::app(r, args[i]);
  return r;
}

Term beta_nf(const Term& t, Budget& b) {
  if (t.beta_normal()) return t;
  Term w = whnf(t, b);
  if (b.exhausted) return t;
  if (w.is_lam()) {
    Term body = beta_nf(w.body(), b);
    if (b.exhausted) return t;
    return Term::lam(w.name(), body);
  }
  std::vector<Term> args;
  Term head = spine(w, &args);
  for (Term& a : args) {
    a = beta_nf(a, b);
    if (b.exhausted) return t;
  }
  Term r = sflab::apply(head, args);
  if (r.size() > kMaxTermSize) b.exhausted = true;
  return r;
}

// One rightmost-innermost beta step; returns false when t is normal.
bool ri_step(const Term& t, Term& out) {
  if (t.beta_normal()) return false;
  if (t.is_lam()) {
    Term b;
    if (ri_step(t.body(), b)) {
      out = Term::lam(t.name(), b);
      return true;
    }
    return false;
  }
  Term r;
  if (ri_step(t.arg(), r)) {
    out = Term::app(t.fun(), r);
    return true;
  }
  if (ri_step(t.fun(), r)) {
    out = Term::app(r, t.arg());
    return true;
  }
  out = instantiate(t.fun().body(), t.arg());
  return true;
}

Term eta_nf(const Term& t, Budget& b) {
  switch (t.kind()) {
    case Term::Kind::Lam: {
      Term body = eta_nf(t.body(), b);
      if (b.exhausted) return t;
      Term l = Term::lam(t.name(), body);
      if (is_eta_redex(l)) {
        if (!b.spend()) return t;
        return shift(body.fun(), -1);
      }
      return l;
    }
    case Term::Kind::App: {
      Term f = eta_nf(t.fun(), b);
      if (b.exhausted) return t;
      Term a = eta_nf(t.arg(), b);
      if (b.exhausted) return t;
      return Term::app(f, a);
    }
    default: return t;
  }
}

}  // namespace

bool has_beta_redex(const Term& t) { return !t.beta_normal(); }

std::vector<Term> reducts(const Term& t, Reduction kind) {
  std::vector<Term> out;
  switch (kind) {
    case Reduction::Beta: beta_reducts(t, out); break;
    case Reduction::Eta: eta_reducts(t, out); break;
    case Reduction::BetaEta:
      beta_reducts(t, out);
      eta_reducts(t, out);
      break;
    case Reduction::WeakHead:
      if (auto r = wh_reduct(t)) out.push_back(*r);
      break;
  }
  dedupe(out);
  return out;
}

std::optional<Term> wh_reduct(const Term& t) {
  std::vector<Term> args;
  Term head = spine(t, &args);
  if (!head.is_lam() || args.empty()) return std::nullopt;
  Term r = instantiate(head.body(), args[0]);
  for (std::size_t i = 1; i < args.size(); ++i) r = Term::app(r, args[i]);
  return r;
}

bool is_whnf(const Term& t) { return !wh_reduct(t).has_value(); }

NormalizeOutcome normalize(const Term& t, Reduction kind, std::uint64_t fuel,
                           Strategy strategy) {
  Budget b{fuel};
  NormalizeOutcome out;
  Term r = t;
  auto beta = [&](const Term& in) -> Term {
    if (strategy == Strategy::LeftmostOutermost) return beta_nf(in, b);
    Term cur = in;
    Term next;
    while (ri_step(cur, next)) {
      if (!b.spend()) return in;
      cur = next;
      if (cur.size() > kMaxTermSize) {
        b.exhausted = true;
        return in;
      }
    }
    return cur;
  };
  switch (kind) {
    case Reduction::Beta: r = beta(t); break;
    case Reduction::WeakHead: r = whnf(t, b); break;
    case Reduction::Eta: r = eta_nf(t, b); break;
    case Reduction::BetaEta:
      r = beta(t);
      if (!b.exhausted) r = eta_nf(r, b);
      break;
  }
  out.steps = b.steps;
  out.exhausted = b.exhausted;
  if (!b.exhausted) out.result = r;
  return out;
}

ReductGraph explore_reducts(const Term& t, Reduction kind, std::uint64_t node_fuel) {
  ReductGraph g;
  std::unordered_map<Term, std::uint32_t> index;
  g.nodes.push_back(t);
  g.succ.emplace_back();
  index.emplace(t, 0);
  std::size_t next = 0;
  std::uint64_t volume = t.size();
  g.complete = true;
  while (next < g.nodes.size()) {
    Term cur = g.nodes[next];
    if (cur.size() > kMaxTermSize) {
      g.complete = false;
      break;
    }
    std::vector<Term> rs = reducts(cur, kind);
    std::vector<std::uint32_t> edges;
    bool overflow = false;
    for (const Term& r : rs) {
      auto it = index.find(r);
      if (it != index.end()) {
        edges.push_back(it->second);
        continue;
      }
      volume += r.size();
      if (g.nodes.size() >= node_fuel || volume > kMaxExploreVolume) {
        overflow = true;
        break;
      }
      auto id = static_cast<std::uint32_t>(g.nodes.size());
      index.emplace(r, id);
      g.nodes.push_back(r);
      g.succ.emplace_back();
      edges.push_back(id);
    }
    g.succ[next] = std::move(edges);
    ++next;
    if (overflow) {
      g.complete = false;
      break;
    }
  }
  if (next < g.nodes.size()) g.complete = false;
  return g;
}

namespace {

// Returns a cycle reachable from node 0 as a node list, empty if acyclic.
std::vector<std::uint32_t> find_cycle(const ReductGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::uint8_t> color(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  stack.emplace_back(0, 0);
  color[0] = 1;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < g.succ[v].size()) {
      std::uint32_t w = g.succ[v][i++];
      if (color[w] == 1) {
        std::vector<std::uint32_t> cyc;
        std::size_t k = stack.size();
        while (k-- > 0) {
          cyc.push_back(stack[k].first);
          if (stack[k].first == w) break;
        }
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
      if (color[w] == 0) {
        color[w] = 1;
        stack.emplace_back(w, 0);
      }
    } else {
      color[v] = 2;
      stack.pop_back();
    }
  }
  return {};
}

}  // namespace

SnVerdict is_strongly_normalizing(const Term& t, std::uint64_t fuel) {
  SnVerdict v;
  if (t.beta_normal()) {
    v.status = SnVerdict::Status::Yes;
    v.explored = 1;
    return v;
  }
  ReductGraph g = explore_reducts(t, Reduction::Beta, fuel);
  v.explored = g.nodes.size();
  auto cyc = find_cycle(g);
  if (!cyc.empty()) {
    v.status = SnVerdict::Status::No;
    for (auto i : cyc) v.cycle.push_back(g.nodes[i]);
    return v;
  }
  v.status = g.complete ? SnVerdict::Status::Yes : SnVerdict::Status::Unknown;
  return v;
}

bool is_sn(const Term& t, std::uint64_t fuel) {
  return is_strongly_normalizing(t, fuel).status == SnVerdict::Status::Yes;
}

TermClass term_class(const Term& t) {
  TermClass c;
  c.value = t.is_lam();
  c.neutral = !c.value;
  c.beta_normal = t.beta_normal();
  c.nn = c.neutral && !c.beta_normal;
  return c;
}

Tri equiv(const Term& a, const Term& b, Reduction gamma, std::uint64_t fuel) {
  auto na = normalize(a, gamma, fuel);
  if (!na.result) return Tri::Unknown;
  auto nb = normalize(b, gamma, fuel);
  if (!nb.result) return Tri::Unknown;
  return *na.result == *nb.result ? Tri::True : Tri::False;
}

std::vector<Term> values_of(const Term& t, std::uint64_t fuel) {
  ReductGraph g = explore_reducts(t, Reduction::Beta, fuel);
  if (!g.complete || !find_cycle(g).empty())
    throw Error(ErrorCode::NotSN, "values_of: term is not strongly normalizing");
  std::vector<Term> out;
  for (const Term& n : g.nodes) {
    if (n.is_lam()) out.push_back(n);
  }
  return out;
}

}  // namespace sflab
