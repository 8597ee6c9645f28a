#include <algorithm>
#include <functional>

#include "sflab/error.hpp"
#include "universe_data.hpp"

namespace sflab {

namespace {

constexpr std::size_t kMaxDecompositions = 4096;

using Path = std::vector<std::uint8_t>;

void nn_positions(const Term& t, Path& here, std::vector<std::pair<Path, Term>>& out) {
  if (is_nn(t) && t.loose() == 0) out.emplace_back(here, t);
  if (t.is_lam()) {
    here.push_back(0);
    nn_positions(t.body(), here, out);
    here.pop_back();
  } else if (t.is_app()) {
    here.push_back(0);
    nn_positions(t.fun(), here, out);
    here.back() = 1;
    nn_positions(t.arg(), here, out);
    here.pop_back();
  }
}

bool is_prefix(const Path& a, const Path& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

Term replace_paths(const Term& t, const std::vector<std::pair<const Path*, Term>>& subs,
                   std::size_t depth) {
  std::vector<std::pair<const Path*, Term>> left, right;
  for (const auto& s : subs) {
    if (s.first->size() == depth) return s.second;
    ((*s.first)[depth] == 0 ? left : right).push_back(s);
  }
  if (t.is_lam()) return Term::lam(t.name(), replace_paths(t.body(), left, depth + 1));
  Term f = left.empty() ? t.fun() : replace_paths(t.fun(), left, depth + 1);
  Term a = right.empty() ? t.arg() : replace_paths(t.arg(), right, depth + 1);
  return Term::app(f, a);
}

void minimize(std::vector<Bits>& sets) {
  std::sort(sets.begin(), sets.end(), [](const Bits& a, const Bits& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<Bits> keep;
  for (const Bits& s : sets) {
    bool dominated = false;
    for (const Bits& k : keep) {
      if (k.is_subset_of(s)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) keep.push_back(s);
  }
  sets = std::move(keep);
}

// Requirements of the decomposition clause for one term: for each antichain
// of eligible positions, identical fillers grouped, the set of all
// simultaneous one-step reducts.
std::vector<Bits> decomposition_needs(const Universe& u, const Term& t, bool& capped) {
  std::vector<std::pair<Path, Term>> pos;
  Path here;
  nn_positions(t, here, pos);
  std::vector<Bits> out;
  std::vector<std::size_t> chosen;
  std::size_t visited = 0;

  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (visited >= kMaxDecompositions) {
      capped = true;
      return;
    }
    if (!chosen.empty()) {
      ++visited;
      // group identical fillers
      std::vector<std::vector<std::size_t>> groups;
      for (std::size_t c : chosen) {
        bool placed = false;
        for (auto& g : groups) {
          if (pos[g[0]].second == pos[c].second) {
            g.push_back(c);
            placed = true;
            break;
          }
        }
        if (!placed) groups.push_back({c});
      }
      std::vector<std::vector<Term>> options;
      for (const auto& g : groups) options.push_back(reducts(pos[g[0]].second, Reduction::Beta));
      Bits need(u.size());
      bool ok = true;
      std::vector<std::size_t> pick(groups.size(), 0);
      while (ok) {
        std::vector<std::pair<const Path*, Term>> subs;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
          for (std::size_t c : groups[gi]) subs.emplace_back(&pos[c].first, options[gi][pick[gi]]);
        }
        auto id = u.find(replace_paths(t, subs, 0));
        if (!id) {
          ok = false;
          break;
        }
        need.set(*id);
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
      if (ok) out.push_back(std::move(need));
    }
    for (std::size_t i = from; i < pos.size(); ++i) {
      bool nested = false;
      for (std::size_t c : chosen) {
        if (is_prefix(pos[c].first, pos[i].first) || is_prefix(pos[i].first, pos[c].first)) {
          nested = true;
          break;
        }
      }
      if (nested) continue;
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  minimize(out);
  return out;
}

int rules_slot(Semantics k) {
  switch (k) {
    case Semantics::CR: return 0;
    case Semantics::CR1: return 1;
    case Semantics::CR2: return 2;
    default: return -1;
  }
}

Bits down_closure(const Universe& u, const Bits& s) {
  Bits out(u.size());
  for (auto i = s.find_first(); i != Bits::npos; i = s.find_next(i)) out |= u.reach(i);
  return out;
}

void require_sn(const Universe& u, Semantics kind) {
  if (!u.all_sn()) {
    throw Error(ErrorCode::NotSN, std::string(semantics_name(kind)) +
                                      " closure needs a strongly normalizing universe");
  }
}

bool rule_fires(const std::vector<Bits>& needs, const Bits& cur) {
  for (const Bits& n : needs) {
    if (n.is_subset_of(cur)) return true;
  }
  return false;
}

Bits horn_fixpoint(const Universe& u, const Bits& s, Semantics kind, bool parallel) {
  require_sn(u, kind);
  const ClosureRules& rules = closure_rules(u, kind);
  Bits cur = down_closure(u, s);
  const auto n = static_cast<std::int64_t>(u.size());
  std::vector<std::uint8_t> add(u.size());
  for (;;) {
    std::fill(add.begin(), add.end(), 0);
#pragma omp parallel for schedule(dynamic, 32) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      if (!cur.test(i) && rule_fires(rules.need[i], cur)) add[i] = 1;
    }
    bool changed = false;
    for (std::int64_t i = 0; i < n; ++i) {
      if (add[i]) {
        cur.set(i);
        changed = true;
      }
    }
    if (!changed) return cur;
  }
}

Bits stable_closure(const Universe& u, const Bits& s, Semantics kind) {
  const std::size_t n = u.size();
  Bits out(n);
  switch (kind) {
    case Semantics::SBeta:
    case Semantics::SBetaEta: {
      if (kind == Semantics::SBetaEta && !u.eta_closed()) {
        throw Error(ErrorCode::WrongClass, "universe is not eta-closed");
      }
      std::vector<std::uint8_t> cls(n, 0);
      for (auto i = s.find_first(); i != Bits::npos; i = s.find_next(i)) {
        cls[kind == Semantics::SBeta ? u.beta_class(i) : u.betaeta_class(i)] = 1;
      }
      for (std::uint32_t i = 0; i < n; ++i) {
        if (cls[kind == Semantics::SBeta ? u.beta_class(i) : u.betaeta_class(i)]) out.set(i);
      }
      return out;
    }
    case Semantics::SBetaSat: {
      out = s;
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::uint32_t i = 0; i < n; ++i) {
          if (out.test(i)) continue;
          auto w = u.wh_succ(i);
          if (w && out.test(*w)) {
            out.set(i);
            changed = true;
          }
        }
      }
      return out;
    }
    case Semantics::SBetaDown: return down_closure(u, s);
    default: break;
  }
  return out;
}

void check_in_universe(const Universe& u, const Bits& s) {
  if (s.size() != u.size()) throw Error(ErrorCode::OutOfUniverse, "set does not match universe");
}

}  // namespace

const ClosureRules& closure_rules(const Universe& u, Semantics kind) {
  const auto& d = universe_data(u);
  int slot = rules_slot(kind);
  if (slot < 0) throw Error(ErrorCode::WrongClass, "no clause rules for this semantics");
  std::call_once(d.rules_once[slot], [&] {
    ClosureRules& r = d.rules[slot];
    const std::size_t n = u.size();
    r.need.assign(n, {});
    std::vector<std::uint8_t> capped(n, 0);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < n; ++i) {
      const auto id = static_cast<std::uint32_t>(i);
      if (kind == Semantics::CR2) {
        bool c = false;
        r.need[i] = decomposition_needs(u, u.term(id), c);
        capped[i] = c;
        continue;
      }
      bool eligible = kind == Semantics::CR ? u.neutral(id) : u.nn(id);
      if (!eligible) continue;
      Bits b(n);
      for (std::uint32_t j : u.beta_succ(id)) b.set(j);
      r.need[i].push_back(std::move(b));
    }
    r.capped = std::any_of(capped.begin(), capped.end(), [](std::uint8_t c) { return c != 0; });
  });
  return d.rules[slot];
}

Bits close_bits(const Universe& u, const Bits& s, Semantics kind) {
  check_in_universe(u, s);
  if (over_sn(kind)) return horn_fixpoint(u, s, kind, true);
  return stable_closure(u, s, kind);
}

Bits close_bits_serial(const Universe& u, const Bits& s, Semantics kind) {
  check_in_universe(u, s);
  if (over_sn(kind)) return horn_fixpoint(u, s, kind, false);
  return stable_closure(u, s, kind);
}

Bits close_by_characterization(const Universe& u, const Bits& s, Semantics kind) {
  check_in_universe(u, s);
  const std::size_t n = u.size();
  Bits out(n);
  switch (kind) {
    case Semantics::CR1:
      require_sn(u, kind);
      for (auto p = s.find_first(); p != Bits::npos; p = s.find_next(p)) {
        for (std::uint32_t q = 0; q < n; ++q) {
          if (out.test(q)) continue;
          const Bits& vq = u.values(q);
          bool below = u.reach(p).test(q) ||
                       (vq.any() ? vq.is_subset_of(u.values(p))
                                 : u.beta_class(q) == u.beta_class(p));
          if (below) out.set(q);
        }
      }
      return out;
    case Semantics::CR2: {
      require_sn(u, kind);
      const auto& d = universe_data(u);
      std::call_once(d.star_once, [&] { d.star = transitive_closure(triangle_matrix(u)); });
      for (std::uint32_t q = 0; q < n; ++q) {
        if (d.star.rows[q].intersects(s)) out.set(q);
      }
      return out;
    }
    case Semantics::CR: {
      require_sn(u, kind);
      Bits down = down_closure(u, s);
      std::vector<std::int8_t> memo(n, -1);
      std::function<bool(std::uint32_t)> in = [&](std::uint32_t q) -> bool {
        if (memo[q] >= 0) return memo[q];
        bool r = down.test(q);
        if (!r && u.neutral(q)) {
          r = true;
          for (std::uint32_t y : u.beta_succ(q)) r = r && in(y);
        }
        memo[q] = r;
        return r;
      };
      for (std::uint32_t q = 0; q < n; ++q) {
        if (in(q)) out.set(q);
      }
      return out;
    }
    default: return stable_closure(u, s, kind);
  }
}

TermSet close(const TermSet& s) {
  TermSet out = s;
  out.members = close_bits(s.u, s.members, s.kind);
  out.closed = true;
  return out;
}

TermSet close(const std::vector<Term>& s, Semantics kind, const Universe& u) {
  return close(make_set(u, s, kind));
}

}  // namespace sflab
