#include <algorithm>
#include <deque>
#include <numeric>

#include "sflab/error.hpp"
#include "universe_data.hpp"

namespace sflab {

const char* semantics_name(Semantics k) {
  switch (k) {
    case Semantics::SBeta: return "sbeta";
    case Semantics::SBetaEta: return "sbetaeta";
    case Semantics::SBetaSat: return "sbetasat";
    case Semantics::SBetaDown: return "sbetadown";
    case Semantics::CR: return "cr";
    case Semantics::CR1: return "cr1";
    case Semantics::CR2: return "cr2";
  }
  return "?";
}

Semantics parse_semantics(std::string_view text) {
  for (Semantics k : kAllSemantics) {
    if (text == semantics_name(k)) return k;
  }
  throw Error(ErrorCode::Syntax, "unknown semantics: " + std::string(text));
}

bool over_sn(Semantics k) {
  return k == Semantics::CR || k == Semantics::CR1 || k == Semantics::CR2;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

const Universe::Data& universe_data(const Universe& u) {
  if (!u.d_) throw Error(ErrorCode::OutOfUniverse, "empty universe handle");
  return *u.d_;
}

std::size_t Universe::size() const { return d_ ? d_->terms.size() : 0; }
const std::vector<Term>& Universe::terms() const { return universe_data(*this).terms; }
const Term& Universe::term(std::uint32_t i) const { return d_->terms[i]; }

std::optional<std::uint32_t> Universe::find(const Term& t) const {
  if (!d_) return std::nullopt;
  auto it = d_->index.find(t);
  if (it == d_->index.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Universe::id(const Term& t) const {
  auto i = find(t);
  if (!i) throw Error(ErrorCode::OutOfUniverse, "term not in universe: " + render(t));
  return *i;
}

const std::vector<Term>& Universe::seeds() const { return universe_data(*this).seeds; }
std::uint64_t Universe::fuel() const { return universe_data(*this).fuel; }
bool Universe::eta_closed() const { return d_ && d_->eta_closed; }
bool Universe::all_sn() const { return d_ && d_->all_sn; }
const std::vector<std::uint32_t>& Universe::beta_succ(std::uint32_t i) const { return d_->beta[i]; }
const std::vector<std::uint32_t>& Universe::eta_succ(std::uint32_t i) const { return d_->eta[i]; }

std::optional<std::uint32_t> Universe::wh_succ(std::uint32_t i) const {
  if (d_->wh[i] < 0) return std::nullopt;
  return static_cast<std::uint32_t>(d_->wh[i]);
}

bool Universe::nn(std::uint32_t i) const { return neutral(i) && !d_->beta[i].empty(); }
const Bits& Universe::reach(std::uint32_t i) const { return d_->reach[i]; }
const Bits& Universe::values(std::uint32_t i) const { return d_->values[i]; }
std::uint32_t Universe::beta_class(std::uint32_t i) const { return d_->beta_class[i]; }
std::uint32_t Universe::betaeta_class(std::uint32_t i) const { return d_->betaeta_class[i]; }

Bits Universe::bits_of(const std::vector<Term>& ts) const {
  Bits b(size());
  for (const Term& t : ts) b.set(id(t));
  return b;
}

std::vector<Term> Universe::terms_of(const Bits& b) const {
  std::vector<Term> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(term(i));
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Universe build_universe(const std::vector<Term>& seeds, std::uint64_t fuel,
                        const std::vector<Semantics>& kinds) {
  bool want_eta = false, want_sn = false;
  for (Semantics k : kinds) {
    want_eta |= k == Semantics::SBetaEta;
    want_sn |= over_sn(k);
  }
  if (want_sn) {
    for (const Term& s : seeds) {
      if (!is_sn(s)) throw Error(ErrorCode::NonSNSeed, "seed not strongly normalizing: " + render(s));
    }
  }
  auto d = std::make_shared<Universe::Data>();
  d->seeds = seeds;
  d->fuel = fuel;
  d->eta_closed = want_eta;

  auto add = [&](const Term& t) -> std::uint32_t {
    auto [it, fresh] = d->index.emplace(t, static_cast<std::uint32_t>(d->terms.size()));
    if (fresh) {
      if (d->terms.size() >= fuel || t.size() > kMaxTermSize) {
        throw Error(ErrorCode::FuelExhausted, "universe exceeds its fuel");
      }
      d->terms.push_back(t);
    }
    return it->second;
  };
  for (const Term& s : seeds) add(s);
  for (std::size_t i = 0; i < d->terms.size(); ++i) {
    Term t = d->terms[i];
    std::vector<std::uint32_t> b, e;
    for (const Term& r : reducts(t, Reduction::Beta)) b.push_back(add(r));
    if (want_eta) {
      for (const Term& r : reducts(t, Reduction::Eta)) e.push_back(add(r));
    }
    std::int64_t w = -1;
    if (auto r = wh_reduct(t)) w = add(*r);
    d->beta.push_back(std::move(b));
    d->eta.push_back(std::move(e));
    d->wh.push_back(w);
  }

  const std::size_t n = d->terms.size();
  d->reach.assign(n, Bits(n));
  d->values.assign(n, Bits(n));
  Bits lam(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d->terms[i].is_lam()) lam.set(i);
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < n; ++i) {
    Bits& r = d->reach[i];
    std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(i)};
    r.set(i);
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      for (std::uint32_t y : d->beta[x]) {
        if (!r.test(y)) {
          r.set(y);
          stack.push_back(y);
        }
      }
    }
    d->values[i] = r & lam;
  }

  // SN inside a finite reduct-closed set: no reachable cycle.
  std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on stack, 2 done-sn, 3 done-not
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{static_cast<std::uint32_t>(root), 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [x, k] = stack.back();
      if (k < d->beta[x].size()) {
        std::uint32_t y = d->beta[x][k++];
        if (state[y] == 0) {
          state[y] = 1;
          stack.emplace_back(y, 0);
        }
        continue;
      }
      bool ok = true;
      for (std::uint32_t y : d->beta[x]) ok &= state[y] == 2;
      state[x] = ok ? 2 : 3;
      stack.pop_back();
    }
  }
  d->all_sn = std::all_of(state.begin(), state.end(), [](std::uint8_t s) { return s == 2; });

  UnionFind ub(n), ue(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j : d->beta[i]) {
      ub.unite(i, j);
      ue.unite(i, j);
    }
    for (std::uint32_t j : d->eta[i]) ue.unite(i, j);
  }
  d->beta_class.resize(n);
  d->betaeta_class.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    d->beta_class[i] = ub.find(i);
    d->betaeta_class[i] = ue.find(i);
  }
  return Universe(std::move(d));
}

bool TermSet::contains(const Term& t) const {
  auto i = u.find(t);
  return i && members.test(*i);
}

TermSet make_set(const Universe& u, const std::vector<Term>& ts, Semantics kind) {
  TermSet s;
  s.u = u;
  s.members = u.bits_of(ts);
  s.kind = kind;
  return s;
}

Universe standard_universe(std::uint32_t max_size, const std::vector<Semantics>& kinds) {
  std::vector<Term> seeds;
  for (const Term& t : enumerate_terms(max_size, {"z"})) {
    if (is_sn(t)) seeds.push_back(t);
  }
  return build_universe(seeds, 1u << 20, kinds);
}

}  // namespace sflab
