#include "sflab/dinat.hpp"

#include <algorithm>
#include <map>

#include "sflab/error.hpp"

namespace sflab {

namespace {

std::map<std::string, std::size_t> positions(const std::set<std::string>& vars) {
  std::map<std::string, std::size_t> out;
  std::size_t u = 0;
  for (const std::string& v : vars) out[v] = u++;
  return out;
}

Ty split_rec(const Ty& t, bool positive, char neg, char pos,
             const std::map<std::string, std::size_t>& index, std::set<std::string>& bound) {
  switch (t.kind()) {
    case Ty::Kind::Var: {
      if (bound.count(t.name())) return t;
      auto it = index.find(t.name());
      if (it == index.end()) return t;
      return Ty::var(split_name(positive ? pos : neg, it->second));
    }
    case Ty::Kind::Arrow:
      return Ty::arrow(split_rec(t.dom(), !positive, neg, pos, index, bound),
                       split_rec(t.cod(), positive, neg, pos, index, bound));
    case Ty::Kind::Forall: {
      bool fresh = bound.insert(t.name()).second;
      Ty body = split_rec(t.body(), positive, neg, pos, index, bound);
      if (fresh) bound.erase(t.name());
      return Ty::forall(t.name(), body);
    }
  }
  return t;
}

Term identity() { return Term::lam("x", Term::bound(0)); }

Term hk_rec(const Ty& t, bool h, const std::map<std::string, std::size_t>& index) {
  switch (t.kind()) {
    case Ty::Kind::Var: {
      if (!h) return identity();
      auto it = index.find(t.name());
      if (it == index.end()) return identity();
      return Term::free(indeterminate_name(it->second));
    }
    case Ty::Kind::Arrow:
      return arrow_term(hk_rec(t.dom(), !h, index), hk_rec(t.cod(), h, index));
    case Ty::Kind::Forall: return hk_rec(t.body(), h, index);
  }
  return identity();
}

Term nf(const Term& t) {
  auto r = normalize(t, Reduction::Beta, kDefaultFuel);
  if (!r.result) throw Error(ErrorCode::FuelExhausted, "normal form not reached");
  return *r.result;
}

}  // namespace

std::string split_name(char side, std::size_t u) { return std::string(1, side) + std::to_string(u); }
std::string indeterminate_name(std::size_t u) { return "f" + std::to_string(u); }

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::XX: return "XX";
    case Flavor::XY: return "XY";
    case Flavor::YX: return "YX";
    case Flavor::YY: return "YY";
  }
  return "?";
}

Ty split_type(const Ty& sigma, Flavor f) {
  const char* n = flavor_name(f);
  std::set<std::string> bound;
  return split_rec(sigma, true, n[0], n[1], positions(type_free_vars(sigma)), bound);
}

Term h_term(const Ty& sigma, const std::set<std::string>& z) {
  return hk_rec(sigma, true, positions(z));
}

Term k_term(const Ty& sigma, const std::set<std::string>& z) {
  return hk_rec(sigma, false, positions(z));
}

std::vector<HKJudgement> hk_typings(const Ty& sigma) {
  if (!is_simple(sigma)) throw Error(ErrorCode::WrongClass, "H/K typings need a simple type");
  Context ctx;
  for (const auto& [v, u] : positions(type_free_vars(sigma))) {
    ctx[indeterminate_name(u)] = Ty::arrow(Ty::var(split_name('X', u)), Ty::var(split_name('Y', u)));
  }
  const Term h = nf(h_term(sigma)), k = nf(k_term(sigma));
  struct Row {
    const char* label;
    const Term* term;
    Flavor from, to;
  };
  const Row rows[] = {{"H: XX -> XY", &h, Flavor::XX, Flavor::XY},
                      {"H: YX -> YY", &h, Flavor::YX, Flavor::YY},
                      {"K: YX -> XX", &k, Flavor::YX, Flavor::XX},
                      {"K: YY -> XY", &k, Flavor::YY, Flavor::XY}};
  std::vector<HKJudgement> out;
  for (const Row& r : rows) {
    HKJudgement j;
    j.label = r.label;
    j.judgement = {ctx, *r.term, Ty::arrow(split_type(sigma, r.from), split_type(sigma, r.to))};
    j.derivation = check_simple(ctx, *r.term, j.judgement.ty);
    out.push_back(std::move(j));
  }
  return out;
}

DinatResult dinat_check(const Term& m, const Ty& sigma, Reduction gamma, std::uint64_t fuel) {
  if (!is_closed(m)) throw Error(ErrorCode::NotClosed, "dinaturality is checked on closed terms");
  if (gamma != Reduction::Beta && gamma != Reduction::BetaEta) {
    throw Error(ErrorCode::WrongClass, "gamma must be beta or betaeta");
  }
  DinatResult r;
  r.forall_plus2 = is_forall_plus2(sigma);
  if (r.forall_plus2) {
    r.checked = strip_foralls(translate_plus(sigma)).second;
  } else {
    FreshNames names(type_all_vars(sigma));
    r.checked = strip_foralls(rename_bound_apart(sigma, names)).second;
  }
  r.z = type_free_vars(r.checked);
  r.lhs = Term::app(h_term(r.checked, r.z), m);
  r.rhs = Term::app(k_term(r.checked, r.z), m);
  auto a = normalize(r.lhs, gamma, fuel);
  auto b = normalize(r.rhs, gamma, fuel);
  r.lhs_nf = a.result;
  r.rhs_nf = b.result;
  if (a.result && b.result) r.verdict = *a.result == *b.result ? Tri::True : Tri::False;
  return r;
}

}  // namespace sflab
