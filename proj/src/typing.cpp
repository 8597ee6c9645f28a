#include "sflab/typing.hpp"

#include <cctype>
#include <deque>
#include <unordered_set>

#include "sflab/error.hpp"

namespace sflab {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Id: return "id";
    case Rule::ArrI: return "arr_i";
    case Rule::ArrE: return "arr_e";
    case Rule::AllI: return "all_i";
    case Rule::AllE: return "all_e";
  }
  return "?";
}

std::set<std::string> context_free_type_vars(const Context& ctx) {
  std::set<std::string> out;
  for (const auto& [x, t] : ctx) {
    auto fv = type_free_vars(t);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

namespace {

bool same_context(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  auto ib = b.begin();
  for (const auto& [x, t] : a) {
    if (ib->first != x || !(ib->second == t)) return false;
    ++ib;
  }
  return true;
}

Derivation node(Rule r, const Context& ctx, const Term& m, const Ty& t,
                std::vector<Derivation> children = {}, Ty inst = Ty()) {
  Derivation d;
  d.rule = r;
  d.concl = {ctx, m, t};
  d.inst = std::move(inst);
  d.children = std::move(children);
  return d;
}

std::string local_error(const Derivation& d) {
  const Judgement& j = d.concl;
  const auto& ch = d.children;
  switch (d.rule) {
    case Rule::Id: {
      if (!ch.empty()) return "id has premises";
      if (!j.term.is_free()) return "id term is not a variable";
      auto it = j.ctx.find(j.term.name());
      if (it == j.ctx.end()) return "variable not declared";
      if (!(it->second == j.ty)) return "declared type differs";
      return "";
    }
    case Rule::ArrI: {
      if (ch.size() != 1) return "arr_i needs one premise";
      if (!j.term.is_lam()) return "arr_i term is not an abstraction";
      if (!j.ty.is_arrow()) return "arr_i type is not an arrow";
      const Judgement& p = ch[0].concl;
      if (p.ctx.size() != j.ctx.size() + 1) return "premise context must add one variable";
      std::string x;
      for (const auto& [y, t] : p.ctx) {
        auto it = j.ctx.find(y);
        if (it == j.ctx.end()) {
          x = y;
          if (!(t == j.ty.dom())) return "bound variable type differs from domain";
        } else if (!(it->second == t)) {
          return "premise context differs";
        }
      }
      if (x.empty()) return "premise context must add one variable";
      if (occurs_free(j.term, x)) return "abstracted variable occurs free";
      if (!(p.term == open_with(j.term.body(), x))) return "premise term mismatch";
      if (!(p.ty == j.ty.cod())) return "premise type differs from codomain";
      return "";
    }
    case Rule::ArrE: {
      if (ch.size() != 2) return "arr_e needs two premises";
      if (!j.term.is_app()) return "arr_e term is not an application";
      const Judgement& f = ch[0].concl;
      const Judgement& a = ch[1].concl;
      if (!same_context(f.ctx, j.ctx) || !same_context(a.ctx, j.ctx)) return "context mismatch";
      if (!(f.term == j.term.fun()) || !(a.term == j.term.arg())) return "premise term mismatch";
      if (!f.ty.is_arrow()) return "function premise type is not an arrow";
      if (!(f.ty.dom() == a.ty)) return "argument type mismatch";
      if (!(f.ty.cod() == j.ty)) return "result type mismatch";
      return "";
    }
    case Rule::AllI: {
      if (ch.size() != 1) return "all_i needs one premise";
      if (!j.ty.is_forall()) return "all_i type is not a forall";
      const Judgement& p = ch[0].concl;
      if (!same_context(p.ctx, j.ctx)) return "context mismatch";
      if (!(p.term == j.term)) return "premise term mismatch";
      if (!(p.ty == j.ty.body())) return "premise type differs from body";
      if (context_free_type_vars(j.ctx).count(j.ty.name())) return "not bindable";
      return "";
    }
    case Rule::AllE: {
      if (ch.size() != 1) return "all_e needs one premise";
      if (!d.inst) return "all_e without instantiation";
      const Judgement& p = ch[0].concl;
      if (!same_context(p.ctx, j.ctx)) return "context mismatch";
      if (!(p.term == j.term)) return "premise term mismatch";
      if (!p.ty.is_forall()) return "premise type is not a forall";
      if (!(type_subst(p.ty.body(), p.ty.name(), d.inst) == j.ty)) return "instantiation mismatch";
      return "";
    }
  }
  return "unknown rule";
}

bool check_rec(const Derivation& d, std::vector<std::size_t>& path, DerivationCheck& out) {
  std::string err = local_error(d);
  if (!err.empty()) {
    out.ok = false;
    out.rule = rule_name(d.rule);
    out.path = path;
    out.message = err;
    return false;
  }
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    path.push_back(i);
    if (!check_rec(d.children[i], path, out)) return false;
    path.pop_back();
  }
  return true;
}

// --------------------------------------------------------------- checking

class PositiveChecker {
 public:
  PositiveChecker(const Context& ctx, const Term& m, const Ty& sigma) {
    tnames_.reserve(context_free_type_vars(ctx));
    tnames_.reserve(type_all_vars(sigma));
    for (const auto& [x, t] : ctx) {
      tnames_.reserve(type_all_vars(t));
      xnames_.reserve(x);
    }
    xnames_.reserve(free_names(m));
  }

  std::optional<Derivation> check(const Context& ctx, const Term& m, const Ty& sigma) {
    if (m.is_lam()) {
      if (sigma.is_forall()) return generalize(ctx, m, sigma);
      if (!sigma.is_arrow()) return std::nullopt;
      std::string x = xnames_.fresh(m.name().empty() ? "x" : m.name());
      Context inner = ctx;
      inner[x] = sigma.dom();
      Term body = open_with(m.body(), x);
      auto d = check(inner, body, sigma.cod());
      if (!d) return std::nullopt;
      return node(Rule::ArrI, ctx, m, sigma, {std::move(*d)});
    }
    auto head = neutral(ctx, m);
    if (!head) return std::nullopt;
    return match(ctx, m, std::move(*head), sigma);
  }

 private:
  std::optional<Derivation> generalize(const Context& ctx, const Term& m, const Ty& sigma) {
    std::string v = tnames_.fresh(sigma.name());
    Ty body = type_subst(sigma.body(), sigma.name(), Ty::var(v));
    auto d = check(ctx, m, body);
    if (!d) return std::nullopt;
    return node(Rule::AllI, ctx, m, Ty::forall(v, body), {std::move(*d)});
  }

  // Neutral term typed by its head's declaration; strips goal quantifiers
  // until the spine type matches.
  std::optional<Derivation> match(const Context& ctx, const Term& m, Derivation head,
                                  const Ty& sigma) {
    if (head.concl.ty == sigma) return head;
    if (!sigma.is_forall()) return std::nullopt;
    std::string v = tnames_.fresh(sigma.name());
    Ty body = type_subst(sigma.body(), sigma.name(), Ty::var(v));
    auto d = match(ctx, m, std::move(head), body);
    if (!d) return std::nullopt;
    return node(Rule::AllI, ctx, m, Ty::forall(v, body), {std::move(*d)});
  }

  std::optional<Derivation> neutral(const Context& ctx, const Term& m) {
    std::vector<Term> args;
    Term h = spine(m, &args);
    if (!h.is_free()) return std::nullopt;
    auto it = ctx.find(h.name());
    if (it == ctx.end()) return std::nullopt;
    Derivation d = node(Rule::Id, ctx, h, it->second);
    Term cur = h;
    Ty ty = it->second;
    for (const Term& a : args) {
      if (!ty.is_arrow()) return std::nullopt;
      auto da = check(ctx, a, ty.dom());
      if (!da) return std::nullopt;
      cur = Term::app(cur, a);
      Ty res = ty.cod();
      d = node(Rule::ArrE, ctx, cur, res, {std::move(d), std::move(*da)});
      ty = res;
    }
    return d;
  }

  FreshNames tnames_;
  FreshNames xnames_;
};

// ----------------------------------------------------------- coercions

void weaken(Derivation& d, const std::string& x, const Ty& t) {
  d.concl.ctx[x] = t;
  for (auto& c : d.children) weaken(c, x, t);
}

// Path of dom/cod steps (ignoring quantifiers) to the first free occurrence
// of `v` in t.
bool find_leaf(const Ty& t, const std::string& v, std::vector<bool>& path) {
  switch (t.kind()) {
    case Ty::Kind::Var: return t.name() == v;
    case Ty::Kind::Forall: return t.name() != v && find_leaf(t.body(), v, path);
    case Ty::Kind::Arrow:
      path.push_back(false);
      if (find_leaf(t.dom(), v, path)) return true;
      path.back() = true;
      if (find_leaf(t.cod(), v, path)) return true;
      path.pop_back();
      return false;
  }
  return false;
}

std::optional<Ty> leaf_at(const Ty& t, const std::vector<bool>& path) {
  Ty cur = t;
  for (bool cod : path) {
    while (cur.is_forall()) cur = cur.body();
    if (!cur.is_arrow()) return std::nullopt;
    cur = cod ? cur.cod() : cur.dom();
  }
  while (cur.is_forall()) cur = cur.body();
  if (!cur.is_var()) return std::nullopt;
  return cur;
}

class Coercer {
 public:
  explicit Coercer(FreshNames xnames) : xnames_(std::move(xnames)) {}

  // From ctx |- e : a (derivation de) builds ctx |- E : b, E the expansion of
  // e along `shape`.
  std::optional<Derivation> coerce(const Context& ctx, const Term& e, Derivation de,
                                   const Ty& a, const Ty& b, const Ty& shape) {
    if (b.is_forall()) {
      auto d = coerce(ctx, e, std::move(de), a, b.body(), shape);
      if (!d) return std::nullopt;
      Term t = d->concl.term;
      return node(Rule::AllI, ctx, t, b, {std::move(*d)});
    }
    if (a.is_forall()) {
      std::vector<bool> path;
      Ty inst = Ty::var(a.name());
      if (find_leaf(a.body(), a.name(), path)) {
        if (auto l = leaf_at(b, path)) inst = *l;
      }
      Ty a2 = type_subst(a.body(), a.name(), inst);
      Derivation d = node(Rule::AllE, ctx, e, a2, {std::move(de)}, inst);
      return coerce(ctx, e, std::move(d), a2, b, shape);
    }
    if (shape.is_var()) {
      if (!(a == b)) return std::nullopt;
      return de;
    }
    if (!a.is_arrow() || !b.is_arrow() || !shape.is_arrow()) return std::nullopt;
    std::string y = xnames_.fresh("y");
    Context inner = ctx;
    inner[y] = b.dom();
    Term ty = Term::free(y);
    auto darg = coerce(inner, ty, node(Rule::Id, inner, ty, b.dom()), b.dom(), a.dom(),
                       shape.dom());
    if (!darg) return std::nullopt;
    weaken(de, y, b.dom());
    Term app = Term::app(e, darg->concl.term);
    Derivation dapp = node(Rule::ArrE, inner, app, a.cod(), {std::move(de), std::move(*darg)});
    auto dres = coerce(inner, app, std::move(dapp), a.cod(), b.cod(), shape.cod());
    if (!dres) return std::nullopt;
    Term lam = abstract(y, dres->concl.term);
    return node(Rule::ArrI, ctx, lam, Ty::arrow(b.dom(), b.cod()), {std::move(*dres)});
  }

 private:
  FreshNames xnames_;
};

void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace

DerivationCheck check_derivation(const Derivation& d) {
  DerivationCheck out;
  std::vector<std::size_t> path;
  check_rec(d, path, out);
  return out;
}

bool contains_rule(const Derivation& d, Rule r) {
  if (d.rule == r) return true;
  for (const auto& c : d.children) {
    if (contains_rule(c, r)) return true;
  }
  return false;
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& c : d.children) n += derivation_size(c);
  return n;
}

std::optional<Derivation> check_positive_unchecked(const Context& ctx, const Term& m,
                                                   const Ty& sigma) {
  require(m.beta_normal(), ErrorCode::NotNormal, "check_positive: term is not beta-normal");
  PositiveChecker pc(ctx, m, sigma);
  return pc.check(ctx, m, sigma);
}

std::optional<Derivation> check_positive(const Context& ctx, const Term& m, const Ty& sigma) {
  require(is_forall_plus2(sigma), ErrorCode::WrongClass, "check_positive: goal not in forall+2");
  for (const auto& [x, t] : ctx) {
    require(is_forall_minus2(t), ErrorCode::WrongClass,
            "check_positive: declaration of " + x + " not in forall-2");
  }
  return check_positive_unchecked(ctx, m, sigma);
}

std::optional<Derivation> check_simple(const Context& ctx, const Term& m, const Ty& sigma) {
  require(is_simple(sigma), ErrorCode::WrongClass, "check_simple: goal not simple");
  for (const auto& [x, t] : ctx) {
    require(is_simple(t), ErrorCode::WrongClass, "check_simple: declaration of " + x + " not simple");
  }
  return check_positive_unchecked(ctx, m, sigma);
}

Context gamma_inf_context(const Term& m) {
  Context ctx;
  for (const std::string& x : free_names(m)) {
    bool ok = x.size() >= 2 && x[0] == 'x' && x.size() <= 19;
    for (std::size_t i = 1; ok && i < x.size(); ++i) ok = std::isdigit(static_cast<unsigned char>(x[i]));
    if (ok && x.size() > 2 && x[1] == '0') ok = false;
    if (!ok) throw Error(ErrorCode::UnindexedFreeVariable, "free variable " + x + " has no index");
    ctx[x] = gamma_inf_decl(std::stoull(x.substr(1)));
  }
  return ctx;
}

std::optional<Derivation> gamma_inf_derive(const Term& m, const Ty& sigma) {
  require(is_forall_plus2(sigma), ErrorCode::WrongClass, "gamma_inf_check: goal not in forall+2");
  return check_positive_unchecked(gamma_inf_context(m), m, sigma);
}

bool gamma_inf_check(const Term& m, const Ty& sigma) {
  return gamma_inf_derive(m, sigma).has_value();
}

std::optional<Derivation> derive_coercion(const Ty& a, const Ty& b) {
  FreshNames tn;
  tn.reserve(type_free_vars(a));
  tn.reserve(type_free_vars(b));
  Ty a2 = rename_bound_apart(a, tn);
  Ty b2 = rename_bound_apart(b, tn);
  Context ctx;
  FreshNames xn;
  std::string x = xn.fresh("x");
  Context inner{{x, a2}};
  Term tx = Term::free(x);
  Coercer c(xn);
  auto body = c.coerce(inner, tx, node(Rule::Id, inner, tx, a2), a2, b2, skeleton(a2));
  if (!body) return std::nullopt;
  Term lam = abstract(x, body->concl.term);
  return node(Rule::ArrI, ctx, lam, Ty::arrow(a2, b2), {std::move(*body)});
}

Derivation derive_id_plus(const Ty& sigma) {
  require(is_forall_plus2(sigma), ErrorCode::WrongClass, "derive_id_plus: not in forall+2");
  auto d = derive_coercion(sigma, translate_plus(sigma));
  require(d.has_value(), ErrorCode::InvalidDerivation, "derive_id_plus: construction failed");
  return std::move(*d);
}

Derivation derive_id_minus(const Ty& sigma) {
  require(is_forall_minus2(sigma), ErrorCode::WrongClass, "derive_id_minus: not in forall-2");
  auto d = derive_coercion(translate_minus(sigma), sigma);
  require(d.has_value(), ErrorCode::InvalidDerivation, "derive_id_minus: construction failed");
  return std::move(*d);
}

Derivation derive_id_trivial(const Ty& sigma) {
  require(is_forall_trivial(sigma), ErrorCode::WrongClass, "derive_id_trivial: not forall-trivial");
  std::optional<Derivation> d;
  if (is_forall_plus2(sigma)) {
    d = derive_coercion(translate_plus(sigma), sigma);
  } else if (is_forall_minus2(sigma)) {
    d = derive_coercion(sigma, translate_minus(sigma));
  } else {
    throw Error(ErrorCode::WrongClass, "derive_id_trivial: not in forall+2 or forall-2");
  }
  require(d.has_value(), ErrorCode::InvalidDerivation, "derive_id_trivial: construction failed");
  return std::move(*d);
}

Derivation skeleton_derivation(const Derivation& d) {
  if (d.rule == Rule::AllE) throw Error(ErrorCode::ContainsAllE, "derivation uses all_e");
  if (d.rule == Rule::AllI) return skeleton_derivation(d.children[0]);
  Derivation out;
  out.rule = d.rule;
  out.concl.term = d.concl.term;
  out.concl.ty = skeleton(d.concl.ty);
  for (const auto& [x, t] : d.concl.ctx) out.concl.ctx[x] = skeleton(t);
  for (const auto& c : d.children) out.children.push_back(skeleton_derivation(c));
  return out;
}

// ---------------------------------------------------------------- eta

namespace {

bool mentions(const Term& t, std::uint32_t k) {
  if (t.loose() <= k) return false;
  switch (t.kind()) {
    case Term::Kind::Bound: return t.index() == k;
    case Term::Kind::Lam: return mentions(t.body(), k + 1);
    case Term::Kind::App: return mentions(t.fun(), k) || mentions(t.arg(), k);
    default: return false;
  }
}

// b = x P1..Pk u1..um with ui the last m binders, none of them in the prefix.
std::optional<Term> eta_x_prefix(const Term& b, std::uint32_t m, const std::string& x) {
  std::vector<Term> args;
  Term h = spine(b, &args);
  if (!h.is_free() || h.name() != x || args.size() < m) return std::nullopt;
  std::size_t k = args.size() - m;
  for (std::uint32_t i = 0; i < m; ++i) {
    const Term& a = args[k + i];
    if (!a.is_bound() || a.index() != m - 1 - i) return std::nullopt;
  }
  std::vector<Term> pre(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(k));
  Term prefix = sflab::apply(h, pre);
  for (std::uint32_t i = 0; i < m; ++i) {
    if (mentions(prefix, i)) return std::nullopt;
  }
  return shift(prefix, -static_cast<int>(m), 0);
}

void eta_x_rec(const Term& t, const std::string& x, std::vector<Term>& out) {
  if (t.is_lam()) {
    std::vector<std::string> hints;
    Term b = t;
    while (b.is_lam()) {
      hints.push_back(b.name());
      b = b.body();
    }
    auto n = static_cast<std::uint32_t>(hints.size());
    auto wrap = [&](std::size_t count, Term body) {
      for (std::size_t i = count; i-- > 0;) body = Term::lam(hints[i], body);
      return body;
    };
    for (std::uint32_t m = n; m >= 1; --m) {
      if (auto r = eta_x_prefix(b, m, x)) {
        out.push_back(wrap(n - m, *r));
        break;
      }
    }
    std::vector<Term> inner;
    eta_x_rec(b, x, inner);
    for (const Term& r : inner) out.push_back(wrap(n, r));
  } else if (t.is_app()) {
    std::vector<Term> inner;
    eta_x_rec(t.fun(), x, inner);
    for (const Term& r : inner) out.push_back(Term::app(r, t.arg()));
    inner.clear();
    eta_x_rec(t.arg(), x, inner);
    for (const Term& r : inner) out.push_back(Term::app(t.fun(), r));
  }
}

// Eta-expansions at maximal variable-headed neutral subterms.
void expansions(const Term& t, bool applied, std::vector<Term>& out) {
  if (t.is_lam()) {
    std::vector<Term> inner;
    expansions(t.body(), false, inner);
    for (const Term& r : inner) out.push_back(Term::lam(t.name(), r));
    return;
  }
  if (!applied && spine(t, nullptr).is_var()) {
    out.push_back(Term::lam("u", Term::app(shift(t, 1), Term::bound(0))));
  }
  if (t.is_app()) {
    std::vector<Term> inner;
    expansions(t.fun(), true, inner);
    for (const Term& r : inner) out.push_back(Term::app(r, t.arg()));
    inner.clear();
    expansions(t.arg(), false, inner);
    for (const Term& r : inner) out.push_back(Term::app(t.fun(), r));
  }
}

}  // namespace

std::vector<Term> eta_x_reducts(const Term& m, const std::string& x) {
  std::vector<Term> raw;
  eta_x_rec(m, x, raw);
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  for (const Term& t : raw) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

std::optional<EtaRetype> eta_retype(const Term& m, const Ty& sigma, std::size_t bound,
                                    const Context& ctx) {
  const std::uint32_t cap = m.size() + 4 * static_cast<std::uint32_t>(bound) + 4;
  std::deque<std::pair<Term, std::size_t>> queue{{m, 0}};
  std::unordered_set<Term> seen{m};
  while (!queue.empty()) {
    auto [t, dist] = queue.front();
    queue.pop_front();
    if (auto d = check_positive_unchecked(ctx, t, sigma)) return EtaRetype{t, std::move(*d), dist};
    if (dist >= bound) continue;
    std::vector<Term> next;
    expansions(t, false, next);
    for (const Term& r : reducts(t, Reduction::Eta)) next.push_back(r);
    for (const Term& r : next) {
      if (r.size() > cap || !r.beta_normal()) continue;
      if (seen.insert(r).second) queue.emplace_back(r, dist + 1);
    }
  }
  return std::nullopt;
}

}  // namespace sflab
