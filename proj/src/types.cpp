#include "sflab/types.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_set>

#include "sflab/error.hpp"

namespace sflab {

Ty Ty::var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = name;
  return Ty(std::move(n));
}

Ty Ty::arrow(const Ty& dom, const Ty& cod) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->size = dom.size() + cod.size() + 1;
  n->a = dom;
  n->b = cod;
  return Ty(std::move(n));
}

Ty Ty::forall(const std::string& var, const Ty& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->name = var;
  n->size = body.size() + 1;
  n->a = body;
  return Ty(std::move(n));
}

namespace {

using Env = std::vector<std::string>;

int lookup(const Env& env, const std::string& n) {
  for (std::size_t k = env.size(); k-- > 0;) {
    if (env[k] == n) return static_cast<int>(env.size() - 1 - k);
  }
  return -1;
}

bool alpha_eq(const Ty& a, const Ty& b, Env& ea, Env& eb) {
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Ty::Kind::Var: {
      int ia = lookup(ea, a.name());
      int ib = lookup(eb, b.name());
      if (ia != ib) return false;
      return ia >= 0 || a.name() == b.name();
    }
    case Ty::Kind::Arrow:
      return alpha_eq(a.dom(), b.dom(), ea, eb) && alpha_eq(a.cod(), b.cod(), ea, eb);
    case Ty::Kind::Forall: {
      ea.push_back(a.name());
      eb.push_back(b.name());
      bool r = alpha_eq(a.body(), b.body(), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return r;
    }
  }
  return false;
}

void key_into(const Ty& t, Env& env, std::string& out) {
  switch (t.kind()) {
    case Ty::Kind::Var: {
      int i = lookup(env, t.name());
      if (i >= 0) {
        out += '#' + std::to_string(i);
      } else {
        out += t.name();
      }
      break;
    }
    case Ty::Kind::Arrow:
      out += '(';
      key_into(t.dom(), env, out);
      out += '>';
      key_into(t.cod(), env, out);
      out += ')';
      break;
    case Ty::Kind::Forall:
      out += "!(";
      env.push_back(t.name());
      key_into(t.body(), env, out);
      env.pop_back();
      out += ')';
      break;
  }
}

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  Ty parse() {
    Ty t = ty();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool at_keyword() {
    skip();
    if (s_.substr(pos_, 6) != "forall") return false;
    std::size_t e = pos_ + 6;
    return e >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[e]));
  }

  std::string ident() {
    skip();
    if (pos_ >= s_.size() || !std::isupper(static_cast<unsigned char>(s_[pos_])))
      fail("expected type identifier");
    std::size_t start = pos_++;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Ty ty() {
    if (at_keyword()) {
      pos_ += 6;
      std::vector<std::string> vars{ident()};
      skip();
      while (pos_ < s_.size() && std::isupper(static_cast<unsigned char>(s_[pos_]))) {
        vars.push_back(ident());
        skip();
      }
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '.') fail("expected '.'");
      ++pos_;
      return wrap_foralls(vars, ty());
    }
    Ty a = atom();
    skip();
    if (s_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return Ty::arrow(a, ty());
    }
    return a;
  }

  Ty atom() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Ty t = ty();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    return Ty::var(ident());
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void render_into(const Ty& t, std::string& out) {
  switch (t.kind()) {
    case Ty::Kind::Var: out += t.name(); break;
    case Ty::Kind::Forall:
      out += "forall " + t.name() + ". ";
      render_into(t.body(), out);
      break;
    case Ty::Kind::Arrow:
      if (t.dom().is_var()) {
        render_into(t.dom(), out);
      } else {
        out += '(';
        render_into(t.dom(), out);
        out += ')';
      }
      out += " -> ";
      render_into(t.cod(), out);
      break;
  }
}

void free_into(const Ty& t, Env& env, std::set<std::string>& out) {
  switch (t.kind()) {
    case Ty::Kind::Var:
      if (lookup(env, t.name()) < 0) out.insert(t.name());
      break;
    case Ty::Kind::Arrow:
      free_into(t.dom(), env, out);
      free_into(t.cod(), env, out);
      break;
    case Ty::Kind::Forall:
      env.push_back(t.name());
      free_into(t.body(), env, out);
      env.pop_back();
      break;
  }
}

void all_into(const Ty& t, std::set<std::string>& out) {
  out.insert(t.name().empty() ? std::string() : t.name());
  if (t.is_arrow()) {
    all_into(t.dom(), out);
    all_into(t.cod(), out);
  } else if (t.is_forall()) {
    all_into(t.body(), out);
  }
}

Ty rename_apart_rec(const Ty& t, FreshNames& names,
                    std::vector<std::pair<std::string, std::string>>& env) {
  switch (t.kind()) {
    case Ty::Kind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == t.name()) return Ty::var(it->second);
      }
      return t;
    case Ty::Kind::Arrow:
      return Ty::arrow(rename_apart_rec(t.dom(), names, env),
                       rename_apart_rec(t.cod(), names, env));
    case Ty::Kind::Forall: {
      std::string n = names.fresh(t.name());
      env.emplace_back(t.name(), n);
      Ty b = rename_apart_rec(t.body(), names, env);
      env.pop_back();
      return Ty::forall(n, b);
    }
  }
  return t;
}

bool plus2(const Ty& t);
bool minus2(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Var: return true;
    case Ty::Kind::Arrow: return plus2(t.dom()) && minus2(t.cod());
    case Ty::Kind::Forall: return false;
  }
  return false;
}
bool plus2(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Var: return true;
    case Ty::Kind::Arrow: return minus2(t.dom()) && plus2(t.cod());
    case Ty::Kind::Forall: return plus2(t.body());
  }
  return false;
}

template <typename Pred>
bool all_foralls(const Ty& t, Pred pred) {
  switch (t.kind()) {
    case Ty::Kind::Var: return true;
    case Ty::Kind::Arrow: return all_foralls(t.dom(), pred) && all_foralls(t.cod(), pred);
    case Ty::Kind::Forall: return pred(t) && all_foralls(t.body(), pred);
  }
  return true;
}

bool is_pi(const Ty& t) { return is_simple(strip_foralls(t).second); }

bool is_sigma0(const Ty& t) {
  Ty cur = t;
  while (true) {
    if (is_simple(cur)) return true;
    if (!cur.is_arrow() || !is_pi(cur.dom())) return false;
    cur = cur.cod();
  }
}

struct Bundle {
  std::vector<std::string> vars;
  Ty body;
};

// Assumes binders are pairwise distinct and distinct from free variables.
Bundle plus_rec(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Var: return {{}, t};
    case Ty::Kind::Forall: {
      Bundle b = plus_rec(t.body());
      b.vars.insert(b.vars.begin(), t.name());
      return b;
    }
    case Ty::Kind::Arrow: {
      std::vector<Ty> comps;
      Ty last = arrow_spine(t.dom(), &comps);
      Bundle rho = plus_rec(t.cod());
      std::vector<std::string> vars = rho.vars;
      std::vector<Ty> bodies;
      for (const Ty& c : comps) {
        Bundle bc = plus_rec(c);
        vars.insert(vars.end(), bc.vars.begin(), bc.vars.end());
        bodies.push_back(bc.body);
      }
      return {vars, Ty::arrow(make_arrows(bodies, last), rho.body)};
    }
  }
  return {{}, t};
}

Ty minus_rec(const Ty& t) {
  if (t.is_var()) return t;
  Bundle b = plus_rec(t.dom());
  return Ty::arrow(wrap_foralls(b.vars, b.body), minus_rec(t.cod()));
}

FreshNames names_for(const Ty& t) {
  FreshNames f;
  f.reserve(type_free_vars(t));
  return f;
}

}  // namespace

bool Ty::operator==(const Ty& o) const {
  if (n_ == o.n_) return true;
  if (!n_ || !o.n_) return false;
  Env ea, eb;
  return alpha_eq(*this, o, ea, eb);
}

Ty parse_type(std::string_view text) { return TypeParser(text).parse(); }

std::string render_type(const Ty& t) {
  std::string out;
  render_into(t, out);
  return out;
}

std::string canonical_key(const Ty& t) {
  Env env;
  std::string out;
  key_into(t, env, out);
  return out;
}

std::set<std::string> type_free_vars(const Ty& t) {
  Env env;
  std::set<std::string> out;
  free_into(t, env, out);
  return out;
}

std::set<std::string> type_all_vars(const Ty& t) {
  std::set<std::string> out;
  all_into(t, out);
  out.erase(std::string());
  return out;
}

bool type_occurs_free(const Ty& t, const std::string& name) {
  switch (t.kind()) {
    case Ty::Kind::Var: return t.name() == name;
    case Ty::Kind::Arrow: return type_occurs_free(t.dom(), name) || type_occurs_free(t.cod(), name);
    case Ty::Kind::Forall: return t.name() != name && type_occurs_free(t.body(), name);
  }
  return false;
}

Ty type_subst(const Ty& t, const std::string& name, const Ty& repl) {
  switch (t.kind()) {
    case Ty::Kind::Var: return t.name() == name ? repl : t;
    case Ty::Kind::Arrow:
      return Ty::arrow(type_subst(t.dom(), name, repl), type_subst(t.cod(), name, repl));
    case Ty::Kind::Forall: {
      if (t.name() == name || !type_occurs_free(t.body(), name)) return t;
      if (!type_occurs_free(repl, t.name()))
        return Ty::forall(t.name(), type_subst(t.body(), name, repl));
      FreshNames f;
      f.reserve(type_all_vars(t));
      f.reserve(type_all_vars(repl));
      f.reserve(name);
      std::string n = f.fresh(t.name());
      Ty body = type_subst(t.body(), t.name(), Ty::var(n));
      return Ty::forall(n, type_subst(body, name, repl));
    }
  }
  return t;
}

std::string FreshNames::fresh(const std::string& base) {
  if (!used_.count(base)) {
    used_.insert(base);
    return base;
  }
  std::string stem = base;
  while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back())))
    stem.pop_back();
  for (int i = 1;; ++i) {
    std::string c = stem + std::to_string(i);
    if (!used_.count(c)) {
      used_.insert(c);
      return c;
    }
  }
}

Ty rename_bound_apart(const Ty& t, FreshNames& names) {
  std::vector<std::pair<std::string, std::string>> env;
  return rename_apart_rec(t, names, env);
}

std::pair<std::vector<std::string>, Ty> strip_foralls(const Ty& t) {
  std::vector<std::string> vars;
  Ty cur = t;
  while (cur.is_forall()) {
    vars.push_back(cur.name());
    cur = cur.body();
  }
  return {vars, cur};
}

Ty wrap_foralls(const std::vector<std::string>& vars, const Ty& body) {
  Ty t = body;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) t = Ty::forall(*it, t);
  return t;
}

Ty arrow_spine(const Ty& t, std::vector<Ty>* args) {
  Ty cur = t;
  while (cur.is_arrow()) {
    if (args) args->push_back(cur.dom());
    cur = cur.cod();
  }
  return cur;
}

Ty make_arrows(const std::vector<Ty>& args, const Ty& result) {
  Ty t = result;
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = Ty::arrow(*it, t);
  return t;
}

bool is_simple(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Var: return true;
    case Ty::Kind::Arrow: return is_simple(t.dom()) && is_simple(t.cod());
    case Ty::Kind::Forall: return false;
  }
  return false;
}

bool is_forall_plus2(const Ty& t) { return plus2(t); }
bool is_forall_minus2(const Ty& t) { return minus2(t); }

bool is_proper(const Ty& t) {
  return all_foralls(t, [](const Ty& f) { return type_occurs_free(f.body(), f.name()); });
}

bool is_forall_trivial(const Ty& t) {
  return all_foralls(t, [](const Ty& f) { return !type_occurs_free(f.body(), f.name()); });
}

TypeClassification classify(const Ty& t) {
  TypeClassification c;
  c.simple = is_simple(t);
  c.pi = is_pi(t);
  c.sigma0 = is_sigma0(t);
  c.sigma = is_sigma0(strip_foralls(t).second);
  c.forall_plus2 = plus2(t);
  c.forall_minus2 = minus2(t);
  c.proper = is_proper(t);
  c.forall_plus = c.forall_plus2 && c.proper;
  c.forall_minus = c.forall_minus2 && c.proper;
  c.forall_trivial = is_forall_trivial(t);
  return c;
}

Ty skeleton(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Var: return t;
    case Ty::Kind::Arrow: return Ty::arrow(skeleton(t.dom()), skeleton(t.cod()));
    case Ty::Kind::Forall: return skeleton(t.body());
  }
  return t;
}

Ty translate_plus(const Ty& t) {
  if (!plus2(t)) throw Error(ErrorCode::WrongClass, "translate_plus: type not in forall+2");
  FreshNames names = names_for(t);
  Bundle b = plus_rec(rename_bound_apart(t, names));
  return wrap_foralls(b.vars, b.body);
}

Ty translate_minus(const Ty& t) {
  if (!minus2(t)) throw Error(ErrorCode::WrongClass, "translate_minus: type not in forall-2");
  FreshNames names = names_for(t);
  return minus_rec(rename_bound_apart(t, names));
}

Term id_term(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Var: return Term::lam("x", Term::bound(0));
    case Ty::Kind::Forall: return id_term(t.body());
    case Ty::Kind::Arrow: {
      auto r = normalize(arrow_term(id_term(t.dom()), id_term(t.cod())), Reduction::Beta,
                         kDefaultFuel * 100);
      return *r.result;
    }
  }
  return Term();
}

// ------------------------------------------------------------ enumeration

namespace {

std::vector<std::string> pool_vars() {
  std::vector<std::string> v;
  for (int i = 0; i < 10; ++i) v.push_back("X" + std::to_string(i));
  return v;
}

class RawTypes {
 public:
  explicit RawTypes(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  const std::vector<Ty>& of_size(std::uint32_t s) {
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    std::vector<Ty> out;
    if (s == 1) {
      for (const auto& v : vars_) out.push_back(Ty::var(v));
    } else {
      for (std::uint32_t k = 1; k + 1 < s; ++k) {
        const auto& ds = of_size(k);
        const auto& cs = of_size(s - 1 - k);
        for (const Ty& d : ds)
          for (const Ty& c : cs) out.push_back(Ty::arrow(d, c));
      }
      for (const auto& v : vars_) {
        for (const Ty& b : of_size(s - 1)) out.push_back(Ty::forall(v, b));
      }
    }
    return memo_.emplace(s, std::move(out)).first->second;
  }

 private:
  std::vector<std::string> vars_;
  std::map<std::uint32_t, std::vector<Ty>> memo_;
};

struct TypeTable {
  std::mutex mu;
  std::vector<Ty> types;
  std::unordered_set<std::string> seen;
  RawTypes raw{pool_vars()};
  std::uint32_t next_size = 1;
};

TypeTable& table() {
  static TypeTable t;
  return t;
}

}  // namespace

Ty type_at(std::uint64_t j) {
  TypeTable& tt = table();
  std::lock_guard<std::mutex> lock(tt.mu);
  while (tt.types.size() <= j) {
    for (const Ty& t : tt.raw.of_size(tt.next_size)) {
      if (tt.seen.insert(canonical_key(t)).second) tt.types.push_back(t);
    }
    ++tt.next_size;
  }
  return tt.types[j];
}

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while (w * (w + 1) / 2 > z) --w;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  std::uint64_t t = w * (w + 1) / 2;
  std::uint64_t b = z - t;
  return {w - b, b};
}

Ty gamma_inf_decl(std::uint64_t i) { return type_at(cantor_unpair(i).first); }

std::vector<Ty> enumerate_types(std::uint32_t max_size, const std::vector<std::string>& vars) {
  RawTypes raw(vars);
  std::vector<Ty> out;
  for (std::uint32_t s = 1; s <= max_size; ++s) {
    const auto& v = raw.of_size(s);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace sflab
