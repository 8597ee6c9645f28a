#include "sflab/term.hpp"

#include <cctype>
#include <unordered_set>

#include "sflab/error.hpp"

namespace sflab {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::NotSN: return "NotSN";
    case ErrorCode::NotNN: return "NotNN";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::WrongClass: return "WrongClass";
    case ErrorCode::FuelExhausted: return "FuelExhausted";
    case ErrorCode::NonSNSeed: return "NonSNSeed";
    case ErrorCode::OutOfUniverse: return "OutOfUniverse";
    case ErrorCode::UncoveredVariable: return "UncoveredVariable";
    case ErrorCode::UnindexedFreeVariable: return "UnindexedFreeVariable";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::InvalidDerivation: return "InvalidDerivation";
    case ErrorCode::ContainsAllE: return "ContainsAllE";
  }
  return "Unknown";
}

const char* reduction_name(Reduction r) {
  switch (r) {
    case Reduction::Beta: return "beta";
    case Reduction::Eta: return "eta";
    case Reduction::BetaEta: return "betaeta";
    case Reduction::WeakHead: return "wh";
  }
  return "?";
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

Term Term::bound(std::uint32_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bound;
  n->index = index;
  n->loose = index + 1;
  n->hash = mix(0x51, index);
  return Term(std::move(n));
}

Term Term::free(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Free;
  n->name = name;
  n->has_free = true;
  n->hash = mix(0x7f, std::hash<std::string>{}(name));
  return Term(std::move(n));
}

Term Term::lam(const std::string& hint, const Term& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->name = hint;
  n->size = body.size() + 1;
  n->loose = body.loose() > 0 ? body.loose() - 1 : 0;
  n->has_free = body.has_free_names();
  n->redex = !body.beta_normal();
  n->hash = mix(0x3b, body.hash());
  n->a = body;
  return Term(std::move(n));
}

Term Term::app(const Term& fun, const Term& arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->size = fun.size() + arg.size() + 1;
  n->loose = std::max(fun.loose(), arg.loose());
  n->has_free = fun.has_free_names() || arg.has_free_names();
  n->redex = fun.is_lam() || !fun.beta_normal() || !arg.beta_normal();
  n->hash = mix(mix(0x2d, fun.hash()), arg.hash());
  n->a = fun;
  n->b = arg;
  return Term(std::move(n));
}

bool Term::operator==(const Term& o) const {
  if (n_ == o.n_) return true;
  if (!n_ || !o.n_) return false;
  if (n_->hash != o.n_->hash || n_->kind != o.n_->kind || n_->size != o.n_->size)
    return false;
  switch (n_->kind) {
    case Kind::Bound: return n_->index == o.n_->index;
    case Kind::Free: return n_->name == o.n_->name;
    case Kind::Lam: return n_->a == o.n_->a;
    case Kind::App: return n_->a == o.n_->a && n_->b == o.n_->b;
  }
  return false;
}

bool term_less(const Term& a, const Term& b) {
  if (a.same_node(b)) return false;
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Term::Kind::Bound: return a.index() < b.index();
    case Term::Kind::Free: return a.name() < b.name();
    case Term::Kind::Lam: return term_less(a.body(), b.body());
    case Term::Kind::App:
      if (a.fun() != b.fun()) return term_less(a.fun(), b.fun());
      return term_less(a.arg(), b.arg());
  }
  return false;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse() {
    Term t = term();
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

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string ident() {
    skip();
    if (pos_ >= s_.size() || !std::islower(static_cast<unsigned char>(s_[pos_])))
      fail("expected identifier");
    std::size_t start = pos_++;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term term() {
    if (peek() == '\\') return lambda();
    return application();
  }

  Term lambda() {
    expect('\\');
    std::string name = ident();
    expect('.');
    scope_.push_back(name);
    Term body = term();
    scope_.pop_back();
    return Term::lam(name, body);
  }

  bool atom_start(char c) {
    return c == '(' || std::islower(static_cast<unsigned char>(c));
  }

  Term application() {
    if (!atom_start(peek())) fail("expected term");
    Term t = atom();
    while (true) {
      char c = peek();
      if (atom_start(c)) {
        t = Term::app(t, atom());
      } else if (c == '\\') {
        t = Term::app(t, lambda());
        break;
      } else {
        break;
      }
    }
    return t;
  }

  Term atom() {
    if (peek() == '(') {
      ++pos_;
      Term t = term();
      expect(')');
      return t;
    }
    std::string name = ident();
    for (std::size_t k = scope_.size(); k-- > 0;) {
      if (scope_[k] == name)
        return Term::bound(static_cast<std::uint32_t>(scope_.size() - 1 - k));
    }
    return Term::free(name);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

void collect_free(const Term& t, std::set<std::string>& out) {
  if (!t.has_free_names()) return;
  switch (t.kind()) {
    case Term::Kind::Free: out.insert(t.name()); break;
    case Term::Kind::Lam: collect_free(t.body(), out); break;
    case Term::Kind::App:
      collect_free(t.fun(), out);
      collect_free(t.arg(), out);
      break;
    default: break;
  }
}

// Indices >= 1 dangling from a lambda body, as offsets into the outer env.
void collect_outer(const Term& t, std::uint32_t depth, std::set<std::uint32_t>& out) {
  if (t.loose() <= depth + 1) return;
  switch (t.kind()) {
    case Term::Kind::Bound:
      if (t.index() > depth) out.insert(t.index() - depth);
      break;
    case Term::Kind::Lam: collect_outer(t.body(), depth + 1, out); break;
    case Term::Kind::App:
      collect_outer(t.fun(), depth, out);
      collect_outer(t.arg(), depth, out);
      break;
    default: break;
  }
}

std::string binder_name(const Term& lam, const std::vector<std::string>& env) {
  std::string hint = lam.name().empty() ? "x" : lam.name();
  std::set<std::string> avoid;
  collect_free(lam.body(), avoid);
  std::set<std::uint32_t> outer;
  collect_outer(lam.body(), 0, outer);
  for (std::uint32_t k : outer) {
    if (k <= env.size()) avoid.insert(env[env.size() - k]);
  }
  if (!avoid.count(hint)) return hint;
  std::string base = hint;
  while (base.size() > 1 && std::isdigit(static_cast<unsigned char>(base.back())))
    base.pop_back();
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

void render_into(const Term& t, std::vector<std::string>& env, std::string& out);

void render_atom(const Term& t, std::vector<std::string>& env, std::string& out) {
  if (t.is_var()) {
    render_into(t, env, out);
  } else {
    out += '(';
    render_into(t, env, out);
    out += ')';
  }
}

void render_into(const Term& t, std::vector<std::string>& env, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Bound:
      if (t.index() < env.size()) {
        out += env[env.size() - 1 - t.index()];
      } else {
        out += "#" + std::to_string(t.index() - env.size());
      }
      break;
    case Term::Kind::Free: out += t.name(); break;
    case Term::Kind::Lam: {
      std::string name = binder_name(t, env);
      out += '\\';
      out += name;
      out += '.';
      env.push_back(name);
      render_into(t.body(), env, out);
      env.pop_back();
      break;
    }
    case Term::Kind::App:
      if (t.fun().is_lam()) {
        render_atom(t.fun(), env, out);
      } else {
        render_into(t.fun(), env, out);
      }
      out += ' ';
      render_atom(t.arg(), env, out);
      break;
  }
}

Term shift_rec(const Term& t, int delta, std::uint32_t cutoff) {
  if (t.loose() <= cutoff) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return Term::bound(static_cast<std::uint32_t>(static_cast<int>(t.index()) + delta));
    case Term::Kind::Lam:
      return Term::lam(t.name(), shift_rec(t.body(), delta, cutoff + 1));
    case Term::Kind::App:
      return Term::app(shift_rec(t.fun(), delta, cutoff), shift_rec(t.arg(), delta, cutoff));
    default: return t;
  }
}

Term subst_index(const Term& t, std::uint32_t depth, const Term& arg) {
  if (t.loose() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      if (t.index() == depth) return shift_rec(arg, static_cast<int>(depth), 0);
      return Term::bound(t.index() - 1);
    case Term::Kind::Lam:
      return Term::lam(t.name(), subst_index(t.body(), depth + 1, arg));
    case Term::Kind::App:
      return Term::app(subst_index(t.fun(), depth, arg), subst_index(t.arg(), depth, arg));
    default: return t;
  }
}

Term abstract_rec(const Term& t, const std::string& name, std::uint32_t depth) {
  if (!t.has_free_names() && t.loose() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case Term::Kind::Free:
      return t.name() == name ? Term::bound(depth) : t;
    case Term::Kind::Lam:
      return Term::lam(t.name(), abstract_rec(t.body(), name, depth + 1));
    case Term::Kind::App:
      return Term::app(abstract_rec(t.fun(), name, depth),
                       abstract_rec(t.arg(), name, depth));
  }
  return t;
}

Term subst_names(const Term& t, const std::vector<std::string>& names,
                 const std::vector<Term>& repl, std::uint32_t depth) {
  if (!t.has_free_names()) return t;
  switch (t.kind()) {
    case Term::Kind::Free:
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == t.name()) return shift_rec(repl[i], static_cast<int>(depth), 0);
      }
      return t;
    case Term::Kind::Lam:
      return Term::lam(t.name(), subst_names(t.body(), names, repl, depth + 1));
    case Term::Kind::App:
      return Term::app(subst_names(t.fun(), names, repl, depth),
                       subst_names(t.arg(), names, repl, depth));
    default: return t;
  }
}

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse(); }

std::string render(const Term& t) {
  std::vector<std::string> env;
  std::string out;
  render_into(t, env, out);
  return out;
}

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

bool occurs_free(const Term& t, const std::string& name) {
  if (!t.has_free_names()) return false;
  switch (t.kind()) {
    case Term::Kind::Free: return t.name() == name;
    case Term::Kind::Lam: return occurs_free(t.body(), name);
    case Term::Kind::App: return occurs_free(t.fun(), name) || occurs_free(t.arg(), name);
    default: return false;
  }
}

bool is_closed(const Term& t) { return !t.has_free_names() && t.loose() == 0; }

Term shift(const Term& t, int delta, std::uint32_t cutoff) {
  return shift_rec(t, delta, cutoff);
}

Term instantiate(const Term& body, const Term& arg) { return subst_index(body, 0, arg); }

Term open_with(const Term& body, const std::string& name) {
  return subst_index(body, 0, Term::free(name));
}

Term abstract(const std::string& name, const Term& body) {
  return Term::lam(name, abstract_rec(body, name, 0));
}

Term substitute(const Term& body, const Term& replacement, const std::string& target) {
  return subst_names(body, {target}, {replacement}, 0);
}

Term substitute_many(const Term& body, const std::vector<std::string>& targets,
                     const std::vector<Term>& replacements) {
  return subst_names(body, targets, replacements, 0);
}

Term apply(const Term& head, const std::vector<Term>& args) {
  Term t = head;
  for (const Term& a : args) t = Term::app(t, a);
  return t;
}

Term spine(const Term& t, std::vector<Term>* args) {
  Term h = t;
  std::vector<Term> rev;
  while (h.is_app()) {
    rev.push_back(h.arg());
    h = h.fun();
  }
  if (args) args->assign(rev.rbegin(), rev.rend());
  return h;
}

Term circ(const Term& m, const Term& n) {
  // \x.M(N x); M and N are closed under the new binder by shifting.
  Term x = Term::bound(0);
  return Term::lam("x", Term::app(shift(m, 1), Term::app(shift(n, 1), x)));
}

Term arrow_term(const Term& m, const Term& n) {
  // \x.\y.N(x(M y))
  Term x = Term::bound(1);
  Term y = Term::bound(0);
  Term mm = shift(m, 2);
  Term nn = shift(n, 2);
  return Term::lam("x", Term::lam("y", Term::app(nn, Term::app(x, Term::app(mm, y)))));
}

Term church(unsigned n) {
  Term body = Term::bound(0);
  for (unsigned i = 0; i < n; ++i) body = Term::app(Term::bound(1), body);
  return Term::lam("f", Term::lam("x", body));
}

}  // namespace sflab
