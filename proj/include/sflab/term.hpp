#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sflab {

// Untyped lambda term. Binders are de Bruijn indices; a lambda keeps the
// surface name as a hint that is ignored by equality and hashing.
class Term {
 public:
  enum class Kind : std::uint8_t { Bound, Free, Lam, App };

  Term() = default;

  static Term bound(std::uint32_t index);
  static Term free(const std::string& name);
  static Term lam(const std::string& hint, const Term& body);
  static Term app(const Term& fun, const Term& arg);

  explicit operator bool() const { return static_cast<bool>(n_); }

  Kind kind() const;
  bool is_bound() const;
  bool is_free() const;
  bool is_var() const { return is_bound() || is_free(); }
  bool is_lam() const;
  bool is_app() const;

  std::uint32_t index() const;
  // Free variable name, or the binder hint of a lambda.
  const std::string& name() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;

  std::uint32_t size() const;
  std::size_t hash() const;
  // One more than the largest dangling bound index; 0 when locally closed.
  std::uint32_t loose() const;
  bool has_free_names() const;
  bool beta_normal() const;

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
  bool same_node(const Term& other) const { return n_ == other.n_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct Term::Node {
  Kind kind;
  std::uint32_t index = 0;
  std::uint32_t size = 1;
  std::uint32_t loose = 0;
  bool has_free = false;
  bool redex = false;
  std::size_t hash = 0;
  std::string name;
  Term a, b;
};

inline Term::Kind Term::kind() const { return n_->kind; }
inline bool Term::is_bound() const { return n_->kind == Kind::Bound; }
inline bool Term::is_free() const { return n_->kind == Kind::Free; }
inline bool Term::is_lam() const { return n_->kind == Kind::Lam; }
inline bool Term::is_app() const { return n_->kind == Kind::App; }
inline std::uint32_t Term::index() const { return n_->index; }
inline const std::string& Term::name() const { return n_->name; }
inline const Term& Term::body() const { return n_->a; }
inline const Term& Term::fun() const { return n_->a; }
inline const Term& Term::arg() const { return n_->b; }
inline std::uint32_t Term::size() const { return n_->size; }
inline std::size_t Term::hash() const { return n_->hash; }
inline std::uint32_t Term::loose() const { return n_->loose; }
inline bool Term::has_free_names() const { return n_->has_free; }
inline bool Term::beta_normal() const { return !n_->redex; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Total order used for deterministic containers.
bool term_less(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_less(a, b); }
};

enum class Reduction { Beta, Eta, BetaEta, WeakHead };
enum class Strategy { LeftmostOutermost, RightmostInnermost };
enum class Tri { False, True, Unknown };

const char* reduction_name(Reduction r);
const char* tri_name(Tri t);

constexpr std::uint64_t kDefaultFuel = 10000;
constexpr std::uint64_t kDefaultSnFuel = 100000;
// Reducts larger than this count as fuel exhaustion.
constexpr std::uint32_t kMaxTermSize = 20000;
// Bound on the summed size of the terms met while exploring a reduct graph.
constexpr std::uint64_t kMaxExploreVolume = 4000000;

// Surface syntax: \x.body, left-associative application, [a-z][a-zA-Z0-9_]*.
Term parse_term(std::string_view text);
std::string render(const Term& t);

std::set<std::string> free_names(const Term& t);
bool occurs_free(const Term& t, const std::string& name);
bool is_closed(const Term& t);

Term shift(const Term& t, int delta, std::uint32_t cutoff = 0);
// body[0 := arg] for the body of a lambda.
Term instantiate(const Term& body, const Term& arg);
// Replaces bound index 0 of a lambda body by a free variable.
Term open_with(const Term& body, const std::string& name);
// \name.body where `name` is a free variable of body.
Term abstract(const std::string& name, const Term& body);
Term substitute(const Term& body, const Term& replacement,
                const std::string& target);
Term substitute_many(const Term& body, const std::vector<std::string>& targets,
                     const std::vector<Term>& replacements);

Term apply(const Term& head, const std::vector<Term>& args);
// Decomposes t into head and argument list.
Term spine(const Term& t, std::vector<Term>* args);

std::vector<Term> reducts(const Term& t, Reduction kind);
std::optional<Term> wh_reduct(const Term& t);
bool has_beta_redex(const Term& t);
bool is_whnf(const Term& t);

struct NormalizeOutcome {
  std::optional<Term> result;
  std::uint64_t steps = 0;
  bool exhausted = false;
};

NormalizeOutcome normalize(const Term& t, Reduction kind,
                           std::uint64_t fuel = kDefaultFuel,
                           Strategy strategy = Strategy::LeftmostOutermost);

// Explored part of the reduct graph rooted at nodes[0].
struct ReductGraph {
  std::vector<Term> nodes;
  std::vector<std::vector<std::uint32_t>> succ;
  bool complete = false;
};
ReductGraph explore_reducts(const Term& t, Reduction kind, std::uint64_t node_fuel);

struct SnVerdict {
  enum class Status { Yes, No, Unknown };
  Status status = Status::Unknown;
  std::vector<Term> cycle;  // for No: t0 -> t1 -> ... -> t0
  std::uint64_t explored = 0;
};
SnVerdict is_strongly_normalizing(const Term& t, std::uint64_t fuel = kDefaultSnFuel);
bool is_sn(const Term& t, std::uint64_t fuel = kDefaultSnFuel);

struct TermClass {
  bool neutral = false;
  bool value = false;
  bool beta_normal = false;
  bool nn = false;
};
TermClass term_class(const Term& t);
inline bool is_nn(const Term& t) { return !t.is_lam() && has_beta_redex(t); }

Tri equiv(const Term& a, const Term& b, Reduction gamma,
          std::uint64_t fuel = kDefaultFuel);

std::vector<Term> values_of(const Term& t, std::uint64_t fuel = kDefaultSnFuel);

Term circ(const Term& m, const Term& n);
Term arrow_term(const Term& m, const Term& n);

// Closed beta-normal terms of size <= max_size, size-major, each once.
std::vector<Term> enumerate_closed_beta_normal(std::uint32_t max_size);
// All terms of size <= max_size whose free variables are among `names`.
std::vector<Term> enumerate_terms(std::uint32_t max_size,
                                  const std::vector<std::string>& names);

// Church numeral \f.\x.f (... (f x)).
Term church(unsigned n);

}  // namespace sflab

template <>
struct std::hash<sflab::Term> {
  std::size_t operator()(const sflab::Term& t) const { return t.hash(); }
};
