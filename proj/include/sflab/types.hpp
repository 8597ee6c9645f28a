#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sflab/term.hpp"

namespace sflab {

// System F type with named variables. Equality is alpha-equivalence.
class Ty {
 public:
  enum class Kind : std::uint8_t { Var, Arrow, Forall };

  Ty() = default;
  static Ty var(const std::string& name);
  static Ty arrow(const Ty& dom, const Ty& cod);
  static Ty forall(const std::string& var, const Ty& body);

  explicit operator bool() const { return static_cast<bool>(n_); }

  Kind kind() const;
  bool is_var() const;
  bool is_arrow() const;
  bool is_forall() const;

  // Variable name, or the binder of a forall.
  const std::string& name() const;
  const Ty& dom() const;
  const Ty& cod() const;
  const Ty& body() const;
  std::uint32_t size() const;

  bool operator==(const Ty& other) const;
  bool operator!=(const Ty& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit Ty(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct Ty::Node {
  Kind kind;
  std::string name;
  std::uint32_t size = 1;
  Ty a, b;
};

inline Ty::Kind Ty::kind() const { return n_->kind; }
inline bool Ty::is_var() const { return n_->kind == Kind::Var; }
inline bool Ty::is_arrow() const { return n_->kind == Kind::Arrow; }
inline bool Ty::is_forall() const { return n_->kind == Kind::Forall; }
inline const std::string& Ty::name() const { return n_->name; }
inline const Ty& Ty::dom() const { return n_->a; }
inline const Ty& Ty::cod() const { return n_->b; }
inline const Ty& Ty::body() const { return n_->a; }
inline std::uint32_t Ty::size() const { return n_->size; }

Ty parse_type(std::string_view text);
std::string render_type(const Ty& t);
// Binder-name independent key; equal keys iff alpha-equivalent.
std::string canonical_key(const Ty& t);

std::set<std::string> type_free_vars(const Ty& t);
std::set<std::string> type_all_vars(const Ty& t);
bool type_occurs_free(const Ty& t, const std::string& name);
Ty type_subst(const Ty& t, const std::string& name, const Ty& repl);

// Deterministic fresh names: base, base1, base2, ... avoiding `used`.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}
  void reserve(const std::string& n) { used_.insert(n); }
  void reserve(const std::set<std::string>& ns) { used_.insert(ns.begin(), ns.end()); }
  bool used(const std::string& n) const { return used_.count(n) > 0; }
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
};

// Renames every binder to a name that occurs nowhere else.
Ty rename_bound_apart(const Ty& t, FreshNames& names);

// Leading quantifiers and the remaining body.
std::pair<std::vector<std::string>, Ty> strip_foralls(const Ty& t);
Ty wrap_foralls(const std::vector<std::string>& vars, const Ty& body);
// Arrow spine: t = args[0] -> ... -> args[n-1] -> result.
Ty arrow_spine(const Ty& t, std::vector<Ty>* args);
Ty make_arrows(const std::vector<Ty>& args, const Ty& result);

struct TypeClassification {
  bool simple = false;
  bool pi = false;
  bool sigma0 = false;
  bool sigma = false;
  bool forall_plus2 = false;
  bool forall_minus2 = false;
  bool proper = false;
  bool forall_plus = false;
  bool forall_minus = false;
  bool forall_trivial = false;
};

TypeClassification classify(const Ty& t);
bool is_simple(const Ty& t);
bool is_forall_plus2(const Ty& t);
bool is_forall_minus2(const Ty& t);
bool is_proper(const Ty& t);
bool is_forall_trivial(const Ty& t);

Ty skeleton(const Ty& t);
Ty translate_plus(const Ty& t);
Ty translate_minus(const Ty& t);

Term id_term(const Ty& t);

// Types over the variable pool X0..X9, size-major, one per alpha class.
Ty type_at(std::uint64_t j);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);
std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b);
Ty gamma_inf_decl(std::uint64_t i);

// All types up to `max_size` over the given variables (raw syntax, used by tests
// and the acceptance sweep).
std::vector<Ty> enumerate_types(std::uint32_t max_size,
                                const std::vector<std::string>& vars);

}  // namespace sflab
