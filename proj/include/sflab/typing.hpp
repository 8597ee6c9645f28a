#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sflab/term.hpp"
#include "sflab/types.hpp"

namespace sflab {

using Context = std::map<std::string, Ty>;

enum class Rule { Id, ArrI, ArrE, AllI, AllE };
const char* rule_name(Rule r);

struct Judgement {
  Context ctx;
  Term term;
  Ty ty;
};

// AllI binds the variable of the conclusion's outer forall; AllE records the
// instantiation type. ArrE children are (function, argument).
struct Derivation {
  Rule rule = Rule::Id;
  Judgement concl;
  Ty inst;
  std::vector<Derivation> children;
};

struct DerivationCheck {
  bool ok = true;
  std::string rule;
  std::vector<std::size_t> path;  // child indices from the root
  std::string message;
};

DerivationCheck check_derivation(const Derivation& d);
bool contains_rule(const Derivation& d, Rule r);
std::size_t derivation_size(const Derivation& d);

std::set<std::string> context_free_type_vars(const Context& ctx);

// Decides Gamma |- M : sigma without forall-elimination. Requires context types
// in forall-2 and sigma in forall+2.
std::optional<Derivation> check_positive(const Context& ctx, const Term& m, const Ty& sigma);
// Same procedure without the class preconditions; complete for the
// forall-elimination-free fragment whenever context heads are applied only
// at forall-free arrow spines.
std::optional<Derivation> check_positive_unchecked(const Context& ctx, const Term& m,
                                                   const Ty& sigma);
std::optional<Derivation> check_simple(const Context& ctx, const Term& m, const Ty& sigma);

// Free variables x<i> are declared with gamma_inf_decl(i).
Context gamma_inf_context(const Term& m);
std::optional<Derivation> gamma_inf_derive(const Term& m, const Ty& sigma);
bool gamma_inf_check(const Term& m, const Ty& sigma);

Derivation derive_id_plus(const Ty& sigma);     // |- I : sigma -> sigma+
Derivation derive_id_minus(const Ty& sigma);    // |- I : sigma- -> sigma
Derivation derive_id_trivial(const Ty& sigma);  // sigma+ -> sigma, or sigma -> sigma-
// |- I_{sk a} : a -> b for types with matching skeleton shape.
std::optional<Derivation> derive_coercion(const Ty& a, const Ty& b);

Derivation skeleton_derivation(const Derivation& d);

std::vector<Term> eta_x_reducts(const Term& m, const std::string& x);

struct EtaRetype {
  Term term;
  Derivation derivation;
  std::size_t distance = 0;
};
// Breadth-first search over eta-expansions/reductions of m.
std::optional<EtaRetype> eta_retype(const Term& m, const Ty& sigma, std::size_t bound,
                                    const Context& ctx = {});

}  // namespace sflab
