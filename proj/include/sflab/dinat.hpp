#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sflab/term.hpp"
#include "sflab/types.hpp"
#include "sflab/typing.hpp"

namespace sflab {

// Free type variables are numbered by their position in sorted order; the
// variable at position u splits into X<u> / Y<u> and owns the indeterminate
// f<u> : X<u> -> Y<u>.
std::string split_name(char side, std::size_t u);
std::string indeterminate_name(std::size_t u);

// First letter names the side taken by negative occurrences, second by
// positive ones: split_type(Z, XY) = Y0, split_type(Z -> Z, XY) = X0 -> Y0.
enum class Flavor { XX, XY, YX, YY };
const char* flavor_name(Flavor f);
Ty split_type(const Ty& sigma, Flavor f);

// Functorial action of sigma over the indeterminates of `z`; quantifiers are
// transparent. Bound variables of sigma must avoid z.
Term h_term(const Ty& sigma, const std::set<std::string>& z);
Term k_term(const Ty& sigma, const std::set<std::string>& z);
inline Term h_term(const Ty& sigma) { return h_term(sigma, type_free_vars(sigma)); }
inline Term k_term(const Ty& sigma) { return k_term(sigma, type_free_vars(sigma)); }

struct HKJudgement {
  std::string label;  // e.g. "H: XX -> XY"
  Judgement judgement;
  std::optional<Derivation> derivation;
  bool ok() const { return derivation.has_value() && check_derivation(*derivation).ok; }
};

// The four typings of H and K for a simple type, with Gamma = {f<u> : X<u> -> Y<u>}.
std::vector<HKJudgement> hk_typings(const Ty& sigma);

struct DinatResult {
  Tri verdict = Tri::Unknown;
  Ty checked;                 // type whose H and K were built
  std::set<std::string> z;    // variables carrying indeterminates
  bool forall_plus2 = false;  // false: outside the class, reported as is
  Term lhs, rhs;              // H M and K M
  std::optional<Term> lhs_nf, rhs_nf;
};

// H M against K M modulo gamma. Types in forall+2 are read through the
// quantifier-free body of their prenex form, so bound variables that the
// prenex hoists carry indeterminates; other types only lose leading
// quantifiers.
DinatResult dinat_check(const Term& m, const Ty& sigma, Reduction gamma,
                        std::uint64_t fuel = kDefaultFuel);

}  // namespace sflab
