#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sflab/semantics.hpp"
#include "sflab/typing.hpp"

namespace sflab {

using TermPair = std::pair<Term, Term>;

// Relation given by base pairs; (P, Q) is related when P lies in the closure
// of A and Q in the closure of B for some base pair (A, B). Carriers are kept
// for reporting and are not consulted by membership.
struct Rel {
  Semantics kind = Semantics::SBeta;
  std::vector<TermPair> base;
  TermSet left, right;
};

Rel make_rel(const Universe& u, Semantics kind, std::vector<TermPair> base);

Tri rel_member(const TermPair& pq, const Rel& r, std::uint64_t fuel = kDefaultFuel);

// Conjunction of relations over common carriers.
struct RelMeet {
  std::vector<Rel> parts;
};
Tri rel_member(const TermPair& pq, const RelMeet& r, std::uint64_t fuel = kDefaultFuel);

// (P, Q) in r -> r2: related arguments drawn from the base pairs of r and
// from the closures of their components inside u.
Tri arrow_rel_member(const TermPair& pq, const Rel& r, const Rel& r2, const Universe& u,
                     std::uint64_t fuel = kDefaultFuel);

using RelAssignment = std::map<std::string, Rel>;

struct RelInterpretation {
  Semantics kind = Semantics::SBeta;
  RelAssignment rels;
  std::vector<Rel> family;  // range of quantifiers
  Universe u;               // materializes higher-order domains
  std::uint64_t fuel = kDefaultFuel;
};

// Relational reading of sigma. As with the set interpretation, False is a
// refutation and True is evidence from the sampled domains only.
Tri interpret_rel_member(const TermPair& pq, const Ty& sigma, const RelInterpretation& in);

SampleVerdict parametric_sample_test(const Term& m, const Ty& sigma, Semantics kind,
                                     const SampleConfig& cfg);

// Substitutes sampled related tuples for the context of d and checks the
// conclusion. A refutation points at this implementation.
SampleVerdict abstraction_smoke(const Derivation& d, Semantics kind, const SampleConfig& cfg);

// f P against Q modulo gamma, f a free variable.
Tri rf_base(const TermPair& pq, const std::string& f, Reduction gamma,
            std::uint64_t fuel = kDefaultFuel);

// For simple sigma = s1 -> ... -> sn -> Z: relates M (K_s1 x1) ... (K_sn xn)
// to M (H_s1 x1) ... (H_sn xn) at the indeterminate of Z.
Tri rf_instance(const Term& m, const Ty& sigma, Reduction gamma, std::uint64_t fuel = kDefaultFuel);

}  // namespace sflab
