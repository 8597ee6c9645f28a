#pragma once

#include <mutex>
#include <unordered_map>

#include "sflab/semantics.hpp"

namespace sflab {

// Horn clauses "member if all of `need` are members", one list per term.
struct ClosureRules {
  std::vector<std::vector<Bits>> need;
  bool capped = false;  // some decomposition lists were truncated
};

struct Universe::Data {
  std::vector<Term> terms;
  std::unordered_map<Term, std::uint32_t> index;
  std::vector<Term> seeds;
  std::uint64_t fuel = 0;
  bool eta_closed = false;
  bool all_sn = false;

  std::vector<std::vector<std::uint32_t>> beta, eta;
  std::vector<std::int64_t> wh;
  std::vector<Bits> reach, values;
  std::vector<std::uint32_t> beta_class, betaeta_class;

  // Lazily built rules for CR, CR1, CR2 (index 0, 1, 2).
  mutable std::once_flag rules_once[3];
  mutable ClosureRules rules[3];
  mutable std::once_flag star_once;
  mutable OrderMatrix star;
};

const Universe::Data& universe_data(const Universe& u);
const ClosureRules& closure_rules(const Universe& u, Semantics kind);

// Per-thread cache of reduct-graph facts for universe-free order checks.
struct TermFacts {
  SnVerdict::Status sn = SnVerdict::Status::Unknown;
  std::optional<Term> nf;
  std::vector<Term> reach;   // reflexive-transitive reducts, BFS order
  std::vector<Term> values;  // sorted by term_less
};
const TermFacts& term_facts(const Term& t, std::uint64_t fuel);

}  // namespace sflab
