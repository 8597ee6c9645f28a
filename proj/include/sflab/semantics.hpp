#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "sflab/term.hpp"
#include "sflab/types.hpp"

namespace sflab {

enum class Semantics { SBeta, SBetaEta, SBetaSat, SBetaDown, CR, CR1, CR2 };

inline constexpr Semantics kAllSemantics[] = {
    Semantics::SBeta, Semantics::SBetaEta, Semantics::SBetaSat, Semantics::SBetaDown,
    Semantics::CR,    Semantics::CR1,      Semantics::CR2};

const char* semantics_name(Semantics k);
Semantics parse_semantics(std::string_view text);
// Candidate-style kinds live over SN and never contain the empty set.
bool over_sn(Semantics k);

using Bits = boost::dynamic_bitset<>;

// Deterministic per-sample generator.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

// ------------------------------------------------------------- universes

// Finite set of terms closed under one-step beta reduction (and eta when
// requested). Immutable; copies share state.
class Universe {
 public:
  Universe() = default;

  std::size_t size() const;
  const std::vector<Term>& terms() const;
  const Term& term(std::uint32_t i) const;
  std::optional<std::uint32_t> find(const Term& t) const;
  std::uint32_t id(const Term& t) const;  // throws OutOfUniverse
  bool contains(const Term& t) const { return find(t).has_value(); }

  const std::vector<Term>& seeds() const;
  std::uint64_t fuel() const;
  bool eta_closed() const;
  bool all_sn() const;

  const std::vector<std::uint32_t>& beta_succ(std::uint32_t i) const;
  const std::vector<std::uint32_t>& eta_succ(std::uint32_t i) const;
  std::optional<std::uint32_t> wh_succ(std::uint32_t i) const;
  bool neutral(std::uint32_t i) const { return !term(i).is_lam(); }
  bool nn(std::uint32_t i) const;

  // Reflexive-transitive beta reachability, and the values among it.
  const Bits& reach(std::uint32_t i) const;
  const Bits& values(std::uint32_t i) const;
  // Component ids of the beta / beta-eta conversion graph.
  std::uint32_t beta_class(std::uint32_t i) const;
  std::uint32_t betaeta_class(std::uint32_t i) const;

  Bits empty_bits() const { return Bits(size()); }
  Bits bits_of(const std::vector<Term>& ts) const;
  std::vector<Term> terms_of(const Bits& b) const;

  struct Data;

 private:
  explicit Universe(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
  friend Universe build_universe(const std::vector<Term>&, std::uint64_t,
                                 const std::vector<Semantics>&);
  friend const Data& universe_data(const Universe&);
};

// Saturates the seeds under one-step reducts. `fuel` bounds the number of
// members. Adds eta reducts when SBetaEta is among the kinds; requires SN
// seeds when a candidate kind is among them.
Universe build_universe(const std::vector<Term>& seeds, std::uint64_t fuel,
                        const std::vector<Semantics>& kinds);

struct TermSet {
  Universe u;
  Bits members;
  Semantics kind = Semantics::SBeta;
  bool closed = false;

  std::size_t count() const { return members.count(); }
  bool contains(const Term& t) const;
  std::vector<Term> terms() const { return u.terms_of(members); }
};

TermSet make_set(const Universe& u, const std::vector<Term>& ts, Semantics kind);

// Least fixpoint of the kind's clauses inside u. Exact restriction of the
// true closure for every kind when u is reduct-closed.
TermSet close(const TermSet& s);
TermSet close(const std::vector<Term>& s, Semantics kind, const Universe& u);
Bits close_bits(const Universe& u, const Bits& s, Semantics kind);
// Literal stage-by-stage evaluation, no parallelism; kept as the reference.
Bits close_bits_serial(const Universe& u, const Bits& s, Semantics kind);

// Closure as the union of singleton characterizations (relies on SU).
Bits close_by_characterization(const Universe& u, const Bits& s, Semantics kind);

// ----------------------------------------------------------------- orders

// Q below P in the value order; both must be SN.
bool sqsubseteq(const Term& q, const Term& p, std::uint64_t fuel = kDefaultSnFuel);
bool member_cr1(const Term& q, const Term& p, std::uint64_t fuel = kDefaultSnFuel);
Term principal_reduct(const Term& p);

// One decomposition step: Q = M[F_i/x_i], P = M[G_i/x_i] with F_i neutral
// non-normal and the value/equivalence side conditions, or P ->* Q.
bool triangle(const Term& q, const Term& p, std::uint64_t fuel = kDefaultSnFuel);

struct StarResult {
  bool member = false;
  bool bound_exhausted = false;
};
// Chains Q <| R1 <| ... <| P through members of u; chain_bound 0 means |u|.
StarResult triangle_star(const Term& q, const Term& p, const Universe& u,
                         std::size_t chain_bound = 0);
// Chains through Q's own reducts only; universe-free.
bool member_cr2(const Term& q, const Term& p, std::uint64_t fuel = kDefaultSnFuel);

// Exact test of m in Cl({gen}). Unknown when a normalization runs out.
Tri member_singleton(const Term& m, const Term& gen, Semantics kind,
                     std::uint64_t fuel = kDefaultFuel);
// m in Cl(gens), by stability under union.
Tri member_generated(const Term& m, const std::vector<Term>& gens, Semantics kind,
                     std::uint64_t fuel = kDefaultFuel);

// Order matrices over u: row q, column p.
struct OrderMatrix {
  std::vector<Bits> rows;
  bool at(std::uint32_t q, std::uint32_t p) const { return rows[q].test(p); }
  bool operator==(const OrderMatrix& o) const { return rows == o.rows; }
};
OrderMatrix sqsubseteq_matrix(const Universe& u, bool parallel = true);
OrderMatrix triangle_matrix(const Universe& u, bool parallel = true);
// Reflexive-transitive closure (Warshall).
OrderMatrix transitive_closure(const OrderMatrix& m, bool parallel = true);
// Column p holds Cl({p}) computed by fixpoint for each p.
OrderMatrix singleton_closure_matrix(const Universe& u, Semantics kind, bool parallel = true);

// -------------------------------------------------- arrows, interpretation

// M in s -> t: every P of s sends M P into t. Membership in t is by
// characterization from t's members.
Tri arrow_member(const Term& m, const TermSet& s, const TermSet& t,
                 std::uint64_t fuel = kDefaultFuel);

// Semantic sets are given by generators; membership goes through singleton
// closures.
using Generators = std::vector<Term>;

struct Interpretation {
  Semantics kind = Semantics::SBeta;
  std::map<std::string, Generators> assignment;
  std::vector<Generators> family;  // range of quantifiers
  Universe u;                      // materializes higher-order domains
  std::uint64_t fuel = kDefaultFuel;
};

// Membership of m in the interpretation of sigma. Arrow domains range over
// generators plus closure members inside u (variables) or over the members
// of u (other types), so True is evidence only. False is a refutation as
// long as those domain members are decided exactly.
Tri interpret_member(const Term& m, const Ty& sigma, const Interpretation& in);
// Members of u in the interpretation of sigma.
TermSet interpret_type(const Ty& sigma, const Interpretation& in);

struct SampleConfig {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  std::uint64_t fuel = kDefaultFuel;
  std::size_t extra_seeds = 3;  // random closed terms added to a, b, c
};

struct SampleVerdict {
  enum class Kind { Pass, Refuted, Inconclusive };
  Kind verdict = Kind::Pass;
  std::size_t samples = 0;
  std::size_t unknown = 0;
  std::optional<std::size_t> sample_id;
  std::string witness;  // JSON text
};
const char* sample_verdict_name(SampleVerdict::Kind k);

// Universe and sets drawn for one sample; shared by realizer and relational
// tests so that rows of a suite see the same samples.
struct Sample {
  Universe u;
  std::vector<Term> pool;  // candidate generators
};
Sample make_sample(Semantics kind, const SampleConfig& cfg, std::size_t index);

SampleVerdict realizer_sample_test(const Term& m, const Ty& sigma, Semantics kind,
                                   const SampleConfig& cfg);

// --------------------------------------------------------- property checks

struct PropertyReport {
  std::string check;
  Semantics kind = Semantics::SBeta;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t unknown = 0;
  std::vector<std::string> witnesses;  // JSON objects, deterministic order
  bool exhaustive = false;
  std::string method;  // "fixpoint" or "characterization"
  bool passed() const { return failures == 0; }
};

struct PropertyConfig {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::uint64_t fuel = kDefaultFuel;
  std::size_t max_witnesses = 8;
};

PropertyReport closure_axioms_check(Semantics kind, const Universe& u, const PropertyConfig& cfg);
PropertyReport f_closure_check(Semantics kind, const Universe& u, const PropertyConfig& cfg);
PropertyReport su_check(Semantics kind, const Universe& u, const PropertyConfig& cfg);
// Triples (P, P', Q) over u, substituting the variable x; exhaustive when the
// space fits the sample budget.
PropertyReport ss_check(Semantics kind, const Universe& u, const PropertyConfig& cfg,
                        const std::vector<Term>& substituends = {});
PropertyReport wss_check(Semantics kind, const Universe& u, const PropertyConfig& cfg,
                         const std::vector<Term>& substituends = {});
PropertyReport adequacy_check(Semantics kind, const Universe& u, const PropertyConfig& cfg);
// One adequacy instance over s = Cl(s_gens), t = Cl(t_gens), both read
// inside u: False when every P of s sends m[P/x] into t but some (\x.m) P
// falls outside t.
Tri adequacy_instance(Semantics kind, const Universe& u, const std::vector<Term>& s_gens,
                      const std::vector<Term>& t_gens, const Term& m, const std::string& x,
                      std::uint64_t fuel = kDefaultFuel);
PropertyReport wh_expansion_check(Semantics kind, const Universe& u, const PropertyConfig& cfg);

std::string report_json(const PropertyReport& r);

// Universe used by the order oracles: SN terms over one free variable.
Universe standard_universe(std::uint32_t max_size, const std::vector<Semantics>& kinds);

}  // namespace sflab
