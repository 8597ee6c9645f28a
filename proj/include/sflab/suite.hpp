#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sflab/param.hpp"
#include "sflab/semantics.hpp"
#include "sflab/types.hpp"

namespace sflab {

struct SuiteConfig {
  std::uint32_t max_term_size = 7;
  std::vector<Ty> types;  // empty: default list
  Reduction gamma = Reduction::Beta;  // dinaturality on proper entries
  Semantics kind = Semantics::SBeta;      // sampled tests on proper entries
  Semantics eta_kind = Semantics::SBetaEta;  // and on entries typed through eta search
  std::size_t samples = 100;
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t seed = 1;
  std::size_t eta_bound = 3;
  bool sample_all_rows = true;  // false: sampled tests on typable rows only
};

std::vector<Ty> default_suite_types();
// Reads one type per line; blank lines and lines starting with '#' are skipped.
std::vector<Ty> parse_type_list(const std::string& text);
// SFLAB_SEED, when set, replaces cfg.seed.
void apply_seed_override(SuiteConfig& cfg);

struct SuiteRow {
  std::size_t term_index = 0, type_index = 0;
  Term term;
  Ty type;
  bool proper = true;                  // false: typability through eta search
  Tri typable = Tri::False;            // Unknown: eta search ran out
  std::optional<Term> eta_retyped;     // set when a different term was typed
  Tri dinatural = Tri::Unknown;
  std::optional<SampleVerdict> parametric, realizer;
  std::string status;  // "ok", "violation", "inconclusive"
  std::vector<std::string> reasons;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<Term> terms;
  std::vector<Ty> types;
  std::vector<SuiteRow> rows;  // term-major
  std::vector<std::size_t> violations, inconclusive;  // row indices
};

SuiteReport run_suite(const SuiteConfig& cfg);

// One JSON object per row.
std::string suite_rows_jsonl(const SuiteReport& r);
// Per type: counts by (typable, dinatural) and refutations among typable rows.
std::string suite_matrix_json(const SuiteReport& r);
std::string suite_violations_json(const SuiteReport& r);
std::string suite_summary_table(const SuiteReport& r);

}  // namespace sflab
