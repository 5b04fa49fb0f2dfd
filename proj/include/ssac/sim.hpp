#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ssac/coding.hpp"
#include "ssac/header.hpp"

namespace ssac::sim {

enum class ExperimentKind { SolutionExistence, FullRank, HeaderTable, LineNetwork };

/// How a node's buffer size k is chosen for a grid point.
struct KRule {
  enum class Kind { Explicit, KOpt };
  Kind kind = Kind::KOpt;
  long delta = 0;

  /// "explicit", "kopt" or "kopt+D".
  static KRule parse(const std::string& text);
  std::string label() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SolutionExistence;
  /// One allowed set per field order in the grid; each carries its field.
  std::vector<AllowedSet> fields;
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ms;
  std::vector<std::size_t> ks;
  std::vector<std::size_t> overheads;
  std::vector<double> log_bases{2.0};
  KRule k_rule;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t depth = 1;
  std::size_t payload_len = 4;
  std::size_t max_attempts = 100000;
  unsigned threads = 1;

  void validate() const;
};

struct GridRecord {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t q = 0;
  std::size_t k = 0;
  std::size_t overhead = 0;
  std::size_t depth = 0;
  double log_base = 2.0;
  std::string k_rule;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  double success_probability = 0.0;
  double ci_halfwidth = 0.0;
  /// Mean over successful trials only; NaN when there were none.
  double mean_attempts = 0.0;
  std::size_t recode_failures = 0;
  double mean_header_bits = 0.0;
  /// Per-trial success flags, indexed by trial, for paired comparisons.
  std::vector<std::uint8_t> outcomes;
};

struct KOptNote {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t base2 = 0;
  std::size_t base_e = 0;
};

struct ExperimentMetadata {
  std::uint64_t seed = 0;
  std::string k_rule;
  std::vector<double> log_bases;
  std::vector<std::string> fields;
  std::vector<std::vector<unsigned>> allowed_sets;
  std::vector<KOptNote> k_opt;
};

struct ExperimentResult {
  std::vector<GridRecord> records;
  ExperimentMetadata metadata;
};

struct HeaderTableRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t q = 0;
  std::size_t ssac_bits = 0;
  std::size_t rlnc_bits = 0;
  std::size_t ecc_bits = 0;
  double rlnc_over_ssac = 0.0;
  double ecc_over_ssac = 0.0;
};

ExperimentResult run_solution_existence(const ExperimentConfig& cfg);
ExperimentResult run_full_rank(const ExperimentConfig& cfg);
std::vector<HeaderTableRow> run_header_table(const ExperimentConfig& cfg);
ExperimentResult run_line_network(const ExperimentConfig& cfg);

/// 1.96 * sqrt(p (1 - p) / trials).
double binomial_ci_halfwidth(std::size_t successes, std::size_t trials);

/// Paired difference `higher - lower` over common random numbers.
struct PairedComparison {
  double mean_difference = 0.0;
  double standard_error = 0.0;
  /// True unless `higher` is below `lower` by more than `sigmas` standard errors.
  bool non_decreasing(double sigmas = 3.0) const { return mean_difference >= -sigmas * standard_error; }
};

PairedComparison compare_paired(const std::vector<std::uint8_t>& lower, const std::vector<std::uint8_t>& higher);

/// One relay hop: buffers `received` and emits `count` recoded packets.
/// Recode failures drop that packet and are added to `recode_failures`.
std::vector<CodedPacket> relay_forward(const CodingParams& params, std::span<const CodedPacket> received,
                                       std::size_t count, const CandidateSource& candidates,
                                       std::size_t& recode_failures);

/// Worker count from SSAC_THREADS, defaulting to 1.
unsigned threads_from_env();

}  // namespace ssac::sim
