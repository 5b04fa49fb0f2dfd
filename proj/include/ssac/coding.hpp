#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "ssac/gf.hpp"
#include "ssac/header.hpp"
#include "ssac/linalg.hpp"
#include "ssac/random.hpp"

namespace ssac {

/// Session parameters shared by every node of a generation.
struct CodingParams {
  AllowedSet q_set;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t max_attempts = 100000;

  CodingParams(AllowedSet q, std::size_t generation_size, std::size_t sparsity,
               std::size_t attempts = 100000);

  const Field& field() const noexcept { return q_set.field(); }
  std::size_t header_bits() const { return header_len_ssac(m, n, q_set.size()); }
};

/// h || P.
struct CodedPacket {
  HeaderBits header;
  std::vector<Symbol> payload;
  friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

/// The k packets a node holds: sparse coding rows and the matching payload rows.
class NodeBuffer {
 public:
  NodeBuffer(CodingParams params, std::vector<SparseRow> rows, GfMatrix payloads);
  /// Decodes each header under `params`; throws MalformedHeader on a bad header.
  static NodeBuffer from_packets(const CodingParams& params, std::span<const CodedPacket> packets);

  const CodingParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<SparseRow>& rows() const noexcept { return rows_; }
  const GfMatrix& payloads() const noexcept { return payloads_; }
  /// k x n dense coding matrix.
  GfMatrix coding_matrix() const;

 private:
  CodingParams params_;
  std::vector<SparseRow> rows_;
  GfMatrix payloads_;
};

struct RecodeOutcome {
  CodedPacket packet;
  SparseRow row;
  std::size_t attempts = 0;
  /// x with x * E == expand(row).
  GfVector combiner;
};

struct RecodeFailure {
  std::size_t attempts = 0;
};

using RecodeResult = std::variant<RecodeOutcome, RecodeFailure>;

/// Supplies candidate target rows to the recoding search, one per attempt.
using CandidateSource = std::function<SparseRow()>;

/// m distinct positions uniform over [0, n), each with a uniform Q index,
/// returned in ascending position order.
SparseRow random_sparse_vector(const CodingParams& params, Rng& rng);

/// Encodes the n x L original symbols with k >= n random sparse rows.
std::vector<CodedPacket> source_encode(const CodingParams& params, const GfMatrix& originals, std::size_t k,
                                       Rng& rng);

/// Packet for a given sparse row: header plus row * originals.
CodedPacket encode_row(const CodingParams& params, const SparseRow& row, const GfMatrix& originals);

/// Draws candidate rows until one is in the row space of the buffer and
/// differs from every buffered row, then emits x * payloads under its header.
/// Every draw counts as an attempt, the successful one included.
RecodeResult recode(const NodeBuffer& buffer, const CandidateSource& next_candidate);
RecodeResult recode(const NodeBuffer& buffer, Rng& rng);

/// round(m * log_base(n / m)), at least 1.
std::size_t k_opt(std::size_t m, std::size_t n, double log_base = 2.0);

struct InsufficientRank {
  std::size_t rank = 0;
};

using DecodeResult = std::variant<GfMatrix, InsufficientRank>;

/// Recovers the n x L originals when the received coding rows have rank n.
DecodeResult sink_decode(const CodingParams& params, std::span<const CodedPacket> received);

/// Draws n + overhead random sparse rows and reports whether they have rank n.
bool full_rank_probability_trial(const CodingParams& params, std::size_t overhead, Rng& rng);

}  // namespace ssac
