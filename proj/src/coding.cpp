#include "ssac/coding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ssac {

CodingParams::CodingParams(AllowedSet q, std::size_t generation_size, std::size_t sparsity, std::size_t attempts)
    : q_set(std::move(q)), n(generation_size), m(sparsity), max_attempts(attempts) {
  if (n < 2) throw std::invalid_argument("generation size n must be at least 2");
  if (m < 1 || m > n) throw std::invalid_argument("sparsity m must satisfy 1 <= m <= n");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be at least 1");
}

NodeBuffer::NodeBuffer(CodingParams params, std::vector<SparseRow> rows, GfMatrix payloads)
    : params_(std::move(params)), rows_(std::move(rows)), payloads_(std::move(payloads)) {
  if (rows_.empty()) throw std::invalid_argument("node buffer must hold at least one packet");
  if (payloads_.rows() != static_cast<Index>(rows_.size())) {
    throw std::invalid_argument("payload matrix must have one row per buffered packet");
  }
  for (const auto& r : rows_) {
    if (r.n() != params_.n || r.nonzeros() != params_.m) {
      throw std::invalid_argument("buffered row does not match the coding parameters");
    }
    for (const auto& e : r.entries()) {
      if (e.coeff_index >= params_.q_set.size()) throw std::invalid_argument("coefficient index outside Q");
    }
  }
  require_in_field(params_.field(), payloads_);
}

NodeBuffer NodeBuffer::from_packets(const CodingParams& params, std::span<const CodedPacket> packets) {
  if (packets.empty()) throw std::invalid_argument("node buffer must hold at least one packet");
  const auto len = static_cast<Index>(packets.front().payload.size());
  std::vector<SparseRow> rows;
  GfMatrix payloads(static_cast<Index>(packets.size()), len);
  for (std::size_t i = 0; i < packets.size(); ++i) {
    rows.push_back(decode_header(packets[i].header, params.n, params.m, params.q_set));
    if (static_cast<Index>(packets[i].payload.size()) != len) {
      throw std::invalid_argument("payload lengths differ within a generation");
    }
    for (Index j = 0; j < len; ++j) payloads(static_cast<Index>(i), j) = packets[i].payload[static_cast<std::size_t>(j)];
  }
  return NodeBuffer(params, std::move(rows), std::move(payloads));
}

GfMatrix NodeBuffer::coding_matrix() const { return expand_rows(rows_, params_.n, params_.q_set); }

SparseRow random_sparse_vector(const CodingParams& params, Rng& rng) {
  std::vector<SparseEntry> entries;
  entries.reserve(params.m);
  // Distinct positions by rejection.
  while (entries.size() < params.m) {
    const auto pos = static_cast<std::uint32_t>(rng.below(params.n));
    const bool seen = std::any_of(entries.begin(), entries.end(), [&](const SparseEntry& e) { return e.position == pos; });
    if (!seen) entries.push_back({pos, 0});
  }
  for (auto& e : entries) e.coeff_index = static_cast<std::uint32_t>(rng.below(params.q_set.size()));
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.position < b.position; });
  return SparseRow(params.n, std::move(entries));
}

CodedPacket encode_row(const CodingParams& params, const SparseRow& row, const GfMatrix& originals) {
  if (originals.rows() != static_cast<Index>(params.n)) {
    throw std::invalid_argument("originals must have n rows");
  }
  const Field& f = params.field();
  CodedPacket p;
  p.header = encode_header(row, params.m, params.q_set);
  p.payload.assign(static_cast<std::size_t>(originals.cols()), 0);
  for (const auto& e : row.entries()) {
    const Symbol c = params.q_set.element(e.coeff_index);
    for (Index j = 0; j < originals.cols(); ++j) {
      p.payload[static_cast<std::size_t>(j)] ^= f.mul_unchecked(c, originals(e.position, j));
    }
  }
  return p;
}

std::vector<CodedPacket> source_encode(const CodingParams& params, const GfMatrix& originals, std::size_t k,
                                       Rng& rng) {
  if (k < params.n) throw std::invalid_argument("source must emit k >= n packets");
  require_in_field(params.field(), originals);
  std::vector<CodedPacket> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(encode_row(params, random_sparse_vector(params, rng), originals));
  return out;
}

RecodeResult recode(const NodeBuffer& buffer, const CandidateSource& next_candidate) {
  const CodingParams& params = buffer.params();
  const Field& f = params.field();
  const GfMatrix E = buffer.coding_matrix();
  const RowSpaceSolver solver(f, E);

  for (std::size_t attempt = 1; attempt <= params.max_attempts; ++attempt) {
    SparseRow w_row = next_candidate();
    if (w_row.n() != params.n || w_row.nonzeros() != params.m) {
      throw std::invalid_argument("candidate row does not match the coding parameters");
    }
    const auto& held = buffer.rows();
    if (std::find(held.begin(), held.end(), w_row) != held.end()) continue;

    const GfVector w = expand(w_row, params.q_set);
    auto x = solver.solve(w);
    if (!x) continue;

    if (mat_vec_left(f, *x, E) != w) throw std::logic_error("recode produced an unsound combiner");

    RecodeOutcome out;
    out.packet.header = encode_header(w_row, params.m, params.q_set);
    const GfVector payload = mat_vec_left(f, *x, buffer.payloads());
    out.packet.payload.assign(payload.data(), payload.data() + payload.size());
    out.row = std::move(w_row);
    out.attempts = attempt;
    out.combiner = std::move(*x);
    return out;
  }
  return RecodeFailure{params.max_attempts};
}

RecodeResult recode(const NodeBuffer& buffer, Rng& rng) {
  return recode(buffer, [&] { return random_sparse_vector(buffer.params(), rng); });
}

std::size_t k_opt(std::size_t m, std::size_t n, double log_base) {
  if (m < 1 || n <= m) throw std::invalid_argument("k_opt requires n > m >= 1");
  if (!(log_base > 0.0) || log_base == 1.0) throw std::invalid_argument("log base must be positive and not 1");
  const double k = static_cast<double>(m) * std::log(static_cast<double>(n) / static_cast<double>(m)) / std::log(log_base);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(k)));
}

DecodeResult sink_decode(const CodingParams& params, std::span<const CodedPacket> received) {
  if (received.empty()) return InsufficientRank{0};
  const NodeBuffer stacked = NodeBuffer::from_packets(params, received);
  const GfMatrix A = stacked.coding_matrix();
  if (auto X = solve_full_column_rank(params.field(), A, stacked.payloads())) return std::move(*X);
  const auto r = static_cast<std::size_t>(rank(params.field(), A));
  if (r == params.n) throw std::runtime_error("received payloads are inconsistent with their headers");
  return InsufficientRank{r};
}

bool full_rank_probability_trial(const CodingParams& params, std::size_t overhead, Rng& rng) {
  std::vector<SparseRow> rows;
  rows.reserve(params.n + overhead);
  for (std::size_t i = 0; i < params.n + overhead; ++i) rows.push_back(random_sparse_vector(params, rng));
  return rank(params.field(), expand_rows(rows, params.n, params.q_set)) == static_cast<Index>(params.n);
}

}  // namespace ssac
