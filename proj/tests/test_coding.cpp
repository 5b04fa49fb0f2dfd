#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ssac/coding.hpp"
#include "ssac/random.hpp"
#include "test_support.hpp"

using namespace ssac;
using namespace ssac::testing;

namespace {

std::vector<unsigned> to_unsigned(const GfVector& v) { return {v.data(), v.data() + v.size()}; }

GfMatrix random_originals(const Field& f, std::size_t n, std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  GfMatrix m(static_cast<Index>(n), static_cast<Index>(len));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<Symbol>(rng.below(f.order()));
  return m;
}

/// x * P with schoolbook arithmetic.
std::vector<Symbol> oracle_payload(const GfVector& x, const GfMatrix& P, const Field& f) {
  const auto out = oracle_left_product(to_unsigned(x), P, f.poly(), f.width());
  return {out.begin(), out.end()};
}

unsigned oracle_inverse(unsigned a, unsigned poly, int width) {
  for (unsigned b = 1; b < (1u << width); ++b)
    if (schoolbook_mul(a, b, poly, width) == 1) return b;
  return 0;
}

/// Rank by elimination over schoolbook arithmetic.
int oracle_rank(std::vector<std::vector<unsigned>> a, unsigned poly, int width) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const unsigned inv = oracle_inverse(a[r][c], poly, width);
    for (auto& v : a[r]) v = schoolbook_mul(v, inv, poly, width);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const unsigned factor = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] ^= schoolbook_mul(factor, a[r][j], poly, width);
    }
    ++r;
  }
  return static_cast<int>(r);
}

/// Every sparse row of weight m over n, each with every coefficient assignment.
std::vector<SparseRow> all_sparse_rows(std::size_t n, std::size_t m, std::size_t qs) {
  std::vector<SparseRow> out;
  std::vector<int> mask(n, 0);
  std::fill(mask.end() - static_cast<long>(m), mask.end(), 1);
  do {
    std::vector<std::uint32_t> pos;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) pos.push_back(static_cast<std::uint32_t>(i));
    std::size_t combos = 1;
    for (std::size_t i = 0; i < m; ++i) combos *= qs;
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<SparseEntry> e;
      std::size_t c = code;
      for (auto p : pos) {
        e.push_back({p, static_cast<std::uint32_t>(c % qs)});
        c /= qs;
      }
      out.emplace_back(n, std::move(e));
    }
  } while (std::next_permutation(mask.begin(), mask.end()));
  return out;
}

/// Candidates a single-row buffer can emit: scalar multiples of that row that
/// are valid sparse rows other than the row itself.
std::size_t oracle_single_row_targets(const SparseRow& held, const AllowedSet& q) {
  const Field& f = q.field();
  const auto h = to_unsigned(expand(held, q));
  std::size_t count = 0;
  for (const SparseRow& cand : all_sparse_rows(held.n(), held.nonzeros(), q.size())) {
    if (cand == held) continue;
    const auto w = to_unsigned(expand(cand, q));
    for (unsigned a = 1; a < f.order(); ++a) {
      bool equal = true;
      for (std::size_t j = 0; j < h.size() && equal; ++j) equal = schoolbook_mul(a, h[j], f.poly(), f.width()) == w[j];
      if (equal) {
        ++count;
        break;
      }
    }
  }
  return count;
}

}  // namespace

TEST(CodingParams, Validation) {
  const AllowedSet q = AllowedSet::default_for(Field::gf16());
  EXPECT_THROW(CodingParams(q, 1, 1), std::invalid_argument);
  EXPECT_THROW(CodingParams(q, 8, 0), std::invalid_argument);
  EXPECT_THROW(CodingParams(q, 8, 9), std::invalid_argument);
  EXPECT_THROW(CodingParams(q, 8, 3, 0), std::invalid_argument);
  EXPECT_EQ(CodingParams(q, 8, 3).header_bits(), 12u);
}

TEST(RandomSparseVector, ShapeAndDeterminism) {
  const CodingParams params = example_params();
  Rng a(42);
  Rng b(42);
  for (int t = 0; t < 100; ++t) {
    const SparseRow r = random_sparse_vector(params, a);
    EXPECT_EQ(r, random_sparse_vector(params, b));
    EXPECT_EQ(r.nonzeros(), 3u);
    EXPECT_EQ(r.n(), 8u);
  }
  const CodingParams full(params.q_set, 8, 8);
  Rng c(1);
  const SparseRow r = random_sparse_vector(full, c);
  for (std::uint32_t i = 0; i < 8; ++i) EXPECT_EQ(r.entries()[i].position, i);
}

TEST(RandomSparseVector, UniformPositionsAndCoefficients) {
  const CodingParams params(AllowedSet::default_for(Field::gf16()), 8, 2);
  Rng rng(9);
  constexpr int draws = 10000;
  std::vector<int> pos(8, 0);
  int second = 0;
  for (int t = 0; t < draws; ++t) {
    const SparseRow r = random_sparse_vector(params, rng);
    for (const auto& e : r.entries()) {
      ++pos[e.position];
      second += static_cast<int>(e.coeff_index);
    }
  }
  const double sigma = std::sqrt(0.25 * 0.75 / draws);
  for (int p : pos) EXPECT_NEAR(p / static_cast<double>(draws), 0.25, 4 * sigma);
  EXPECT_NEAR(second / (2.0 * draws), 0.5, 4 * std::sqrt(0.25 / (2.0 * draws)));
}

TEST(SourceEncode, PacketsMatchOracle) {
  const CodingParams params = example_params();
  const GfMatrix originals = random_originals(params.field(), 8, 4, 3);
  Rng rng(7);
  EXPECT_THROW(source_encode(params, originals, 7, rng), std::invalid_argument);
  const auto packets = source_encode(params, originals, 8, rng);
  ASSERT_EQ(packets.size(), 8u);
  for (const auto& p : packets) {
    EXPECT_EQ(p.header.size(), 12u);
    const SparseRow r = decode_header(p.header, 8, 3, params.q_set);
    EXPECT_EQ(p.payload, oracle_payload(expand(r, params.q_set), originals, params.field()));
  }
}

TEST(SourceEncode, RejectsForeignOriginals) {
  const CodingParams params = example_params();
  GfMatrix originals = GfMatrix::Zero(8, 2);
  originals(3, 1) = 99;
  Rng rng(1);
  EXPECT_THROW(source_encode(params, originals, 8, rng), FieldError);
}

TEST(Recode, WorkedExampleWithForcedTarget) {
  const NodeBuffer buffer = example_buffer();
  const SparseRow target(8, {{1, 0}, {2, 0}, {4, 1}});
  const auto result = recode(buffer, [&] { return target; });
  ASSERT_TRUE(std::holds_alternative<RecodeOutcome>(result));
  const auto& out = std::get<RecodeOutcome>(result);
  EXPECT_EQ(out.attempts, 1u);
  EXPECT_EQ(out.packet.header.to_string(), "000100101100");
  EXPECT_EQ(out.combiner, example_combiner());
  const auto xe = oracle_left_product(to_unsigned(out.combiner), example_matrix(), 0x19, 4);
  EXPECT_EQ(xe, to_unsigned(example_target()));
  EXPECT_EQ(out.packet.payload, oracle_payload(out.combiner, example_payloads(), Field::gf16()));
}

TEST(Recode, AttemptsCountEveryDraw) {
  const NodeBuffer buffer = example_buffer();
  const SparseRow held = buffer.rows()[0];
  const SparseRow outside(8, {{0, 0}, {1, 0}, {2, 0}});
  const SparseRow target(8, {{1, 0}, {2, 0}, {4, 1}});
  std::vector<SparseRow> script{held, outside, outside, target};
  std::size_t i = 0;
  const auto result = recode(buffer, [&] { return script.at(i++); });
  ASSERT_TRUE(std::holds_alternative<RecodeOutcome>(result));
  EXPECT_EQ(std::get<RecodeOutcome>(result).attempts, 4u);
}

TEST(Recode, GiveUpAfterMaxAttempts) {
  CodingParams params = example_params();
  params.max_attempts = 50;
  const NodeBuffer buffer(params, example_buffer().rows(), example_payloads());
  const SparseRow outside(8, {{0, 0}, {1, 0}, {2, 0}});
  const auto result = recode(buffer, [&] { return outside; });
  ASSERT_TRUE(std::holds_alternative<RecodeFailure>(result));
  EXPECT_EQ(std::get<RecodeFailure>(result).attempts, 50u);
}

TEST(Recode, FullRankBufferAlwaysSucceeds) {
  const CodingParams params = example_params();
  const GfMatrix originals = random_originals(params.field(), 8, 5, 11);
  // Row i holds only coefficient 4 at positions i, i+1, i+2 (cyclic), so the
  // circulant has full rank when 1 + x + x^2 is coprime to x^8 - 1.
  std::vector<SparseRow> rows;
  for (std::uint32_t i = 0; i < 8; ++i) {
    std::vector<std::uint32_t> p{i, (i + 1) % 8, (i + 2) % 8};
    std::sort(p.begin(), p.end());
    rows.emplace_back(8, std::vector<SparseEntry>{{p[0], 0}, {p[1], 0}, {p[2], 0}});
  }
  std::vector<CodedPacket> packets;
  for (const auto& r : rows) packets.push_back(encode_row(params, r, originals));
  const NodeBuffer buffer = NodeBuffer::from_packets(params, packets);
  ASSERT_EQ(rank(params.field(), buffer.coding_matrix()), 8);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto result = recode(buffer, rng);
    ASSERT_TRUE(std::holds_alternative<RecodeOutcome>(result));
    const auto& out = std::get<RecodeOutcome>(result);
    EXPECT_EQ(out.packet, encode_row(params, out.row, originals));
    EXPECT_EQ(std::find(rows.begin(), rows.end(), out.row), rows.end());
  }
}

TEST(Recode, SingleMixedRowHasNoTarget) {
  CodingParams params = example_params();
  params.max_attempts = 2000;
  const SparseRow held(8, {{0, 0}, {3, 1}, {5, 0}});
  EXPECT_EQ(oracle_single_row_targets(held, params.q_set), 0u);
  const NodeBuffer buffer(params, {held}, GfMatrix::Ones(1, 3));
  Rng rng(3);
  const auto result = recode(buffer, rng);
  ASSERT_TRUE(std::holds_alternative<RecodeFailure>(result));
  EXPECT_EQ(std::get<RecodeFailure>(result).attempts, 2000u);
}

TEST(Recode, SingleUniformRowAdmitsRescaledTarget) {
  const CodingParams params = example_params();
  const SparseRow held(8, {{0, 0}, {1, 0}, {2, 0}});
  ASSERT_EQ(oracle_single_row_targets(held, params.q_set), 1u);
  GfMatrix payload(1, 2);
  payload << 3, 9;
  const NodeBuffer buffer(params, {held}, payload);
  Rng rng(4);
  const auto result = recode(buffer, rng);
  ASSERT_TRUE(std::holds_alternative<RecodeOutcome>(result));
  const auto& out = std::get<RecodeOutcome>(result);
  EXPECT_EQ(out.row, SparseRow(8, {{0, 1}, {1, 1}, {2, 1}}));
  // 14 = 4 * r, so x = r = 14 / 4.
  const unsigned r = schoolbook_mul(14, oracle_inverse(4, 0x19, 4), 0x19, 4);
  EXPECT_EQ(out.combiner(0), r);
  EXPECT_EQ(out.packet.payload, (std::vector<Symbol>{static_cast<Symbol>(schoolbook_mul(r, 3, 0x19, 4)),
                                                     static_cast<Symbol>(schoolbook_mul(r, 9, 0x19, 4))}));
}

// The number of innovative targets seen by exhaustive enumeration bounds the
// success rate of random recoding from the example buffer.
TEST(Recode, ExampleBufferTargetCountMatchesEnumeration) {
  const NodeBuffer buffer = example_buffer();
  const auto& params = buffer.params();
  std::size_t reachable = 0;
  const auto all = all_sparse_rows(8, 3, 2);
  for (const auto& cand : all) {
    if (std::find(buffer.rows().begin(), buffer.rows().end(), cand) != buffer.rows().end()) continue;
    if (left_solve(params.field(), buffer.coding_matrix(), expand(cand, params.q_set))) ++reachable;
  }
  ASSERT_GT(reachable, 0u);
  const double p = static_cast<double>(reachable) / static_cast<double>(all.size());
  Rng rng(21);
  double attempts = 0;
  constexpr int runs = 400;
  for (int t = 0; t < runs; ++t) {
    const auto result = recode(buffer, rng);
    ASSERT_TRUE(std::holds_alternative<RecodeOutcome>(result));
    attempts += static_cast<double>(std::get<RecodeOutcome>(result).attempts);
  }
  const double mean = attempts / runs;
  const double sd = std::sqrt((1 - p) / (p * p) / runs);
  EXPECT_NEAR(mean, 1 / p, 4 * sd);
}

TEST(KOpt, Values) {
  EXPECT_EQ(k_opt(2, 128), 12u);
  EXPECT_EQ(k_opt(2, 128, std::exp(1.0)), 8u);
  EXPECT_EQ(k_opt(3, 128), 16u);
  EXPECT_EQ(k_opt(2, 16), 6u);
  EXPECT_EQ(k_opt(3, 4), 1u);
  EXPECT_THROW(k_opt(4, 4), std::invalid_argument);
  EXPECT_THROW(k_opt(0, 4), std::invalid_argument);
}

TEST(SinkDecode, InvertibleAndDeficient) {
  const CodingParams params(AllowedSet::default_for(Field::gf16()), 4, 1);
  const GfMatrix originals = random_originals(params.field(), 4, 3, 17);
  std::vector<CodedPacket> packets;
  for (std::uint32_t i = 0; i < 4; ++i) packets.push_back(encode_row(params, SparseRow(4, {{i, i % 2}}), originals));
  const auto ok = sink_decode(params, packets);
  ASSERT_TRUE(std::holds_alternative<GfMatrix>(ok));
  EXPECT_EQ(std::get<GfMatrix>(ok), originals);

  const std::vector<CodedPacket> dup(3, packets[1]);
  const auto bad = sink_decode(params, dup);
  ASSERT_TRUE(std::holds_alternative<InsufficientRank>(bad));
  EXPECT_EQ(std::get<InsufficientRank>(bad).rank, 1u);
  EXPECT_EQ(std::get<InsufficientRank>(sink_decode(params, std::span<const CodedPacket>{})).rank, 0u);
}

TEST(SinkDecode, InconsistentPayloadsThrow) {
  const CodingParams params(AllowedSet::default_for(Field::gf16()), 4, 1);
  const GfMatrix originals = random_originals(params.field(), 4, 3, 17);
  std::vector<CodedPacket> packets;
  for (std::uint32_t i = 0; i < 4; ++i) packets.push_back(encode_row(params, SparseRow(4, {{i, 0}}), originals));
  packets.push_back(packets[2]);
  packets.back().payload[0] ^= 1;
  EXPECT_THROW(sink_decode(params, packets), std::runtime_error);
}

TEST(SinkDecode, EndToEndFromSource) {
  const CodingParams params = example_params();
  const GfMatrix originals = random_originals(params.field(), 8, 6, 23);
  Rng rng(99);
  const auto packets = source_encode(params, originals, 8 + 16, rng);
  const auto out = sink_decode(params, packets);
  ASSERT_TRUE(std::holds_alternative<GfMatrix>(out));
  EXPECT_EQ(std::get<GfMatrix>(out), originals);
}

TEST(NodeBuffer, RejectsMalformedInput) {
  const CodingParams params = example_params();
  CodedPacket p{HeaderBits::from_string("0010 0001 1100"), {1, 2}};
  EXPECT_THROW(NodeBuffer::from_packets(params, std::vector<CodedPacket>{p}), MalformedHeader);
  EXPECT_THROW(NodeBuffer(params, {}, GfMatrix(0, 2)), std::invalid_argument);
  EXPECT_THROW(NodeBuffer(params, {SparseRow(8, {{1, 0}, {2, 0}, {4, 1}})}, GfMatrix::Zero(2, 2)),
               std::invalid_argument);
  EXPECT_THROW(NodeBuffer(params, {SparseRow(8, {{1, 0}, {2, 0}})}, GfMatrix::Zero(1, 2)), std::invalid_argument);
}

// Every packet produced anywhere along a chain of relays must be the encoding
// of its own header against the originals, and the sink must recover them.
TEST(RecodeChain, HopsPreserveConsistencyAndDecode) {
  for (const AllowedSet& q : {AllowedSet::default_for(Field::gf16()), AllowedSet::default_for(Field::gf256())}) {
    const CodingParams params(q, 16, 3);
    const GfMatrix originals = random_originals(params.field(), 16, 4, 31);
    Rng rng(1234);
    std::vector<CodedPacket> hop = source_encode(params, originals, 16 + 24, rng);
    for (int depth = 1; depth <= 4; ++depth) {
      const NodeBuffer buffer = NodeBuffer::from_packets(params, hop);
      std::vector<CodedPacket> next;
      for (std::size_t i = 0; i < hop.size(); ++i) {
        const auto result = recode(buffer, rng);
        if (const auto* out = std::get_if<RecodeOutcome>(&result)) {
          EXPECT_EQ(out->packet, encode_row(params, out->row, originals));
          next.push_back(out->packet);
        }
      }
      hop = std::move(next);
      const auto decoded = sink_decode(params, hop);
      if (const auto* X = std::get_if<GfMatrix>(&decoded)) EXPECT_EQ(*X, originals) << depth;
    }
    const auto final = sink_decode(params, hop);
    ASSERT_TRUE(std::holds_alternative<GfMatrix>(final));
    EXPECT_EQ(std::get<GfMatrix>(final), originals);
  }
}

TEST(FullRank, LargeOverheadAlmostAlwaysFullRank) {
  const CodingParams params(AllowedSet::default_for(Field::gf256()), 16, 3);
  Rng rng(2);
  int hits = 0;
  for (int t = 0; t < 500; ++t) hits += full_rank_probability_trial(params, 64, rng);
  EXPECT_GE(hits, 495);
}

TEST(FullRank, VerySparseWithoutOverheadFallsShortOfDense) {
  const AllowedSet q = AllowedSet::default_for(Field::gf16());
  const CodingParams params(q, 16, 2);
  constexpr int trials = 2000;
  Rng rng(3);
  int sparse = 0;
  int dense = 0;
  for (int t = 0; t < trials; ++t) {
    sparse += full_rank_probability_trial(params, 0, rng);
    GfMatrix A(16, 16);
    for (Index i = 0; i < 16; ++i)
      for (Index j = 0; j < 16; ++j) A(i, j) = static_cast<Symbol>(rng.below(16));
    dense += rank(q.field(), A) == 16;
  }
  double baseline = 1.0;
  for (int i = 1; i <= 16; ++i) baseline *= 1.0 - std::pow(16.0, -i);
  const double pd = dense / static_cast<double>(trials);
  EXPECT_NEAR(pd, baseline, 4 * std::sqrt(baseline * (1 - baseline) / trials));
  EXPECT_LT(sparse / static_cast<double>(trials), baseline - 0.5);
}

// With m = n every row covers all positions, so the exact full-rank
// probability follows from enumerating all |Q|^(n*n) matrices at n = 4.
TEST(FullRank, DenseSupportMatchesExhaustiveEnumeration) {
  const AllowedSet q = AllowedSet::default_for(Field::gf16());
  const CodingParams params(q, 4, 4);
  std::size_t full = 0;
  for (unsigned code = 0; code < (1u << 16); ++code) {
    std::vector<std::vector<unsigned>> a(4, std::vector<unsigned>(4));
    GfMatrix A(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        a[i][j] = q.element((code >> (4 * i + j)) & 1u);
        A(i, j) = static_cast<Symbol>(a[i][j]);
      }
    const int r = oracle_rank(a, 0x19, 4);
    ASSERT_EQ(rank(q.field(), A), r) << code;
    full += r == 4;
  }
  const double exact = static_cast<double>(full) / 65536.0;
  EXPECT_GT(exact, 0.0);
  EXPECT_LT(exact, 1.0);
  Rng rng(8);
  constexpr int trials = 20000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) hits += full_rank_probability_trial(params, 0, rng);
  EXPECT_NEAR(hits / static_cast<double>(trials), exact, 4 * std::sqrt(exact * (1 - exact) / trials));
}
