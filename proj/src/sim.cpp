#include "ssac/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

namespace ssac::sim {
namespace {

// Stream ids under Rng(seed, trial, stream), shared by every grid point.
constexpr std::uint64_t kRowStream = 0;
constexpr std::uint64_t kCandidateStream = 1;
constexpr std::uint64_t kPayloadStream = 2;
constexpr std::uint64_t kHopStreamBase = 16;

template <typename Fn>
auto run_trials(std::size_t trials, unsigned threads, Fn&& fn) {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) out[t] = fn(t);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < trials; t += workers) out[t] = fn(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

GfMatrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng) {
  GfMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<Symbol>(rng.below(f.order()));
  return m;
}

void finish(GridRecord& rec, const std::vector<std::uint8_t>& flags) {
  rec.trials = flags.size();
  rec.outcomes = flags;
  rec.successes = 0;
  for (auto f : flags) rec.successes += f;
  rec.failures = rec.trials - rec.successes;
  rec.success_probability = static_cast<double>(rec.successes) / static_cast<double>(rec.trials);
  rec.ci_halfwidth = binomial_ci_halfwidth(rec.successes, rec.trials);
}

ExperimentMetadata metadata_for(const ExperimentConfig& cfg) {
  ExperimentMetadata md;
  md.seed = cfg.seed;
  md.k_rule = cfg.k_rule.label();
  md.log_bases = cfg.log_bases;
  for (const auto& q : cfg.fields) {
    md.fields.push_back(q.field().describe());
    md.allowed_sets.emplace_back(q.elements().begin(), q.elements().end());
  }
  for (auto m : cfg.ms)
    for (auto n : cfg.ns)
      if (n > m) md.k_opt.push_back({m, n, k_opt(m, n, 2.0), k_opt(m, n, std::numbers::e)});
  return md;
}

void require_kind(const ExperimentConfig& cfg, ExperimentKind kind) {
  if (cfg.kind != kind) throw std::invalid_argument("experiment kind does not match the runner");
  cfg.validate();
}

}  // namespace

KRule KRule::parse(const std::string& text) {
  KRule r;
  if (text == "explicit") {
    r.kind = Kind::Explicit;
    return r;
  }
  if (text.rfind("kopt", 0) != 0) throw std::invalid_argument("k rule must be explicit, kopt or kopt+D");
  r.kind = Kind::KOpt;
  const std::string rest = text.substr(4);
  if (rest.empty()) return r;
  std::size_t used = 0;
  long delta = 0;
  try {
    delta = std::stol(rest, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad k rule offset in '" + text + "'");
  }
  if (used != rest.size() || (rest[0] != '+' && rest[0] != '-')) {
    throw std::invalid_argument("bad k rule offset in '" + text + "'");
  }
  r.delta = delta;
  return r;
}

std::string KRule::label() const {
  if (kind == Kind::Explicit) return "explicit";
  if (delta == 0) return "kopt";
  return "kopt" + std::string(delta > 0 ? "+" : "") + std::to_string(delta);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw std::invalid_argument("invalid grid: " + why); };
  if (trials < 1) fail("trials must be at least 1");
  if (fields.empty()) fail("no fields");
  if (ns.empty()) fail("no generation sizes");
  if (ms.empty()) fail("no sparsity values");
  for (auto n : ns)
    if (n < 2) fail("n must be at least 2");
  for (auto m : ms)
    if (m < 1) fail("m must be at least 1");
  if (kind == ExperimentKind::HeaderTable) return;
  for (auto n : ns)
    for (auto m : ms)
      if (m > n) fail("m must not exceed n");
  if (max_attempts < 1) fail("max_attempts must be at least 1");
  switch (kind) {
    case ExperimentKind::SolutionExistence:
      if (k_rule.kind == KRule::Kind::Explicit) {
        if (ks.empty()) fail("explicit k rule needs k values");
        for (auto k : ks)
          if (k < 1) fail("k must be at least 1");
      } else {
        if (log_bases.empty()) fail("no log bases");
        for (auto n : ns)
          for (auto m : ms)
            if (n <= m) fail("k_opt needs n > m");
      }
      break;
    case ExperimentKind::FullRank:
    case ExperimentKind::LineNetwork:
      if (overheads.empty()) fail("no overhead values");
      break;
    case ExperimentKind::HeaderTable:
      break;
  }
}

double binomial_ci_halfwidth(std::size_t successes, std::size_t trials) {
  if (trials == 0) return 0.0;
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

PairedComparison compare_paired(const std::vector<std::uint8_t>& lower, const std::vector<std::uint8_t>& higher) {
  if (lower.size() != higher.size() || lower.empty()) {
    throw std::invalid_argument("paired comparison needs equal, nonempty trial vectors");
  }
  const double count = static_cast<double>(lower.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const double d = static_cast<double>(higher[i]) - static_cast<double>(lower[i]);
    sum += d;
    sum_sq += d * d;
  }
  PairedComparison out;
  out.mean_difference = sum / count;
  const double var = lower.size() > 1 ? (sum_sq - count * out.mean_difference * out.mean_difference) / (count - 1.0) : 0.0;
  out.standard_error = std::sqrt(std::max(0.0, var) / count);
  return out;
}

ExperimentResult run_solution_existence(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::SolutionExistence);
  ExperimentResult result;
  result.metadata = metadata_for(cfg);

  struct Point {
    std::size_t k;
    double base;
  };
  for (const auto& q_set : cfg.fields) {
    for (auto m : cfg.ms) {
      for (auto n : cfg.ns) {
        std::vector<Point> points;
        if (cfg.k_rule.kind == KRule::Kind::Explicit) {
          for (auto k : cfg.ks) points.push_back({k, cfg.log_bases.empty() ? 2.0 : cfg.log_bases.front()});
        } else {
          for (double base : cfg.log_bases) {
            const long k = static_cast<long>(k_opt(m, n, base)) + cfg.k_rule.delta;
            if (k < 1) throw std::invalid_argument("invalid grid: k rule yields k < 1");
            points.push_back({static_cast<std::size_t>(k), base});
          }
        }
        const CodingParams params(q_set, n, m, cfg.max_attempts);
        for (const auto& pt : points) {
          struct Trial {
            std::uint8_t ok = 0;
            std::size_t attempts = 0;
          };
          auto trials = run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
            Rng rows_rng(cfg.seed, t, kRowStream);
            Rng cand_rng(cfg.seed, t, kCandidateStream);
            Rng payload_rng(cfg.seed, t, kPayloadStream);
            std::vector<SparseRow> rows;
            for (std::size_t i = 0; i < pt.k; ++i) rows.push_back(random_sparse_vector(params, rows_rng));
            NodeBuffer buffer(params, std::move(rows), random_matrix(params.field(), pt.k, cfg.payload_len, payload_rng));
            const auto outcome = recode(buffer, cand_rng);
            if (const auto* ok = std::get_if<RecodeOutcome>(&outcome)) return Trial{1, ok->attempts};
            return Trial{0, std::get<RecodeFailure>(outcome).attempts};
          });

          GridRecord rec;
          rec.n = n;
          rec.m = m;
          rec.q = q_set.field().order();
          rec.k = pt.k;
          rec.log_base = pt.base;
          rec.k_rule = cfg.k_rule.label();
          std::vector<std::uint8_t> flags;
          double attempts = 0.0;
          for (const auto& tr : trials) {
            flags.push_back(tr.ok);
            if (tr.ok) attempts += static_cast<double>(tr.attempts);
          }
          finish(rec, flags);
          rec.mean_attempts = rec.successes > 0 ? attempts / static_cast<double>(rec.successes)
                                                : std::numeric_limits<double>::quiet_NaN();
          result.records.push_back(std::move(rec));
        }
      }
    }
  }
  return result;
}

ExperimentResult run_full_rank(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::FullRank);
  ExperimentResult result;
  result.metadata = metadata_for(cfg);
  for (const auto& q_set : cfg.fields) {
    for (auto m : cfg.ms) {
      for (auto n : cfg.ns) {
        const CodingParams params(q_set, n, m, cfg.max_attempts);
        for (auto overhead : cfg.overheads) {
          auto flags = run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
            Rng rng(cfg.seed, t, kRowStream);
            return static_cast<std::uint8_t>(full_rank_probability_trial(params, overhead, rng));
          });
          GridRecord rec;
          rec.n = n;
          rec.m = m;
          rec.q = q_set.field().order();
          rec.overhead = overhead;
          rec.k = n + overhead;
          finish(rec, flags);
          result.records.push_back(std::move(rec));
        }
      }
    }
  }
  return result;
}

std::vector<HeaderTableRow> run_header_table(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::HeaderTable);
  std::vector<HeaderTableRow> rows;
  for (const auto& q_set : cfg.fields) {
    const std::size_t q = q_set.field().order();
    for (auto m : cfg.ms) {
      for (auto n : cfg.ns) {
        HeaderTableRow r;
        r.n = n;
        r.m = m;
        r.q = q;
        r.ssac_bits = header_len_ssac(m, n, q_set.size());
        r.rlnc_bits = header_len_rlnc(n, q);
        r.ecc_bits = header_len_ecc(m, n, q);
        r.rlnc_over_ssac = static_cast<double>(r.rlnc_bits) / static_cast<double>(r.ssac_bits);
        r.ecc_over_ssac = static_cast<double>(r.ecc_bits) / static_cast<double>(r.ssac_bits);
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<CodedPacket> relay_forward(const CodingParams& params, std::span<const CodedPacket> received,
                                       std::size_t count, const CandidateSource& candidates,
                                       std::size_t& recode_failures) {
  std::vector<CodedPacket> out;
  if (received.empty()) {
    recode_failures += count;
    return out;
  }
  const NodeBuffer buffer = NodeBuffer::from_packets(params, received);
  for (std::size_t i = 0; i < count; ++i) {
    auto outcome = recode(buffer, candidates);
    if (auto* ok = std::get_if<RecodeOutcome>(&outcome)) {
      out.push_back(std::move(ok->packet));
    } else {
      ++recode_failures;
    }
  }
  return out;
}

ExperimentResult run_line_network(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::LineNetwork);
  ExperimentResult result;
  result.metadata = metadata_for(cfg);
  for (const auto& q_set : cfg.fields) {
    for (auto m : cfg.ms) {
      for (auto n : cfg.ns) {
        const CodingParams params(q_set, n, m, cfg.max_attempts);
        const std::size_t header_bits = params.header_bits();
        for (auto overhead : cfg.overheads) {
          const std::size_t per_hop = n + overhead;
          struct Trial {
            std::uint8_t ok = 0;
            std::size_t recode_failures = 0;
            std::size_t packets_sent = 0;
          };
          auto trials = run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
            Rng payload_rng(cfg.seed, t, kPayloadStream);
            Rng rows_rng(cfg.seed, t, kRowStream);
            const GfMatrix originals = random_matrix(params.field(), n, cfg.payload_len, payload_rng);
            std::vector<CodedPacket> in_flight = source_encode(params, originals, per_hop, rows_rng);
            Trial tr;
            tr.packets_sent = in_flight.size();
            for (std::size_t hop = 0; hop < cfg.depth; ++hop) {
              Rng cand_rng(cfg.seed, t, kHopStreamBase + hop);
              in_flight = relay_forward(params, in_flight, per_hop,
                                        [&] { return random_sparse_vector(params, cand_rng); },
                                        tr.recode_failures);
              tr.packets_sent += in_flight.size();
            }
            const auto decoded = sink_decode(params, in_flight);
            if (const auto* X = std::get_if<GfMatrix>(&decoded)) {
              if (*X != originals) throw std::logic_error("sink decoded a full-rank generation incorrectly");
              tr.ok = 1;
            }
            return tr;
          });

          GridRecord rec;
          rec.n = n;
          rec.m = m;
          rec.q = q_set.field().order();
          rec.k = per_hop;
          rec.overhead = overhead;
          rec.depth = cfg.depth;
          std::vector<std::uint8_t> flags;
          double bits = 0.0;
          for (const auto& tr : trials) {
            flags.push_back(tr.ok);
            rec.recode_failures += tr.recode_failures;
            bits += static_cast<double>(tr.packets_sent * header_bits);
          }
          finish(rec, flags);
          rec.mean_header_bits = bits / static_cast<double>(cfg.trials);
          result.records.push_back(std::move(rec));
        }
      }
    }
  }
  return result;
}

unsigned threads_from_env() {
  const char* raw = std::getenv("SSAC_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return 1;
  return static_cast<unsigned>(std::min<unsigned long>(v, 256));
}

}  // namespace ssac::sim
