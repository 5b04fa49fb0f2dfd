#include "ssac/cli.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ssac/coding.hpp"
#include "ssac/packet_file.hpp"
#include "ssac/report.hpp"
#include "ssac/sim.hpp"

namespace ssac::cli {
namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FieldFlags {
  std::vector<std::size_t> qs{16};
  std::string poly;
  std::vector<unsigned> q_set;
};

void add_field_flags(CLI::App* app, FieldFlags& f, bool multi_q) {
  auto* q = app->add_option("--q", f.qs, "Field order(s) 2^w, w in 1..8");
  if (multi_q) q->delimiter(',');
  app->add_option("--poly", f.poly, "Irreducible polynomial bitmask (e.g. 0x19); default per field");
  app->add_option("--Q", f.q_set, "Allowed coefficient set; default {4,14} in GF(16), {21,43} in GF(256)")
      ->delimiter(',');
}

std::vector<AllowedSet> field_choices(const FieldFlags& f) {
  if (f.qs.empty()) throw UsageError("--q needs at least one field order");
  if (f.qs.size() > 1 && (!f.poly.empty() || !f.q_set.empty())) {
    throw UsageError("--poly and --Q apply to a single --q value");
  }
  std::vector<AllowedSet> out;
  for (auto q : f.qs) {
    if (q < 2 || q > 256 || !std::has_single_bit(q)) throw UsageError("--q must be a power of two in 2..256");
    const int width = std::countr_zero(q);
    unsigned poly = Field::default_poly(width);
    if (!f.poly.empty()) {
      std::size_t used = 0;
      try {
        poly = static_cast<unsigned>(std::stoul(f.poly, &used, 0));
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != f.poly.size()) throw UsageError("--poly must be an integer bitmask");
    }
    const Field field(width, poly);
    if (f.q_set.empty()) {
      out.push_back(AllowedSet::default_for(field));
    } else {
      std::vector<Symbol> elems;
      for (auto v : f.q_set) {
        if (v > 255) throw UsageError("--Q elements must be field elements");
        elems.push_back(static_cast<Symbol>(v));
      }
      out.emplace_back(field, std::move(elems));
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path);
}

double parse_log_base(const std::string& text) {
  if (text == "e") return std::numbers::e;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("--log-base must be a number or 'e'");
  return v;
}

SparseRow parse_forced_row(const std::string& text, std::size_t n) {
  std::vector<SparseEntry> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--force-w expects position:index pairs");
    entries.push_back({static_cast<std::uint32_t>(std::stoul(item.substr(0, colon))),
                       static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)))});
  }
  return SparseRow(n, std::move(entries));
}

struct ExperimentFlags {
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ms{3};
  std::vector<std::size_t> ks;
  std::vector<std::size_t> overheads{0};
  std::vector<std::string> log_bases{"2"};
  std::string k_rule = "kopt";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t depth = 1;
  std::size_t payload_len = 4;
  std::size_t max_attempts = 100000;
  std::string out;
  std::string meta;
  FieldFlags field;
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
  app->add_option("--n", f.ns, "Generation sizes")->delimiter(',')->required();
  app->add_option("--m", f.ms, "Sparsity values")->delimiter(',');
  app->add_option("--k", f.ks, "Buffer sizes (with --k-rule explicit)")->delimiter(',');
  app->add_option("--k-rule", f.k_rule, "explicit | kopt | kopt+D");
  app->add_option("--log-base", f.log_bases, "Log base(s) for k_opt: number or e")->delimiter(',');
  app->add_option("--overhead", f.overheads, "Extra packets beyond n")->delimiter(',');
  app->add_option("--trials", f.trials, "Trials per grid point");
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--depth", f.depth, "Relay hops (line-network)");
  app->add_option("--payload-len", f.payload_len, "Payload symbols per packet");
  app->add_option("--max-attempts", f.max_attempts, "Bound on recoding draws");
  app->add_option("--out", f.out, "CSV output file (default stdout)");
  app->add_option("--meta", f.meta, "Write run metadata as JSON to this file");
  add_field_flags(app, f.field, true);
}

sim::ExperimentConfig make_config(const ExperimentFlags& f, sim::ExperimentKind kind) {
  sim::ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.fields = field_choices(f.field);
  cfg.ns = f.ns;
  cfg.ms = f.ms;
  cfg.ks = f.ks;
  cfg.overheads = f.overheads;
  cfg.log_bases.clear();
  for (const auto& b : f.log_bases) cfg.log_bases.push_back(parse_log_base(b));
  cfg.k_rule = sim::KRule::parse(f.k_rule);
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.depth = f.depth;
  cfg.payload_len = f.payload_len;
  cfg.max_attempts = f.max_attempts;
  cfg.threads = sim::threads_from_env();
  return cfg;
}

int run_experiment(const ExperimentFlags& f, sim::ExperimentKind kind, std::ostream& out) {
  const auto cfg = make_config(f, kind);
  std::ostringstream csv;
  std::optional<sim::ExperimentMetadata> metadata;
  switch (kind) {
    case sim::ExperimentKind::SolutionExistence: {
      auto r = sim::run_solution_existence(cfg);
      report::write_solution_existence_csv(csv, r);
      metadata = r.metadata;
      break;
    }
    case sim::ExperimentKind::FullRank: {
      auto r = sim::run_full_rank(cfg);
      report::write_full_rank_csv(csv, r);
      metadata = r.metadata;
      break;
    }
    case sim::ExperimentKind::HeaderTable:
      report::write_header_table_csv(csv, sim::run_header_table(cfg));
      break;
    case sim::ExperimentKind::LineNetwork: {
      auto r = sim::run_line_network(cfg);
      report::write_line_network_csv(csv, r);
      metadata = r.metadata;
      break;
    }
  }
  if (f.out.empty()) {
    out << csv.str();
  } else {
    const std::string s = csv.str();
    write_file(f.out, std::vector<std::uint8_t>(s.begin(), s.end()));
  }
  if (!f.meta.empty() && metadata) {
    std::ostringstream js;
    report::write_metadata_json(js, *metadata);
    const std::string s = js.str();
    write_file(f.meta, std::vector<std::uint8_t>(s.begin(), s.end()));
  }
  return kOk;
}

struct EncodeFlags {
  std::string in;
  std::string out;
  std::size_t n = 0;
  std::size_t m = 3;
  std::optional<std::size_t> k;
  std::uint64_t seed = 1;
  FieldFlags field;
};

int run_encode(const EncodeFlags& f, std::ostream& out) {
  const auto choices = field_choices(f.field);
  if (choices.size() != 1) throw UsageError("encode takes a single --q");
  const CodingParams params(choices.front(), f.n, f.m);
  const int width = params.field().width();

  const auto raw = read_file(f.in);
  if (raw.empty()) throw std::invalid_argument("originals file is empty");
  const std::size_t symbols = width == 4 ? raw.size() * 2 : raw.size();
  if (symbols % f.n != 0) {
    throw std::invalid_argument("originals hold " + std::to_string(symbols) + " symbols, not a multiple of n");
  }
  const std::size_t len = symbols / f.n;
  const auto unpacked = unpack_symbols(width, raw, symbols);
  GfMatrix originals(static_cast<Index>(f.n), static_cast<Index>(len));
  for (std::size_t i = 0; i < symbols; ++i) originals(static_cast<Index>(i / len), static_cast<Index>(i % len)) = unpacked[i];

  Rng rng(f.seed);
  auto packets = source_encode(params, originals, f.k.value_or(f.n), rng);
  write_file(f.out, write_packet_file(PacketFile::from_params(params, std::move(packets))));
  out << "encoded " << f.k.value_or(f.n) << " packets, " << params.header_bits() << " header bits each\n";
  return kOk;
}

struct RecodeFlags {
  std::string in;
  std::string out;
  std::optional<std::size_t> k_take;
  std::uint64_t seed = 1;
  std::size_t max_attempts = 100000;
  std::string force_w;
};

int run_recode(const RecodeFlags& f, std::ostream& out, std::ostream& err) {
  PacketFile file = read_packet_file(read_file(f.in));
  const CodingParams params = file.params(f.max_attempts);
  const std::size_t take = f.k_take.value_or(file.packets.size());
  if (take == 0 || take > file.packets.size()) {
    throw UsageError("--k-take must be in 1.." + std::to_string(file.packets.size()));
  }
  const NodeBuffer buffer = NodeBuffer::from_packets(params, std::span(file.packets).first(take));

  RecodeResult result;
  if (!f.force_w.empty()) {
    const SparseRow forced = parse_forced_row(f.force_w, params.n);
    result = recode(buffer, [&] { return forced; });
  } else {
    Rng rng(f.seed);
    result = recode(buffer, rng);
  }
  if (const auto* failure = std::get_if<RecodeFailure>(&result)) {
    err << "recode failed after " << failure->attempts << " attempts\n";
    return kRecodeFailed;
  }
  auto& outcome = std::get<RecodeOutcome>(result);
  file.packets.push_back(outcome.packet);
  write_file(f.out.empty() ? f.in : f.out, write_packet_file(file));
  out << "attempts=" << outcome.attempts << " header=" << outcome.packet.header.to_string() << '\n';
  return kOk;
}

struct DecodeFlags {
  std::string in;
  std::string out;
};

int run_decode(const DecodeFlags& f, std::ostream& err) {
  const PacketFile file = read_packet_file(read_file(f.in));
  const CodingParams params = file.params();
  const auto result = sink_decode(params, file.packets);
  if (const auto* deficient = std::get_if<InsufficientRank>(&result)) {
    err << "insufficient rank: " << deficient->rank << " of " << params.n << '\n';
    return kRankDeficient;
  }
  const auto& X = std::get<GfMatrix>(result);
  std::vector<Symbol> symbols(X.data(), X.data() + X.size());
  write_file(f.out, pack_symbols(params.field().width(), symbols));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse network coding with a small set of allowed coefficients", "ssac"};
  app.require_subcommand(1);

  auto* experiment = app.add_subcommand("experiment", "Run a Monte-Carlo or closed-form experiment, CSV out");
  experiment->require_subcommand(1);
  ExperimentFlags exp_flags;
  std::optional<sim::ExperimentKind> kind;
  const std::pair<const char*, sim::ExperimentKind> kinds[] = {
      {"solution-existence", sim::ExperimentKind::SolutionExistence},
      {"full-rank", sim::ExperimentKind::FullRank},
      {"header-table", sim::ExperimentKind::HeaderTable},
      {"line-network", sim::ExperimentKind::LineNetwork},
  };
  for (const auto& [name, k] : kinds) {
    auto* sub = experiment->add_subcommand(name);
    add_experiment_flags(sub, exp_flags);
    sub->callback([&kind, k = k] { kind = k; });
  }

  auto* encode = app.add_subcommand("encode", "Source-encode an originals file into a packet file");
  EncodeFlags enc;
  encode->add_option("--in", enc.in, "Originals file (n*L symbols)")->required();
  encode->add_option("--out", enc.out, "Packet file to write")->required();
  encode->add_option("--n", enc.n, "Generation size")->required();
  encode->add_option("--m", enc.m, "Sparsity");
  encode->add_option("--k", enc.k, "Packets to emit (>= n, default n)");
  encode->add_option("--seed", enc.seed, "Seed");
  add_field_flags(encode, enc.field, false);

  auto* recode_cmd = app.add_subcommand("recode", "Append one recoded packet to a packet file");
  RecodeFlags rec;
  recode_cmd->add_option("--in", rec.in, "Packet file")->required();
  recode_cmd->add_option("--out", rec.out, "Output packet file (default: overwrite --in)");
  recode_cmd->add_option("--k-take", rec.k_take, "Buffer the first k packets (default all)");
  recode_cmd->add_option("--seed", rec.seed, "Seed");
  recode_cmd->add_option("--max-attempts", rec.max_attempts, "Bound on recoding draws");
  recode_cmd->add_option("--force-w", rec.force_w, "Fixed target row as position:index pairs")->group("");

  auto* decode = app.add_subcommand("decode", "Decode a packet file back to the originals");
  DecodeFlags dec;
  decode->add_option("--in", dec.in, "Packet file")->required();
  decode->add_option("--out", dec.out, "Originals file to write")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (experiment->parsed()) return run_experiment(exp_flags, *kind, out);
    if (encode->parsed()) return run_encode(enc, out);
    if (recode_cmd->parsed()) return run_recode(rec, out, err);
    if (decode->parsed()) return run_decode(dec, err);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e) ||
        dynamic_cast<const std::out_of_range*>(&e)) {
      err << "error: " << e.what() << '\n';
      return kUsageError;
    }
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace ssac::cli
