#include "ssac/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace ssac::report {
namespace {

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_solution_existence_csv(std::ostream& out, const sim::ExperimentResult& result) {
  out << "n,m,q,k,k_rule,log_base,trials,success_prob,ci,mean_attempts,failures,seed\n";
  for (const auto& r : result.records) {
    out << r.n << ',' << r.m << ',' << r.q << ',' << r.k << ',' << r.k_rule << ',' << fixed6(r.log_base) << ','
        << r.trials << ',' << fixed6(r.success_probability) << ',' << fixed6(r.ci_halfwidth) << ','
        << fixed6(r.mean_attempts) << ',' << r.failures << ',' << result.metadata.seed << '\n';
  }
}

void write_full_rank_csv(std::ostream& out, const sim::ExperimentResult& result) {
  out << "n,m,q,overhead,trials,full_rank_prob,ci,seed\n";
  for (const auto& r : result.records) {
    out << r.n << ',' << r.m << ',' << r.q << ',' << r.overhead << ',' << r.trials << ','
        << fixed6(r.success_probability) << ',' << fixed6(r.ci_halfwidth) << ',' << result.metadata.seed << '\n';
  }
}

void write_header_table_csv(std::ostream& out, const std::vector<sim::HeaderTableRow>& rows) {
  out << "n,m,q,ssac_bits,rlnc_bits,ecc_bits,rlnc_over_ssac,ecc_over_ssac\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << r.q << ',' << r.ssac_bits << ',' << r.rlnc_bits << ',' << r.ecc_bits << ','
        << fixed6(r.rlnc_over_ssac) << ',' << fixed6(r.ecc_over_ssac) << '\n';
  }
}

void write_line_network_csv(std::ostream& out, const sim::ExperimentResult& result) {
  out << "n,m,q,overhead,depth,k,trials,success_prob,ci,recode_failures,mean_header_bits,seed\n";
  for (const auto& r : result.records) {
    out << r.n << ',' << r.m << ',' << r.q << ',' << r.overhead << ',' << r.depth << ',' << r.k << ',' << r.trials
        << ',' << fixed6(r.success_probability) << ',' << fixed6(r.ci_halfwidth) << ',' << r.recode_failures << ','
        << fixed6(r.mean_header_bits) << ',' << result.metadata.seed << '\n';
  }
}

void write_metadata_json(std::ostream& out, const sim::ExperimentMetadata& md) {
  nlohmann::json j;
  j["seed"] = md.seed;
  j["k_rule"] = md.k_rule;
  j["log_bases"] = md.log_bases;
  j["fields"] = md.fields;
  j["allowed_sets"] = md.allowed_sets;
  auto& kopt = j["k_opt"] = nlohmann::json::array();
  for (const auto& k : md.k_opt) kopt.push_back({{"m", k.m}, {"n", k.n}, {"base_2", k.base2}, {"base_e", k.base_e}});
  out << j.dump(2) << '\n';
}

}  // namespace ssac::report
