#pragma once

#include <ostream>
#include <vector>

#include "ssac/sim.hpp"

namespace ssac::report {

// Fixed CSV schemas; the header row is always written, reals with 6 decimals.

void write_solution_existence_csv(std::ostream& out, const sim::ExperimentResult& result);
void write_full_rank_csv(std::ostream& out, const sim::ExperimentResult& result);
void write_header_table_csv(std::ostream& out, const std::vector<sim::HeaderTableRow>& rows);
void write_line_network_csv(std::ostream& out, const sim::ExperimentResult& result);

/// Metadata (seed, k rule, fields, Q, k_opt under both bases) as JSON.
void write_metadata_json(std::ostream& out, const sim::ExperimentMetadata& metadata);

}  // namespace ssac::report
