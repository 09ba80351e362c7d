#pragma once

#include <iosfwd>
#include <span>

#include "loadcorr/experiment/grid.hpp"
#include "loadcorr/experiment/response.hpp"

namespace loadcorr::exp {

// All writers emit CSV with a header row and round-trip number formatting.
// Empty numeric fields mean "no value"; the status/flag column says why.

/// benchmark,level,fault,pair_seed,fault_bus,accuracy,swapped,span,channel,measure,error,status
/// One row per sample and requested cell.
void write_system_records(std::ostream& out, const ExperimentConfig& cfg,
                          std::span<const SystemSample> samples);

/// benchmark,level,fault,pair_seed,fault_bus,accuracy,source,channel,span,measure,model_accurate,error
void write_bus_records(std::ostream& out, std::span<const ResponseErrorRecord> records);

/// span,channel,measure,r,p,n,flag
void write_grid(std::ostream& out, const MetricGrid& grid);

/// accuracy,span,channel,measure,p,n_accurate,n_inaccurate,flag
void write_stratified_grids(std::ostream& out, const ExperimentConfig& cfg,
                            std::span<const MetricGrid> per_level);

/// span,channel,measure,lo,hi,r,p,n,flag
void write_ranges(std::ostream& out, std::span<const CellRanges> ranges);

}  // namespace loadcorr::exp
