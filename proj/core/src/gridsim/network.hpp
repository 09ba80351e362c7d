#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "loadcorr/gridsim/case.hpp"

namespace loadcorr::grid::detail {

struct YEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

struct BranchTerminals {
  std::size_t from;
  std::size_t to;
  Complex series_admittance;
  double half_charging;
};

/// Bus indexing and the passive network (branches, charging, bus shunts).
struct CompiledNetwork {
  std::size_t n = 0;
  std::size_t slack = 0;
  std::vector<BusId> ids;
  std::vector<BranchTerminals> branches;
  std::vector<YEntry> y_entries;  // may repeat (row, col); sum when assembling

  explicit CompiledNetwork(const NetworkCase& c);

  std::size_t index_of(BusId id) const;
  /// Current leaving `from` into the branch.
  Complex from_current(std::size_t k, const std::vector<Complex>& v) const {
    const auto& br = branches[k];
    return (v[br.from] - v[br.to]) * br.series_admittance +
           Complex(0.0, br.half_charging) * v[br.from];
  }
};

}  // namespace loadcorr::grid::detail
