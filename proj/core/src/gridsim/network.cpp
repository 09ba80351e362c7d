#include "network.hpp"

#include <algorithm>

namespace loadcorr::grid::detail {

CompiledNetwork::CompiledNetwork(const NetworkCase& c) : n(c.buses.size()) {
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(c.buses[i].id);
    if (c.buses[i].kind == BusKind::Slack) slack = i;
    if (c.buses[i].shunt != Complex{}) y_entries.push_back({i, i, c.buses[i].shunt});
  }
  for (const Branch& br : c.branches) {
    const std::size_t f = index_of(br.from);
    const std::size_t t = index_of(br.to);
    const Complex y = 1.0 / br.series_impedance;
    const double bh = 0.5 * br.charging;
    branches.push_back({f, t, y, bh});
    y_entries.push_back({f, f, y + Complex(0.0, bh)});
    y_entries.push_back({t, t, y + Complex(0.0, bh)});
    y_entries.push_back({f, t, -y});
    y_entries.push_back({t, f, -y});
  }
}

std::size_t CompiledNetwork::index_of(BusId id) const {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw GridError(GridErrc::InvalidCase, "unknown bus " + std::to_string(id));
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace loadcorr::grid::detail
