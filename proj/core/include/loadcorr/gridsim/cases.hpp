#pragma once

#include "loadcorr/gridsim/case.hpp"

namespace loadcorr::grid {

/// 9-bus, 3-machine system with six load buses (4..9). The network follows
/// the classic WSCC layout; loading and machine constants are adjusted so
/// that the swing modes are well damped. Loads at buses 5 and 8 are
/// composite, the others ZIP.
NetworkCase make_nine_bus_case();

/// 73-bus system shaped like the three-area RTS-96: three copies of the
/// 24-bus RTS area (ids 1xx, 2xx, 3xx) joined by six interties through an
/// extra bus 325. 51 load buses, all ZIP. Generation is aggregated to one
/// machine per generator bus and scaled to the load; bus 113 is the slack.
NetworkCase make_rts73_case();

}  // namespace loadcorr::grid
