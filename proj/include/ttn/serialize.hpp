#pragma once

#include <string>

#include "ttn/ttn_state.hpp"

namespace ttn {

// Self-describing JSON document: topology (endpoint names + leaf map),
// per-edge weights, per-vertex tensor shapes and complex data as interleaved
// re,im.  Round-trips exactly (doubles are printed shortest-exact).
std::string state_to_json(const TtnState& s);
TtnState state_from_json(const std::string& text);

void save_state(const TtnState& s, const std::string& path);
TtnState load_state(const std::string& path);

}  // namespace ttn
