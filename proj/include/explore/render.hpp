#pragma once

#include <string>

#include "explore/layout.hpp"
#include "explore/mapping.hpp"

namespace explore {

/* Renders the occupancy grid with the retrieved layout drawn on top as an
 * SVG document.  Free space is white, unknown space grey, occupied cells
 * near-black.  Fully observed rooms get solid outlines, predicted rooms
 * dashed outlines and open-frontier rooms a dashed red boundary. */
std::string render_svg(const OccupancyGrid& map, const Layout& layout);

}  // namespace explore
