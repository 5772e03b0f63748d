#include "explore/grid.hpp"

namespace explore {

std::vector<GridIndex> segment_cells(GridIndex a, GridIndex b) {
  std::vector<GridIndex> out;
  out.reserve(static_cast<std::size_t>(std::abs(b.col - a.col) +
                                       std::abs(b.row - a.row) + 2));
  for_each_segment_cell(a, b, [&](GridIndex c) {
    out.push_back(c);
    return true;
  });
  return out;
}

}  // namespace explore
