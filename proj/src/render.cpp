#include "explore/render.hpp"

#include <iomanip>
#include <sstream>

namespace explore {

namespace {

const char* room_color(RoomKind kind) {
  switch (kind) {
    case RoomKind::FullyObserved:
      return "#1f77b4";
    case RoomKind::Predicted:
      return "#2ca02c";
    case RoomKind::OpenFrontier:
      return "#d62728";
  }
  return "#000000";
}

}  // namespace

std::string render_svg(const OccupancyGrid& map, const Layout& layout) {
  const double res = map.resolution;
  const double w = map.cells.width() * res;
  const double h = map.cells.height() * res;
  const double scale = 40.0;  // px per meter

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << w * scale << "\" height=\"" << h * scale << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"#c8c8c8\"/>\n";

  /* Run-length encode rows of equal state to keep the file small. */
  os << std::setprecision(4);
  for (int r = 0; r < map.cells.height(); ++r) {
    int c = 0;
    while (c < map.cells.width()) {
      const CellState s = map.cells.at(c, r);
      int c2 = c;
      while (c2 < map.cells.width() && map.cells.at(c2, r) == s) ++c2;
      if (s != CellState::Unknown) {
        const char* fill = s == CellState::Free ? "#ffffff" : "#222222";
        os << "<rect x=\"" << c * res << "\" y=\"" << r * res << "\" width=\""
           << (c2 - c) * res << "\" height=\"" << res << "\" fill=\"" << fill
           << "\"/>\n";
      }
      c = c2;
    }
  }

  for (const Room& room : layout.rooms) {
    os << "<polygon points=\"";
    for (std::size_t i = 0; i < room.polygon.size(); ++i) {
      if (i != 0) os << ' ';
      os << room.polygon[i].x << ',' << room.polygon[i].y;
    }
    os << "\" fill=\"" << room_color(room.kind)
       << "\" fill-opacity=\"0.12\" stroke=\"" << room_color(room.kind)
       << "\" stroke-width=\"0.06\"";
    if (room.kind != RoomKind::FullyObserved) {
      os << " stroke-dasharray=\"0.2,0.12\"";
    }
    os << "/>\n";
    for (const auto& edge : room.open_edges) {
      os << "<line x1=\"" << edge.first.x << "\" y1=\"" << edge.first.y
         << "\" x2=\"" << edge.second.x << "\" y2=\"" << edge.second.y
         << "\" stroke=\"#d62728\" stroke-width=\"0.1\""
            " stroke-dasharray=\"0.1,0.1\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace explore
