#include "froshe/mapping.hpp"

#include <fmt/format.h>

#include <sstream>

#include "froshe/error.hpp"

namespace froshe {

ExplorationMap::ExplorationMap(GridGeometry geometry)
    : geometry_(geometry), cells_(geometry.size(), MapCell::Unknown) {}

bool ExplorationMap::reveal(Cell c, MapCell state) {
  auto& cell = cells_[geometry_.index(c)];
  if (cell != MapCell::Unknown || state == MapCell::Unknown) return false;
  cell = state;
  ++explored_;
  return true;
}

ExplorationMap ExplorationMap::from_cells(GridGeometry geometry, std::vector<MapCell> cells,
                                          std::uint64_t version) {
  if (cells.size() != geometry.size()) throw Error("map cell count does not match geometry");
  ExplorationMap m;
  m.geometry_ = geometry;
  m.cells_ = std::move(cells);
  m.version_ = version;
  for (MapCell c : m.cells_) {
    if (c != MapCell::Unknown) ++m.explored_;
  }
  return m;
}

void integrate_observations(ExplorationMap& map, std::span<const Observation> obs) {
  for (const Observation& o : obs) {
    map.reveal(o.cell, o.state == Observed::Free ? MapCell::Free : MapCell::Occupied);
  }
  map.bump_version();
}

bool is_frontier(const ExplorationMap& map, Cell c) {
  const auto& g = map.geometry();
  if (map.at(c) != MapCell::Free) return false;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell n{c.x + dx, c.y + dy};
      if (g.in_bounds(n) && map.at(n) == MapCell::Unknown) return true;
    }
  }
  return false;
}

FrontierSet detect_frontiers(const ExplorationMap& map) {
  const auto& g = map.geometry();
  FrontierSet out;
  out.map_version = map.version();
  const auto cells = map.cells();
  const int w = g.width;
  const int h = g.height;
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - 1);
    const int y1 = std::min(h - 1, y + 1);
    for (int x = 0; x < w; ++x) {
      if (cells[static_cast<std::size_t>(y) * w + x] != MapCell::Free) continue;
      const int x0 = std::max(0, x - 1);
      const int x1 = std::min(w - 1, x + 1);
      bool hit = false;
      for (int ny = y0; ny <= y1 && !hit; ++ny) {
        const MapCell* row = &cells[static_cast<std::size_t>(ny) * w];
        for (int nx = x0; nx <= x1; ++nx) {
          if (row[nx] == MapCell::Unknown) {
            hit = true;
            break;
          }
        }
      }
      if (hit) out.cells.push_back({x, y});
    }
  }
  return out;
}

std::string dump_map(const ExplorationMap& map) {
  const auto& g = map.geometry();
  std::string out = fmt::format("froshe-map {} {} {} {}\n", g.width, g.height, g.resolution,
                                map.version());
  out.reserve(out.size() + g.size() + static_cast<std::size_t>(g.height));
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      switch (map.at(Cell{x, y})) {
        case MapCell::Unknown: out.push_back('?'); break;
        case MapCell::Free: out.push_back('.'); break;
        case MapCell::Occupied: out.push_back('#'); break;
      }
    }
    out.push_back('\n');
  }
  return out;
}

ExplorationMap parse_map(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  GridGeometry g;
  std::uint64_t version = 0;
  if (!(in >> magic >> g.width >> g.height >> g.resolution >> version) || magic != "froshe-map" ||
      g.width <= 0 || g.height <= 0 || !(g.resolution > 0.0)) {
    throw Error("malformed map header");
  }
  std::vector<MapCell> cells;
  cells.reserve(g.size());
  std::string row;
  std::getline(in, row);
  for (int y = 0; y < g.height; ++y) {
    if (!std::getline(in, row) || static_cast<int>(row.size()) != g.width) {
      throw Error(fmt::format("malformed map row {}", y));
    }
    for (char ch : row) {
      switch (ch) {
        case '?': cells.push_back(MapCell::Unknown); break;
        case '.': cells.push_back(MapCell::Free); break;
        case '#': cells.push_back(MapCell::Occupied); break;
        default: throw Error(fmt::format("unexpected map character '{}'", ch));
      }
    }
  }
  return ExplorationMap::from_cells(g, std::move(cells), version);
}

}  // namespace froshe
