#pragma once

#include <random>
#include <vector>

#include "froshe/environment.hpp"
#include "froshe/mapping.hpp"

namespace froshe::test {

/// Closed world: Occupied ring plus interior obstacles at the given density.
inline WorldGrid random_world(int w, int h, double density, std::mt19937_64& rng,
                              double res = 0.5) {
  WorldGrid g;
  g.geometry = {w, h, res};
  g.cells.assign(g.geometry.size(), WorldCell::Free);
  std::bernoulli_distribution obstacle(density);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool ring = x == 0 || y == 0 || x == w - 1 || y == h - 1;
      if (ring || obstacle(rng)) g.cells[g.geometry.index({x, y})] = WorldCell::Occupied;
    }
  }
  return g;
}

/// Map with each cell drawn independently from {Unknown, Free, Occupied}.
inline ExplorationMap random_map(int w, int h, std::mt19937_64& rng, double p_unknown = 0.3,
                                 double p_occupied = 0.15) {
  GridGeometry g{w, h, 0.5};
  std::vector<MapCell> cells(g.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& c : cells) {
    const double r = u(rng);
    c = r < p_unknown ? MapCell::Unknown
                      : (r < p_unknown + p_occupied ? MapCell::Occupied : MapCell::Free);
  }
  return ExplorationMap::from_cells(g, std::move(cells));
}

}  // namespace froshe::test
