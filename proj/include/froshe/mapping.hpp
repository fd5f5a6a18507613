#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "froshe/environment.hpp"
#include "froshe/geometry.hpp"

namespace froshe {

enum class MapCell : std::uint8_t { Unknown, Free, Occupied };

/// Shared known-space map. Cells only ever move out of Unknown.
class ExplorationMap {
 public:
  ExplorationMap() = default;
  explicit ExplorationMap(GridGeometry geometry);

  const GridGeometry& geometry() const noexcept { return geometry_; }
  MapCell at(Cell c) const { return cells_[geometry_.index(c)]; }
  MapCell at(std::size_t idx) const { return cells_[idx]; }
  bool known(Cell c) const { return at(c) != MapCell::Unknown; }
  std::int64_t explored_cell_count() const noexcept { return explored_; }
  std::uint64_t version() const noexcept { return version_; }
  std::span<const MapCell> cells() const noexcept { return cells_; }

  /// Writes one cell without bumping the version; returns true if the cell
  /// was Unknown before. Known cells are never overwritten.
  bool reveal(Cell c, MapCell state);
  void bump_version() noexcept { ++version_; }

  /// Direct constructor for tests and golden files.
  static ExplorationMap from_cells(GridGeometry geometry, std::vector<MapCell> cells,
                                   std::uint64_t version = 0);

  bool operator==(const ExplorationMap&) const = default;

 private:
  GridGeometry geometry_;
  std::vector<MapCell> cells_;
  std::int64_t explored_ = 0;
  std::uint64_t version_ = 0;
};

struct FrontierSet {
  std::vector<Cell> cells;  // row-major
  std::uint64_t map_version = 0;

  bool empty() const noexcept { return cells.empty(); }
  std::size_t size() const noexcept { return cells.size(); }
};

/// Applies observations; the version advances even for an empty batch.
void integrate_observations(ExplorationMap& map, std::span<const Observation> obs);

/// Free cells with at least one Unknown cell among their 8 neighbours.
FrontierSet detect_frontiers(const ExplorationMap& map);

bool is_frontier(const ExplorationMap& map, Cell c);

/// Plain-text dump: a header line `froshe-map <width> <height> <resolution>
/// <version>` followed by one row per y (y = 0 first) using '?', '.', '#'.
std::string dump_map(const ExplorationMap& map);
ExplorationMap parse_map(const std::string& text);

}  // namespace froshe
