#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <compare>

namespace froshe {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const noexcept { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) noexcept { return v * s; }

inline double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return norm(a - b); }

/// Unit vector along v, or the zero vector when v has zero length.
inline Vec2 unit(Vec2 v) noexcept {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}

/// Integer grid coordinate. Ordering is row-major (y first, then x).
struct Cell {
  int x = 0;
  int y = 0;

  constexpr bool operator==(const Cell&) const = default;
  constexpr auto operator<=>(const Cell& o) const noexcept {
    if (auto c = y <=> o.y; c != 0) return c;
    return x <=> o.x;
  }
};

/// Axis-aligned rectangle in world metres, closed on both ends.
struct Bounds {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  Vec2 clamp(Vec2 p) const noexcept {
    return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y)};
  }
  double diagonal() const noexcept { return distance(min, max); }
};

/// Shape of a square-celled raster anchored at the world origin. Cell (x, y)
/// covers [x*res, (x+1)*res) x [y*res, (y+1)*res).
struct GridGeometry {
  int width = 0;
  int height = 0;
  double resolution = 1.0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool in_bounds(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t idx) const noexcept {
    return {static_cast<int>(idx % static_cast<std::size_t>(width)),
            static_cast<int>(idx / static_cast<std::size_t>(width))};
  }
  Cell cell_of(Vec2 p) const noexcept {
    return {static_cast<int>(std::floor(p.x / resolution)),
            static_cast<int>(std::floor(p.y / resolution))};
  }
  Vec2 center_of(Cell c) const noexcept {
    return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
  }
  /// Whole raster, including the boundary ring.
  Bounds extent() const noexcept {
    return {{0.0, 0.0}, {width * resolution, height * resolution}};
  }
  /// Region strictly inside the boundary ring. Points on the upper edge are
  /// pulled back by a hair so cell_of() stays inside the interior.
  Bounds interior() const noexcept {
    constexpr double kEdge = 1e-9;
    return {{resolution, resolution},
            {(width - 1) * resolution - kEdge, (height - 1) * resolution - kEdge}};
  }

  bool operator==(const GridGeometry&) const = default;
};

}  // namespace froshe
