#include "hubbard_brg/geometry.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace hbrg {
namespace {

constexpr std::array<LatticePoint, 6> kNeighborOffsets{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

LatticePoint operator+(LatticePoint a, LatticePoint b) { return {a.i + b.i, a.j + b.j}; }
LatticePoint operator-(LatticePoint a, LatticePoint b) { return {a.i - b.i, a.j - b.j}; }
LatticePoint scaled(LatticePoint a, int m) { return {a.i * m, a.j * m}; }

// 60 degree counterclockwise rotation about the origin.
LatticePoint rotate60(LatticePoint p) { return {-p.j, p.i + p.j}; }

bool adjacent(LatticePoint a, LatticePoint b) {
  const LatticePoint d = b - a;
  return std::find(kNeighborOffsets.begin(), kNeighborOffsets.end(), d) != kNeighborOffsets.end();
}

std::optional<int> site_at(const std::vector<LatticePoint>& coords, LatticePoint p) {
  const auto it = std::find(coords.begin(), coords.end(), p);
  if (it == coords.end()) {
    return std::nullopt;
  }
  return static_cast<int>(it - coords.begin());
}

struct Shape {
  std::vector<LatticePoint> coords;
  int rotation_steps;  // multiples of 60 degrees generating the point group
  LatticePoint super_a;
};

Shape shape_of(BlockKind kind) {
  switch (kind) {
    case BlockKind::hex7: {
      std::vector<LatticePoint> coords{{0, 0}};
      coords.insert(coords.end(), kNeighborOffsets.begin(), kNeighborOffsets.end());
      return {coords, 1, {2, 1}};
    }
    case BlockKind::tri3:
      return {{{0, 0}, {1, 0}, {0, 1}}, 2, {1, 1}};
  }
  throw std::invalid_argument("unknown block kind");
}

// Superlattice coordinates (m, n) of the block containing p.
LatticePoint block_of(const Shape& shape, LatticePoint super_b, LatticePoint p) {
  std::optional<LatticePoint> found;
  constexpr int kReach = 6;
  for (int m = -kReach; m <= kReach; ++m) {
    for (int n = -kReach; n <= kReach; ++n) {
      const LatticePoint origin = scaled(shape.super_a, m) + scaled(super_b, n);
      if (site_at(shape.coords, p - origin)) {
        if (found) {
          throw std::logic_error("block shapes overlap under the superlattice");
        }
        found = LatticePoint{m, n};
      }
    }
  }
  if (!found) {
    throw std::logic_error("block shapes do not tile the lattice");
  }
  return *found;
}

std::vector<int> rotation_permutation(const Shape& shape) {
  std::vector<LatticePoint> rotated;
  for (LatticePoint p : shape.coords) {
    for (int k = 0; k < shape.rotation_steps; ++k) {
      p = rotate60(p);
    }
    rotated.push_back(p);
  }
  // The rotation is about the block centre, which need not be a lattice site:
  // find the translation that maps the rotated shape back onto itself.
  for (LatticePoint target : shape.coords) {
    const LatticePoint shift = target - rotated.front();
    std::vector<int> perm;
    for (LatticePoint p : rotated) {
      if (auto s = site_at(shape.coords, p + shift)) {
        perm.push_back(*s);
      } else {
        break;
      }
    }
    if (perm.size() == shape.coords.size()) {
      return perm;
    }
  }
  throw std::logic_error("block shape is not rotation invariant");
}

}  // namespace

TilingCensus tiling_census(BlockKind kind) {
  const Shape shape = shape_of(kind);
  const LatticePoint super_b = rotate60(shape.super_a);
  TilingCensus census;
  for (LatticePoint p : shape.coords) {
    for (LatticePoint d : kNeighborOffsets) {
      const LatticePoint q = p + d;
      if (site_at(shape.coords, q)) {
        continue;
      }
      ++census.external_bond_ends;
      const LatticePoint blk = block_of(shape, super_b, q);
      const auto it =
          std::find(census.neighbor_blocks.begin(), census.neighbor_blocks.end(), blk);
      if (it == census.neighbor_blocks.end()) {
        census.neighbor_blocks.push_back(blk);
        census.bonds_per_neighbor.push_back(1);
      } else {
        ++census.bonds_per_neighbor[static_cast<std::size_t>(it - census.neighbor_blocks.begin())];
      }
    }
  }
  return census;
}

int interblock_multiplicity(BlockKind kind) {
  const TilingCensus census = tiling_census(kind);
  const auto [lo, hi] =
      std::minmax_element(census.bonds_per_neighbor.begin(), census.bonds_per_neighbor.end());
  if (lo == census.bonds_per_neighbor.end() || *lo != *hi) {
    throw std::logic_error("interblock bond count differs between neighbouring blocks");
  }
  return *lo;
}

BlockGeometry make_block(BlockKind kind) {
  if (kind != BlockKind::hex7 && kind != BlockKind::tri3) {
    throw std::invalid_argument("unknown block kind");
  }
  const Shape shape = shape_of(kind);
  BlockGeometry g;
  g.kind = kind;
  g.coords = shape.coords;
  g.n_sites = static_cast<int>(shape.coords.size());
  g.super_a = shape.super_a;
  g.super_b = rotate60(shape.super_a);

  for (int a = 0; a < g.n_sites; ++a) {
    for (int b = a + 1; b < g.n_sites; ++b) {
      if (adjacent(g.coords[static_cast<std::size_t>(a)], g.coords[static_cast<std::size_t>(b)])) {
        g.bonds.push_back({a, b});
      }
    }
  }
  for (int s = 0; s < g.n_sites; ++s) {
    int internal = 0;
    for (const Bond& bd : g.bonds) {
      internal += (bd.a == s || bd.b == s) ? 1 : 0;
    }
    if (internal < 6) {
      g.border_sites.push_back(s);
    }
  }
  g.rotation = rotation_permutation(shape);
  g.nu = interblock_multiplicity(kind);
  return g;
}

BlockKind parse_block_kind(std::string_view name) {
  if (name == "hex7") {
    return BlockKind::hex7;
  }
  if (name == "tri3") {
    return BlockKind::tri3;
  }
  throw std::invalid_argument("unknown block kind '" + std::string(name) + "'");
}

std::string_view to_string(BlockKind kind) {
  return kind == BlockKind::hex7 ? "hex7" : "tri3";
}

std::string describe(const BlockGeometry& geom) {
  std::ostringstream os;
  os << to_string(geom.kind) << ": " << geom.n_sites << " sites, " << geom.bonds.size()
     << " intrablock bonds, " << geom.border_sites.size() << " border sites, superlattice ("
     << geom.super_a.i << "," << geom.super_a.j << ")x(" << geom.super_b.i << ","
     << geom.super_b.j << ")";
  return os.str();
}

}  // namespace hbrg
