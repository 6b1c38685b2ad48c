#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hbrg {

enum class BlockKind { hex7, tri3 };

/// Integer coordinates on the triangular lattice, r = i a1 + j a2 with
/// a1 = (1, 0) and a2 = (1/2, sqrt(3)/2).
struct LatticePoint {
  int i = 0;
  int j = 0;
  friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct Bond {
  int a = 0;
  int b = 0;
  friend constexpr bool operator==(const Bond&, const Bond&) = default;
};

struct BlockGeometry {
  BlockKind kind = BlockKind::hex7;
  int n_sites = 0;
  std::vector<Bond> bonds;        // intrablock nearest neighbours, a < b
  std::vector<int> border_sites;  // sites with at least one interblock bond
  int nu = 0;                     // bonds between one pair of adjacent blocks
  std::vector<int> rotation;      // site permutation generating C6 (hex7) or C3 (tri3)
  std::vector<LatticePoint> coords;
  LatticePoint super_a;  // superlattice translations
  LatticePoint super_b;
};

/// hex7: site 0 is the centre, 1..6 the ring counterclockwise.
/// tri3: an up-pointing triangle.
BlockGeometry make_block(BlockKind kind);

/// Throws std::invalid_argument for anything but "hex7" / "tri3".
BlockKind parse_block_kind(std::string_view name);
std::string_view to_string(BlockKind kind);

/// Result of walking the superlattice tiling around the block at the origin.
struct TilingCensus {
  std::vector<LatticePoint> neighbor_blocks;  // superlattice coordinates
  std::vector<int> bonds_per_neighbor;        // parallel to neighbor_blocks
  int external_bond_ends = 0;
};

TilingCensus tiling_census(BlockKind kind);

/// nu by enumeration of the tiling; throws std::logic_error if the neighbour
/// blocks do not all share the same bond count.
int interblock_multiplicity(BlockKind kind);

/// One-line human readable description for run metadata.
std::string describe(const BlockGeometry& geom);

}  // namespace hbrg
