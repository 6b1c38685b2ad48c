#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "hubbard_brg/geometry.hpp"

using namespace hbrg;

namespace {

std::set<std::pair<int, int>> bond_set(const std::vector<Bond>& bonds) {
  std::set<std::pair<int, int>> s;
  for (const Bond& b : bonds) {
    s.insert({std::min(b.a, b.b), std::max(b.a, b.b)});
  }
  return s;
}

int order_of(const std::vector<int>& perm) {
  std::vector<int> p(perm.size());
  std::iota(p.begin(), p.end(), 0);
  for (int k = 1; k <= 12; ++k) {
    std::vector<int> next(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i] = perm[static_cast<std::size_t>(p[i])];
    }
    p = next;
    if (std::all_of(p.begin(), p.end(), [&, i = 0](int v) mutable { return v == i++; })) {
      return k;
    }
  }
  return -1;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("hex7 counts") {
    const BlockGeometry g = make_block(BlockKind::hex7);
    CHECK(g.n_sites == 7);
    CHECK(g.bonds.size() == 12);
    CHECK(g.border_sites.size() == 6);
    CHECK(bond_set(g.bonds).size() == 12);
    for (const Bond& b : g.bonds) {
      CHECK(b.a < b.b);
    }
    // the centre touches every other site
    std::vector<int> degree(7, 0);
    for (const Bond& b : g.bonds) {
      ++degree[static_cast<std::size_t>(b.a)];
      ++degree[static_cast<std::size_t>(b.b)];
    }
    CHECK(std::count(degree.begin(), degree.end(), 6) == 1);
    CHECK(std::count(degree.begin(), degree.end(), 3) == 6);
  }

  TEST_CASE("tri3 counts") {
    const BlockGeometry g = make_block(BlockKind::tri3);
    CHECK(g.n_sites == 3);
    CHECK(g.bonds.size() == 3);
    CHECK(g.border_sites.size() == 3);
  }

  TEST_CASE("rotation is a bond-preserving symmetry of the right order") {
    for (auto [kind, order] : {std::pair{BlockKind::hex7, 6}, std::pair{BlockKind::tri3, 3}}) {
      const BlockGeometry g = make_block(kind);
      CHECK(order_of(g.rotation) == order);
      std::vector<Bond> rotated;
      for (const Bond& b : g.bonds) {
        rotated.push_back({g.rotation[static_cast<std::size_t>(b.a)],
                           g.rotation[static_cast<std::size_t>(b.b)]});
      }
      CHECK(bond_set(rotated) == bond_set(g.bonds));
      std::set<int> border(g.border_sites.begin(), g.border_sites.end());
      for (int b : g.border_sites) {
        CHECK(border.count(g.rotation[static_cast<std::size_t>(b)]) == 1);
      }
    }
  }

  TEST_CASE("interblock multiplicity from the tiling") {
    CHECK(interblock_multiplicity(BlockKind::hex7) == 3);
    CHECK(interblock_multiplicity(BlockKind::tri3) == 2);
    CHECK(make_block(BlockKind::hex7).nu == 3);
    CHECK(make_block(BlockKind::tri3).nu == 2);
  }

  TEST_CASE("bond ends are conserved on the triangular lattice") {
    for (BlockKind kind : {BlockKind::hex7, BlockKind::tri3}) {
      const BlockGeometry g = make_block(kind);
      const TilingCensus c = tiling_census(kind);
      CHECK(2 * static_cast<int>(g.bonds.size()) + c.external_bond_ends == 6 * g.n_sites);
      const int total = std::accumulate(c.bonds_per_neighbor.begin(), c.bonds_per_neighbor.end(), 0);
      CHECK(total == c.external_bond_ends);
      CHECK(c.neighbor_blocks.size() == 6);
    }
  }

  TEST_CASE("names round-trip") {
    CHECK(parse_block_kind("hex7") == BlockKind::hex7);
    CHECK(parse_block_kind("tri3") == BlockKind::tri3);
    CHECK(to_string(BlockKind::hex7) == "hex7");
    CHECK_THROWS_AS(parse_block_kind("square4"), std::invalid_argument);
    CHECK_FALSE(describe(make_block(BlockKind::hex7)).empty());
  }
}
