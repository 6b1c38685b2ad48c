#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hubbard_brg/geometry.hpp"
#include "hubbard_brg/spectra.hpp"

namespace hbrg {

/// e(N+1) + e(N-1) - 2 e(N) around half filling; independent of mu and K.
double charge_gap(const HubbardParams& params, const BlockGeometry& geom);

/// Charge gap of a block with t = 1, U = u_over_t: the n = 1 reference curve.
double single_block_gap(double u_over_t, const BlockGeometry& geom);

struct GapPoint {
  double u0_over_t0 = 0.0;
  int n_levels = 1;
  double u_over_t_renormalized = 0.0;
  double t = 0.0;  // t' at the final level
  double gap = 0.0;
  double gap_over_t = 0.0;
  std::optional<std::string> error;
};

/// n = 1..n_max: n - 1 RG steps from (t0 = 1, u0), then the gap of the final block.
std::vector<GapPoint> gap_vs_n(double u0, int n_max, const BlockGeometry& geom);

struct SweepRow {
  double u0 = 0.0;
  int n = 1;
  double u_over_t = 0.0;
  std::optional<std::string> error;
};

/// Rows sorted by (u0, n) regardless of `threads`.
std::vector<SweepRow> sweep_renormalized_coupling(std::span<const double> u0_grid,
                                                  std::span<const int> n_list,
                                                  const BlockGeometry& geom, int threads = 1);

std::vector<GapPoint> gap_table(std::span<const double> u0_grid, std::span<const int> n_list,
                                const BlockGeometry& geom, int threads = 1);

std::vector<double> default_u0_grid();
std::vector<int> default_n_list();

}  // namespace hbrg
