#include "hubbard_brg/observables.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "hubbard_brg/errors.hpp"
#include "hubbard_brg/parallel.hpp"
#include "hubbard_brg/rg.hpp"

namespace hbrg {
namespace {

// Levels 1..n_max of a fixed-length flow from (t0 = 1, u0). A failure at some
// level marks that level and every later one. Without `gaps` the last level is
// not diagonalized.
struct LevelRecord {
  HubbardParams params;
  double gap = 0.0;
  std::optional<std::string> error;
};

std::vector<LevelRecord> fixed_flow(double u0, int n_max, const BlockGeometry& geom,
                                    bool gaps) {
  if (u0 < 0 || n_max < 1) {
    throw std::invalid_argument("need u0 >= 0 and n >= 1");
  }
  std::vector<LevelRecord> out(static_cast<std::size_t>(n_max));
  HubbardParams p = initial_params(1.0, u0);
  for (int n = 1; n <= n_max; ++n) {
    auto& rec = out[static_cast<std::size_t>(n - 1)];
    rec.params = p;
    if (n == n_max && !gaps) {
      break;
    }
    try {
      const RgStep step = rg_step(p, geom);
      rec.gap = step.retained.gap;
      p = step.next;
    } catch (const NumericalFailure& e) {
      for (int m = n; m <= n_max; ++m) {
        out[static_cast<std::size_t>(m - 1)].error = e.what();
      }
      break;
    }
  }
  return out;
}

std::vector<double> sorted_unique(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> sorted_unique(std::span<const int> xs) {
  std::vector<int> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

GapPoint gap_point(double u0, int n, const LevelRecord& rec) {
  GapPoint g;
  g.u0_over_t0 = u0;
  g.n_levels = n;
  g.error = rec.error;
  if (!rec.error) {
    g.t = rec.params.t;
    g.u_over_t_renormalized = rec.params.U / rec.params.t;
    g.gap = rec.gap;
    g.gap_over_t = rec.gap / rec.params.t;
  }
  return g;
}

}  // namespace

double charge_gap(const HubbardParams& params, const BlockGeometry& geom) {
  const RetentionSectors sec = retention_sectors(geom);
  const HubbardParams bare{params.t, params.U, 0.0, 0.0};
  const std::array sectors{sec.minus, sec.zero, sec.plus};
  const auto s = block_ground_energies(bare, geom, sectors, false);
  return s.at(sec.plus).energies.front() + s.at(sec.minus).energies.front() -
         2.0 * s.at(sec.zero).energies.front();
}

double single_block_gap(double u_over_t, const BlockGeometry& geom) {
  return charge_gap(initial_params(1.0, u_over_t), geom);
}

std::vector<GapPoint> gap_vs_n(double u0, int n_max, const BlockGeometry& geom) {
  const auto levels = fixed_flow(u0, n_max, geom, true);
  std::vector<GapPoint> out;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(gap_point(u0, n, levels[static_cast<std::size_t>(n - 1)]));
  }
  return out;
}

std::vector<SweepRow> sweep_renormalized_coupling(std::span<const double> u0_grid,
                                                  std::span<const int> n_list,
                                                  const BlockGeometry& geom, int threads) {
  const auto us = sorted_unique(u0_grid);
  const auto ns = sorted_unique(n_list);
  if (us.empty() || ns.empty() || ns.front() < 1) {
    throw std::invalid_argument("sweep needs a nonempty u0 grid and n >= 1");
  }
  std::vector<SweepRow> rows(us.size() * ns.size());
  parallel_for(us.size(), threads, [&](std::size_t i) {
    const auto levels = fixed_flow(us[i], ns.back(), geom, false);
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const auto& rec = levels[static_cast<std::size_t>(ns[j] - 1)];
      SweepRow& row = rows[i * ns.size() + j];
      row.u0 = us[i];
      row.n = ns[j];
      row.error = rec.error;
      if (!rec.error) {
        row.u_over_t = rec.params.U / rec.params.t;
      }
    }
  });
  return rows;
}

std::vector<GapPoint> gap_table(std::span<const double> u0_grid, std::span<const int> n_list,
                                const BlockGeometry& geom, int threads) {
  const auto us = sorted_unique(u0_grid);
  const auto ns = sorted_unique(n_list);
  if (us.empty() || ns.empty() || ns.front() < 1) {
    throw std::invalid_argument("gap table needs a nonempty u0 grid and n >= 1");
  }
  std::vector<GapPoint> rows(us.size() * ns.size());
  parallel_for(us.size(), threads, [&](std::size_t i) {
    const auto levels = fixed_flow(us[i], ns.back(), geom, true);
    for (std::size_t j = 0; j < ns.size(); ++j) {
      rows[i * ns.size() + j] =
          gap_point(us[i], ns[j], levels[static_cast<std::size_t>(ns[j] - 1)]);
    }
  });
  return rows;
}

std::vector<double> default_u0_grid() {
  return {2, 4, 6, 8, 10, 11, 12, 12.5, 13, 14, 16, 20, 30};
}

std::vector<int> default_n_list() { return {1, 2, 3, 4, 5, 6}; }

}  // namespace hbrg
