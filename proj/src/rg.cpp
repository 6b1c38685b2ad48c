#include "hubbard_brg/rg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hubbard_brg/errors.hpp"

namespace hbrg {
namespace {

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

constexpr double kDoubletTolerance = 1e-12;
constexpr double kUniformityTolerance = 1e-10;
constexpr double kGapSlack = 1e-9;
constexpr double kNoiseFactor = 100.0;

// distance from the ground multiplet to the next level, 0 if unknown
double multiplet_separation(const SectorSpectrum& s) {
  const auto m = static_cast<std::size_t>(s.multiplet);
  return m < s.energies.size() ? s.energies[m] - s.energies.front() : 0.0;
}

// |U| D_max + |t| * 2 |bonds|: crude bound on the operator norm in a sector
double hamiltonian_bound(const HubbardParams& p, const BlockGeometry& geom, Sector s) {
  return std::abs(p.U) * std::min(s.n_up, s.n_dn) +
         2.0 * std::abs(p.t) * static_cast<double>(geom.bonds.size());
}

double relative_scale(double e) { return std::max(1.0, std::abs(e)); }

void require_degeneracy_free(const SectorSpectrum& s) {
  if (s.degenerate) {
    throw DegenerateRetention(s.sector.n_up, s.sector.n_dn,
                              {s.energies.begin(), s.energies.begin() + s.multiplet +
                                                      (s.multiplet < static_cast<int>(s.energies.size()) ? 1 : 0)});
  }
}

}  // namespace

RetentionSectors retention_sectors(const BlockGeometry& geom) {
  if (geom.n_sites % 2 == 0) {
    throw std::invalid_argument("retention needs an odd block size");
  }
  const int h = (geom.n_sites - 1) / 2;
  return {{h, h}, {h + 1, h}, {h, h + 1}, {h + 1, h + 1}};
}

LambdaResult compute_lambda(const SectorSpectrum& minus, const SectorBasis& minus_basis,
                            const SectorSpectrum& zero, const SectorBasis& zero_basis,
                            const BlockGeometry& geom, double hnorm) {
  if (minus.vectors.cols() < minus.multiplet || zero.vectors.cols() < zero.multiplet) {
    throw std::invalid_argument("compute_lambda needs the eigenvectors of both multiplets");
  }
  const Eigen::Index d_minus = minus.multiplet;
  const Eigen::Index d_zero = zero.multiplet;
  const auto phi = zero.vectors.leftCols(d_zero);

  LambdaResult out;
  Eigen::VectorXd image(static_cast<Eigen::Index>(zero_basis.size()));
  for (int b : geom.border_sites) {
    double weight = 0.0;
    for (Eigen::Index i = 0; i < d_minus; ++i) {
      image.setZero();
      for (std::size_t k = 0; k < minus_basis.size(); ++k) {
        const auto created = apply_create(minus_basis[k], b, Spin::up);
        if (!created) {
          continue;
        }
        const auto row = zero_basis.index_of(created->state);
        image(static_cast<Eigen::Index>(*row)) +=
            created->sign * minus.vectors(static_cast<Eigen::Index>(k), i);
      }
      weight += (phi.transpose() * image).squaredNorm();
    }
    out.per_border.push_back(std::sqrt(weight / static_cast<double>(d_minus * d_zero)));
  }

  const auto [lo, hi] = std::minmax_element(out.per_border.begin(), out.per_border.end());
  out.lambda = std::accumulate(out.per_border.begin(), out.per_border.end(), 0.0) /
               static_cast<double>(out.per_border.size());
  out.tolerance = kUniformityTolerance * std::max(1.0, out.lambda);
  const double sep = std::min(multiplet_separation(minus), multiplet_separation(zero));
  if (hnorm > 0.0 && sep > 0.0) {
    out.tolerance += kNoiseFactor * std::numeric_limits<double>::epsilon() * hnorm / sep;
  }
  if (*hi - *lo > out.tolerance) {
    throw SymmetryViolation("lambda differs across border sites (spread " +
                            format_g(*hi - *lo) + ", lambda " + format_g(out.lambda) + ")");
  }
  return out;
}

RetainedSet retain_states(const HubbardParams& params, const BlockGeometry& geom,
                          RetentionPolicy policy) {
  if (std::abs(params.mu - params.U / 2) > 1e-12 * std::max(1.0, std::abs(params.U))) {
    throw std::invalid_argument("retain_states requires mu = U/2");
  }
  const RetentionSectors sec = retention_sectors(geom);
  // mu and K only shift whole sectors; diagonalize without them.
  const HubbardParams bare{params.t, params.U, 0.0, 0.0};

  const std::array with_vectors{sec.minus, sec.zero};
  const std::array energies_only{sec.zero_mirror, sec.plus};
  auto spectra = block_ground_energies(bare, geom, with_vectors, true);
  spectra.merge(block_ground_energies(bare, geom, energies_only, false));

  const SectorSpectrum& minus = spectra.at(sec.minus);
  const SectorSpectrum& zero = spectra.at(sec.zero);
  const SectorSpectrum& mirror = spectra.at(sec.zero_mirror);
  const SectorSpectrum& plus = spectra.at(sec.plus);

  if (policy == RetentionPolicy::strict) {
    for (const SectorSpectrum* s : {&minus, &zero, &plus}) {
      require_degeneracy_free(*s);
    }
  }

  const double raw_minus = minus.energies.front();
  const double raw_zero = zero.energies.front();
  const double raw_mirror = mirror.energies.front();
  const double raw_plus = plus.energies.front();
  if (std::abs(raw_zero - raw_mirror) > kDoubletTolerance * relative_scale(raw_zero)) {
    throw SymmetryViolation("spin doublet split by " + std::to_string(raw_zero - raw_mirror));
  }

  const LambdaResult lam =
      compute_lambda(minus, enumerate_sector(geom.n_sites, sec.minus.n_up, sec.minus.n_dn), zero,
                     enumerate_sector(geom.n_sites, sec.zero.n_up, sec.zero.n_dn), geom,
                     std::max(hamiltonian_bound(bare, geom, sec.minus),
                              hamiltonian_bound(bare, geom, sec.zero)));

  RetainedSet r;
  r.e_minus = raw_minus + sector_offset(params, sec.minus, geom.n_sites);
  r.e_zero = raw_zero + sector_offset(params, sec.zero, geom.n_sites);
  r.e_zero_mirror = raw_mirror + sector_offset(params, sec.zero_mirror, geom.n_sites);
  r.e_plus = raw_plus + sector_offset(params, sec.plus, geom.n_sites);
  r.lambda_per_border = lam.per_border;
  r.lambda = lam.lambda;
  r.lambda_tolerance = lam.tolerance;
  r.ph_asymmetry = r.e_plus - r.e_minus;
  r.gap = raw_plus + raw_minus - 2.0 * raw_zero;
  r.multiplet_minus = minus.multiplet;
  r.multiplet_zero = zero.multiplet;
  r.multiplet_plus = plus.multiplet;

  const double scale = std::max({relative_scale(raw_minus), relative_scale(raw_zero),
                                 relative_scale(raw_plus)});
  if (r.gap < -kGapSlack * scale) {
    throw NumericalFailure("negative charge gap " + std::to_string(r.gap));
  }
  return r;
}

HubbardParams initial_params(double t0, double u0) { return {t0, u0, u0 / 2, -u0 / 4}; }

RgStep rg_step(const HubbardParams& params, const BlockGeometry& geom, RetentionPolicy policy) {
  // At U = 0 the retained doublet is an orbital multiplet for hex7 and the gap
  // vanishes identically; lambda is still well defined as a multiplet average.
  const bool free_fermions = params.U <= 1e-9 * params.t;
  RgStep step;
  step.retained =
      retain_states(params, geom, free_fermions ? RetentionPolicy::multiplet_average : policy);
  const RetainedSet& r = step.retained;
  step.next.t = geom.nu * r.lambda * r.lambda * params.t;
  step.next.U = free_fermions ? 0.0 : r.gap;
  step.next.mu = step.next.U / 2;
  step.next.K = ((r.e_minus + r.e_plus) / 2 + r.e_zero) / 2;
  return step;
}

Phase classify(double u_over_t) {
  if (u_over_t > kInsulatingRatio) {
    return Phase::insulating;
  }
  if (u_over_t < kMetallicRatio) {
    return Phase::metallic;
  }
  return Phase::critical_undecided;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::metallic:
      return "metallic";
    case Phase::insulating:
      return "insulating";
    case Phase::critical_undecided:
      break;
  }
  return "critical-undecided";
}

FlowResult run_flow(const HubbardParams& params0, const BlockGeometry& geom, int max_levels,
                    FlowOptions options) {
  if (max_levels < 1) {
    throw std::invalid_argument("max_levels must be >= 1");
  }
  if (!(params0.t > 0) || params0.U < 0) {
    throw std::invalid_argument("flow needs t > 0 and U >= 0");
  }
  FlowResult flow;
  HubbardParams p = params0;
  for (int level = 0;; ++level) {
    RgStep step;
    try {
      step = rg_step(p, geom, options.policy);
    } catch (NumericalFailure& e) {
      e.set_level(level);
      throw;
    }
    const double ratio = p.U / p.t;
    flow.levels.push_back({level, p, ratio, step.retained});
    flow.gap = step.retained.gap;
    const bool settled = options.early_exit && classify(ratio) != Phase::critical_undecided;
    if (level + 1 >= max_levels || settled) {
      break;
    }
    p = step.next;
  }
  flow.classification = classify(flow.levels.back().u_over_t);
  return flow;
}

CriticalResult find_critical(const BlockGeometry& geom, double tol, CriticalSearch search) {
  if (!(tol > 0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (!(search.lower < search.upper)) {
    throw std::invalid_argument("bracket must satisfy lower < upper");
  }
  auto phase_at = [&](double u0) {
    return run_flow(initial_params(1.0, u0), geom, search.max_levels).classification;
  };
  double lo = search.lower;
  double hi = search.upper;
  const Phase phase_lo = phase_at(lo);
  const Phase phase_hi = phase_at(hi);
  if (phase_lo == phase_hi || phase_lo == Phase::critical_undecided ||
      phase_hi == Phase::critical_undecided) {
    throw BracketFailure("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] does not straddle the transition (" +
                         std::string(to_string(phase_lo)) + " / " +
                         std::string(to_string(phase_hi)) + ")");
  }
  CriticalResult result;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    ++result.iterations;
    const Phase phase = phase_at(mid);
    if (phase == Phase::critical_undecided) {
      lo = hi = mid;
      break;
    }
    (phase == phase_lo ? lo : hi) = mid;
  }
  result.lower = lo;
  result.upper = hi;
  result.u_c_over_t = 0.5 * (lo + hi);
  return result;
}

}  // namespace hbrg
