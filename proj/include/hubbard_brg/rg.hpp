#pragma once

#include <string_view>
#include <vector>

#include "hubbard_brg/geometry.hpp"
#include "hubbard_brg/spectra.hpp"

namespace hbrg {

enum class RetentionPolicy {
  /// Ground multiplets are allowed; lambda_b^2 is the multiplet-averaged weight.
  multiplet_average,
  /// Any orbital degeneracy of a retained ground state raises DegenerateRetention.
  strict,
};

/// The four states kept from a block of odd size n_s = 2h + 1, at mu = U/2:
/// (h, h) -> new empty site, (h+1, h) / (h, h+1) -> new singly occupied
/// doublet, (h+1, h+1) -> new doubly occupied site.
struct RetainedSet {
  double e_minus = 0.0;
  double e_zero = 0.0;
  double e_zero_mirror = 0.0;  // Sz = -1/2 partner of e_zero
  double e_plus = 0.0;
  std::vector<double> lambda_per_border;
  double lambda = 0.0;
  double lambda_tolerance = 0.0;  // uniformity bound actually applied
  double ph_asymmetry = 0.0;  // e_plus - e_minus
  double gap = 0.0;           // e_plus + e_minus - 2 e_zero, without the mu/K shift
  int multiplet_minus = 1;
  int multiplet_zero = 1;
  int multiplet_plus = 1;
};

/// Half-filling sectors of a block: (h, h), (h+1, h), (h, h+1), (h+1, h+1).
struct RetentionSectors {
  Sector minus, zero, zero_mirror, plus;
};
RetentionSectors retention_sectors(const BlockGeometry& geom);

RetainedSet retain_states(const HubbardParams& params, const BlockGeometry& geom,
                          RetentionPolicy policy = RetentionPolicy::multiplet_average);

struct LambdaResult {
  std::vector<double> per_border;
  double lambda = 0.0;
  double tolerance = 0.0;
};

/// |<zero| c+_{b,up} |minus>| per border site b. For multiplets (more than one
/// column flagged in `multiplet`), the squared element is averaged over both
/// multiplets. Throws SymmetryViolation if the values are not uniform.
/// The spread allowed is 1e-10 * max(1, lambda), widened by the eigenvector
/// noise floor eps*|H|/separation when a multiplet sits close to the next
/// level (hnorm: any upper bound on |H| of the two sectors).
LambdaResult compute_lambda(const SectorSpectrum& minus, const SectorBasis& minus_basis,
                            const SectorSpectrum& zero, const SectorBasis& zero_basis,
                            const BlockGeometry& geom, double hnorm = 0.0);

/// mu = U/2 and K = -U/4 at the first level.
HubbardParams initial_params(double t0, double u0);

struct RgStep {
  HubbardParams next;
  RetainedSet retained;
};

RgStep rg_step(const HubbardParams& params, const BlockGeometry& geom,
               RetentionPolicy policy = RetentionPolicy::multiplet_average);

enum class Phase { metallic, insulating, critical_undecided };

inline constexpr double kInsulatingRatio = 1e6;
inline constexpr double kMetallicRatio = 1e-6;

Phase classify(double u_over_t);
std::string_view to_string(Phase phase);

struct FlowLevel {
  int level = 0;
  HubbardParams params;
  double u_over_t = 0.0;
  RetainedSet retained;  // block states at this level
};

struct FlowResult {
  std::vector<FlowLevel> levels;
  Phase classification = Phase::critical_undecided;
  double gap = 0.0;  // charge gap of the final block
};

struct FlowOptions {
  bool early_exit = true;
  RetentionPolicy policy = RetentionPolicy::multiplet_average;
};

/// Up to max_levels - 1 RG steps from params0 (a 7^n array with n = max_levels
/// needs n - 1 steps). With early_exit the flow stops once U/t leaves
/// [1e-6, 1e6].
FlowResult run_flow(const HubbardParams& params0, const BlockGeometry& geom, int max_levels,
                    FlowOptions options = {});

struct CriticalSearch {
  double lower = 1.0;
  double upper = 50.0;
  int max_levels = 50;
};

struct CriticalResult {
  double u_c_over_t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;
};

/// Bisection on U0/t0 (t0 = 1). Throws BracketFailure if both ends classify alike.
CriticalResult find_critical(const BlockGeometry& geom, double tol, CriticalSearch search = {});

}  // namespace hbrg
