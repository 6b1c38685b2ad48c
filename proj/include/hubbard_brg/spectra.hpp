#pragma once

#include <compare>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hubbard_brg/fock.hpp"
#include "hubbard_brg/geometry.hpp"

namespace hbrg {

/// Couplings of the block Hamiltonian
///   H = -t sum_<ij>,s c+_is c_js + U sum_i n_iu n_id - mu sum_i n_i + K n_sites.
struct HubbardParams {
  double t = 1.0;
  double U = 0.0;
  double mu = 0.0;
  double K = 0.0;
};

struct Sector {
  int n_up = 0;
  int n_dn = 0;
  friend constexpr auto operator<=>(const Sector&, const Sector&) = default;
};

struct SectorSpectrum {
  Sector sector;
  std::vector<double> energies;  // ascending
  Eigen::MatrixXd vectors;       // columns match `energies`; empty if not requested
  bool degenerate = false;       // E2 - E1 within degeneracy_tolerance(E1)
  int multiplet = 1;             // number of returned levels within tolerance of E1
};

/// |dE| <= 1e-9 max(1, |E|) counts as degenerate.
double degeneracy_tolerance(double energy);

Eigen::MatrixXd build_sector_hamiltonian(const SectorBasis& basis, const HubbardParams& params,
                                         const BlockGeometry& geom);

/// Lowest `k` eigenpairs of a symmetric matrix. Throws NonConvergence on LAPACK failure.
SectorSpectrum solve_sector(const Eigen::MatrixXd& matrix, int k, Sector sector = {},
                            bool with_vectors = true);

/// Like solve_sector, but grows k until the whole ground multiplet plus the
/// next level (when one exists) has been resolved.
SectorSpectrum solve_ground_multiplet(const Eigen::MatrixXd& matrix, Sector sector,
                                      bool with_vectors = true);

/// Ground multiplets of the requested sectors. Each sector is diagonalized with
/// mu = K = 0; the constant -mu N + K n_sites is added to the returned energies.
std::map<Sector, SectorSpectrum> block_ground_energies(const HubbardParams& params,
                                                       const BlockGeometry& geom,
                                                       std::span<const Sector> sectors,
                                                       bool with_vectors = true);

/// Energy shift -mu (n_up + n_dn) + K n_sites of a sector.
double sector_offset(const HubbardParams& params, Sector sector, int n_sites);

/// Single-particle levels of -t * adjacency, ascending.
std::vector<double> single_particle_levels(const BlockGeometry& geom, double t);

}  // namespace hbrg
