#include "hubbard_brg/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include "hubbard_brg/errors.hpp"

namespace hbrg {
namespace {

std::string sector_label(Sector s) {
  return "(" + std::to_string(s.n_up) + "," + std::to_string(s.n_dn) + ")";
}

void hop(const SectorBasis& basis, std::size_t col, int from, int to, Spin spin, double t,
         Eigen::MatrixXd& h) {
  const auto removed = apply_annihilate(basis[col], from, spin);
  if (!removed) {
    return;
  }
  const auto added = apply_create(removed->state, to, spin);
  if (!added) {
    return;
  }
  const auto row = basis.index_of(added->state);
  h(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) +=
      -t * removed->sign * added->sign;
}

}  // namespace

double degeneracy_tolerance(double energy) { return 1e-9 * std::max(1.0, std::abs(energy)); }

double sector_offset(const HubbardParams& params, Sector sector, int n_sites) {
  return -params.mu * (sector.n_up + sector.n_dn) + params.K * n_sites;
}

Eigen::MatrixXd build_sector_hamiltonian(const SectorBasis& basis, const HubbardParams& params,
                                         const BlockGeometry& geom) {
  if (basis.n_sites() != geom.n_sites) {
    throw std::invalid_argument("basis has " + std::to_string(basis.n_sites()) +
                                " sites, geometry has " + std::to_string(geom.n_sites));
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double n_electrons = basis.n_up() + basis.n_dn();
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const FockState s = basis[col];
    const auto e = static_cast<Eigen::Index>(col);
    h(e, e) = params.U * std::popcount(s.up & s.dn) - params.mu * n_electrons +
              params.K * geom.n_sites;
    if (params.t == 0.0) {
      continue;
    }
    for (const Bond& b : geom.bonds) {
      for (Spin spin : {Spin::up, Spin::down}) {
        hop(basis, col, b.b, b.a, spin, params.t, h);
        hop(basis, col, b.a, b.b, spin, params.t, h);
      }
    }
  }
  return h;
}

namespace {

struct Pairs {
  std::vector<double> w;
  Eigen::MatrixXd z;
};

// k lowest eigenpairs of the symmetric tridiagonal (diag, off); off has n-1
// meaningful entries and one spare slot
std::optional<Pairs> tridiagonal_pairs(Eigen::VectorXd diag, Eigen::VectorXd off, int k) {
  const auto n = static_cast<lapack_int>(diag.size());
  Pairs p{std::vector<double>(static_cast<std::size_t>(n)), Eigen::MatrixXd(n, k)};
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const Eigen::VectorXd d0 = diag;
  const Eigen::VectorXd e0 = off;
  lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0,
                                   0.0, 1, k, &found, p.w.data(), p.z.data(), n, k,
                                   support.data(), &tryrac);
  if (info != 0 || found != k) {
    // MRRR can give up on tight clusters; bisection + inverse iteration does not
    diag = d0;
    off = e0;
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, k,
                          2.0 * LAPACKE_dlamch('S'), &found, p.w.data(), p.z.data(), n,
                          ifail.data());
  }
  if (info != 0 || found != k) {
    return std::nullopt;
  }
  p.w.resize(static_cast<std::size_t>(k));
  return p;
}

std::optional<Pairs> via_lapack(const Eigen::MatrixXd& matrix, int k) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  Eigen::MatrixXd a = matrix;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
  if (LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, a.data(), n, diag.data(), off.data(),
                     tau.data()) != 0) {
    return std::nullopt;
  }
  auto p = tridiagonal_pairs(diag, off, k);
  if (!p || LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, k, a.data(), n, tau.data(),
                           p->z.data(), n) != 0) {
    return std::nullopt;
  }
  return p;
}

std::optional<Pairs> via_eigen(const Eigen::MatrixXd& matrix, int k) {
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(matrix);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(matrix.rows());
  off.head(matrix.rows() - 1) = tri.subDiagonal();
  auto p = tridiagonal_pairs(tri.diagonal(), off, k);
  if (p) {
    p->z = tri.matrixQ() * p->z;
  }
  return p;
}

double worst_residual(const Eigen::MatrixXd& matrix, const Pairs& p) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < p.z.cols(); ++c) {
    const double e = p.w[static_cast<std::size_t>(c)];
    worst = std::max(worst, (matrix * p.z.col(c) - e * p.z.col(c)).norm() /
                                std::max(1.0, std::abs(e)));
  }
  return worst;
}

constexpr double kResidualTolerance = 1e-9;

}  // namespace

SectorSpectrum solve_sector(const Eigen::MatrixXd& matrix, int k, Sector sector,
                            bool with_vectors) {
  const auto n = matrix.rows();
  if (matrix.cols() != n || n == 0) {
    throw std::invalid_argument("solve_sector needs a non-empty square matrix");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("solve_sector: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(n) + "]");
  }
  // Some optimized LAPACK builds return wrong eigenvectors for larger
  // matrices, so every pair is checked and Eigen's own reduction is the
  // fallback. Vectors are always computed for that check.
  std::optional<Pairs> pairs = via_lapack(matrix, k);
  double residual = pairs ? worst_residual(matrix, *pairs) : HUGE_VAL;
  if (residual > kResidualTolerance) {
    pairs = via_eigen(matrix, k);
    residual = pairs ? worst_residual(matrix, *pairs) : HUGE_VAL;
  }
  if (!pairs) {
    throw NonConvergence("eigensolver failed for sector " + sector_label(sector));
  }
  if (residual > kResidualTolerance) {
    throw NonConvergence("eigenvector residual " + std::to_string(residual) + " in sector " +
                         sector_label(sector));
  }

  SectorSpectrum out;
  out.sector = sector;
  out.energies = std::move(pairs->w);
  if (with_vectors) {
    out.vectors = std::move(pairs->z);
  }
  const double tol = degeneracy_tolerance(out.energies.front());
  out.multiplet = static_cast<int>(std::count_if(
      out.energies.begin(), out.energies.end(),
      [&](double e) { return e - out.energies.front() <= tol; }));
  out.degenerate = out.multiplet > 1;
  return out;
}

SectorSpectrum solve_ground_multiplet(const Eigen::MatrixXd& matrix, Sector sector,
                                      bool with_vectors) {
  const int dim = static_cast<int>(matrix.rows());
  int k = std::min(dim, 8);
  while (true) {
    SectorSpectrum s = solve_sector(matrix, k, sector, with_vectors);
    if (s.multiplet < k || k == dim) {
      return s;
    }
    k = std::min(dim, 2 * k);
  }
}

std::map<Sector, SectorSpectrum> block_ground_energies(const HubbardParams& params,
                                                       const BlockGeometry& geom,
                                                       std::span<const Sector> sectors,
                                                       bool with_vectors) {
  const HubbardParams bare{params.t, params.U, 0.0, 0.0};
  std::map<Sector, SectorSpectrum> out;
  for (Sector sec : sectors) {
    const SectorBasis basis = enumerate_sector(geom.n_sites, sec.n_up, sec.n_dn);
    SectorSpectrum s =
        solve_ground_multiplet(build_sector_hamiltonian(basis, bare, geom), sec, with_vectors);
    const double shift = sector_offset(params, sec, geom.n_sites);
    for (double& e : s.energies) {
      e += shift;
    }
    out.insert_or_assign(sec, std::move(s));
  }
  return out;
}

std::vector<double> single_particle_levels(const BlockGeometry& geom, double t) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(geom.n_sites, geom.n_sites);
  for (const Bond& b : geom.bonds) {
    h(b.a, b.b) = -t;
    h(b.b, b.a) = -t;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace hbrg
