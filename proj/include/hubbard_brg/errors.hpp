#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hbrg {

/// Base for failures of the numerical pipeline (exit code 2 in the CLI).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  /// RG level at which the failure happened, or -1 outside a flow.
  int level() const { return level_; }
  void set_level(int level) { level_ = level; }

 private:
  int level_ = -1;
};

/// A retained block state is orbitally degenerate where a unique state is required.
class DegenerateRetention : public NumericalFailure {
 public:
  DegenerateRetention(int n_up, int n_dn, std::vector<double> energies);

  int n_up() const { return n_up_; }
  int n_dn() const { return n_dn_; }
  const std::vector<double>& energies() const { return energies_; }

 private:
  int n_up_;
  int n_dn_;
  std::vector<double> energies_;
};

/// lambda is not uniform over the border sites, or the spin doublet is split.
class SymmetryViolation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Critical search bracket does not straddle the transition (exit code 3).
class BracketFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The eigensolver failed or its eigenpairs did not check out (exit code 3).
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hbrg
