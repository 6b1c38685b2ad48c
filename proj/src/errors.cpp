#include "hubbard_brg/errors.hpp"

#include <sstream>

namespace hbrg {
namespace {

std::string degenerate_message(int n_up, int n_dn, const std::vector<double>& energies) {
  std::ostringstream os;
  os.precision(12);
  os << "degenerate retained state in sector (" << n_up << "," << n_dn << "): energies";
  for (double e : energies) {
    os << ' ' << e;
  }
  return os.str();
}

}  // namespace

DegenerateRetention::DegenerateRetention(int n_up, int n_dn, std::vector<double> energies)
    : NumericalFailure(degenerate_message(n_up, n_dn, energies)),
      n_up_(n_up),
      n_dn_(n_dn),
      energies_(std::move(energies)) {}

}  // namespace hbrg
