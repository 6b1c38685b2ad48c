#include "hubbard_brg/fock.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace hbrg {
namespace {

void check_site(int site) {
  if (site < 0 || site >= kMaxSites) {
    throw std::invalid_argument("site index " + std::to_string(site) + " out of range");
  }
}

Bits below(int site) { return (Bits{1} << site) - 1; }

// Occupied modes that precede (site, spin) in the global mode order.
int preceding_modes(FockState s, int site, Spin spin) {
  if (spin == Spin::up) {
    return std::popcount(s.up & below(site));
  }
  return std::popcount(s.up) + std::popcount(s.dn & below(site));
}

}  // namespace

std::optional<SignedState> apply_create(FockState s, int site, Spin spin) {
  check_site(site);
  const Bits mask = Bits{1} << site;
  Bits& bits = spin == Spin::up ? s.up : s.dn;
  if (bits & mask) {
    return std::nullopt;
  }
  const int sign = (preceding_modes(s, site, spin) & 1) ? -1 : 1;
  bits |= mask;
  return SignedState{s, sign};
}

std::optional<SignedState> apply_annihilate(FockState s, int site, Spin spin) {
  check_site(site);
  const Bits mask = Bits{1} << site;
  Bits& bits = spin == Spin::up ? s.up : s.dn;
  if (!(bits & mask)) {
    return std::nullopt;
  }
  const int sign = (preceding_modes(s, site, spin) & 1) ? -1 : 1;
  bits &= ~mask;
  return SignedState{s, sign};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::vector<Bits> combinations(int n_sites, int count) {
  std::vector<Bits> out;
  out.reserve(binomial(n_sites, count));
  if (count == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack walks same-popcount integers in ascending order.
  Bits x = (Bits{1} << count) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n_sites;
  while (x < limit) {
    out.push_back(x);
    const Bits c = x & (~x + 1);
    const std::uint64_t r = std::uint64_t{x} + c;
    if (r >= limit) {
      break;
    }
    x = static_cast<Bits>((((r ^ x) >> 2) / c) | r);
  }
  return out;
}

SectorBasis::SectorBasis(int n_sites, int n_up, int n_dn)
    : n_sites_(n_sites), n_up_(n_up), n_dn_(n_dn) {
  if (n_sites < 0 || n_sites > kMaxSites || n_up < 0 || n_dn < 0 || n_up > n_sites ||
      n_dn > n_sites) {
    throw std::invalid_argument("invalid sector (n_sites=" + std::to_string(n_sites) +
                                ", n_up=" + std::to_string(n_up) +
                                ", n_dn=" + std::to_string(n_dn) + ")");
  }
  up_strings_ = combinations(n_sites, n_up);
  dn_strings_ = combinations(n_sites, n_dn);
  states_.reserve(up_strings_.size() * dn_strings_.size());
  for (Bits u : up_strings_) {
    for (Bits d : dn_strings_) {
      states_.push_back({u, d});
    }
  }
}

std::optional<std::size_t> SectorBasis::index_of(FockState s) const {
  const auto u = std::lower_bound(up_strings_.begin(), up_strings_.end(), s.up);
  if (u == up_strings_.end() || *u != s.up) {
    return std::nullopt;
  }
  const auto d = std::lower_bound(dn_strings_.begin(), dn_strings_.end(), s.dn);
  if (d == dn_strings_.end() || *d != s.dn) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(u - up_strings_.begin()) * dn_strings_.size() +
         static_cast<std::size_t>(d - dn_strings_.begin());
}

SectorBasis enumerate_sector(int n_sites, int n_up, int n_dn) {
  return SectorBasis(n_sites, n_up, n_dn);
}

}  // namespace hbrg
