#pragma once

// Fermionic occupation-number basis for a block of at most 31 sites.
//
// Mode order used for Jordan-Wigner signs: all spin-up modes by ascending
// site, then all spin-down modes by ascending site. A basis state is
//   c+_{u1} c+_{u2} ... c+_{d1} c+_{d2} ... |0>,  u1 < u2 < ..., d1 < d2 < ...

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hbrg {

using Bits = std::uint32_t;

inline constexpr int kMaxSites = 31;

enum class Spin : std::uint8_t { up = 0, down = 1 };

struct FockState {
  Bits up = 0;
  Bits dn = 0;

  // up-major, dn-minor; this is the ordering of SectorBasis
  friend constexpr auto operator<=>(const FockState&, const FockState&) = default;
};

struct SignedState {
  FockState state;
  int sign = 1;
};

/// c+_{site,spin}|s>, or nullopt if the mode is already occupied.
std::optional<SignedState> apply_create(FockState s, int site, Spin spin);

/// c_{site,spin}|s>, or nullopt if the mode is empty.
std::optional<SignedState> apply_annihilate(FockState s, int site, Spin spin);

std::uint64_t binomial(int n, int k);

/// All occupation strings of `n_sites` bits with exactly `count` set, ascending.
std::vector<Bits> combinations(int n_sites, int count);

class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up, int n_dn);

  int n_sites() const { return n_sites_; }
  int n_up() const { return n_up_; }
  int n_dn() const { return n_dn_; }
  std::size_t size() const { return states_.size(); }

  std::span<const FockState> states() const { return states_; }
  const FockState& operator[](std::size_t i) const { return states_[i]; }

  /// Ordinal of `s`, or nullopt if `s` is not in this sector.
  std::optional<std::size_t> index_of(FockState s) const;

 private:
  int n_sites_;
  int n_up_;
  int n_dn_;
  std::vector<Bits> up_strings_;
  std::vector<Bits> dn_strings_;
  std::vector<FockState> states_;
};

/// Throws std::invalid_argument unless 0 <= n_up, n_dn <= n_sites <= 31.
SectorBasis enumerate_sector(int n_sites, int n_up, int n_dn);

}  // namespace hbrg
