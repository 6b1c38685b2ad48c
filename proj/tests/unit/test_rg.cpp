#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hubbard_brg/errors.hpp"
#include "hubbard_brg/rg.hpp"
#include "hubbard_brg/spectra.hpp"
#include "oracles.hpp"

using namespace hbrg;

namespace {

struct Multiplet {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
};

Multiplet lowest_multiplet(const Eigen::MatrixXd& h) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double e0 = es.eigenvalues()(0);
  Eigen::Index d = 1;
  while (d < h.rows() && es.eigenvalues()(d) - e0 <= 1e-9 * std::max(1.0, std::abs(e0))) {
    ++d;
  }
  return {es.eigenvalues().head(d), es.eigenvectors().leftCols(d)};
}

}  // namespace

TEST_SUITE("rg") {
  TEST_CASE("hex7 at U = 0: free-fermion energies, strict retention refuses") {
    const BlockGeometry g = make_block(BlockKind::hex7);
    const HubbardParams p{1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(retain_states(p, g, RetentionPolicy::strict), DegenerateRetention);
    try {
      retain_states(p, g, RetentionPolicy::strict);
    } catch (const DegenerateRetention& e) {
      CHECK(e.n_up() == 4);
      CHECK(e.n_dn() == 3);
      REQUIRE(e.energies().size() >= 2);
      CHECK(e.energies()[1] - e.energies()[0] <= 1e-9);
    }
    const RetainedSet r = retain_states(p, g, RetentionPolicy::multiplet_average);
    CHECK(r.e_minus == doctest::Approx(-11.2915).epsilon(1e-5));
    CHECK(r.e_zero == doctest::Approx(-10.2915).epsilon(1e-5));
    CHECK(r.e_plus == doctest::Approx(-9.2915).epsilon(1e-5));
    CHECK(std::abs(r.gap) <= 1e-9);

    const RgStep step = rg_step(p, g, RetentionPolicy::strict);
    CHECK(step.next.U == 0.0);
    CHECK(step.next.mu == 0.0);
  }

  TEST_CASE("tri3 charge gap approaches U at strong coupling") {
    const BlockGeometry g = make_block(BlockKind::tri3);
    for (double u : {100.0, 1000.0}) {
      const RetainedSet r = retain_states(initial_params(1.0, u), g);
      // deviation is O(t), so the ratio is 1 + O(t/U)
      CHECK(std::abs(r.gap / u - 1.0) <= 10.0 / u);
    }
  }

  TEST_CASE("retained energies are the sector ground energies") {
    const BlockGeometry g = make_block(BlockKind::hex7);
    const HubbardParams p{0.8, 6.0, 3.0, -1.7};
    const RetainedSet r = retain_states(p, g);
    const std::array secs{Sector{3, 3}, Sector{4, 3}, Sector{3, 4}, Sector{4, 4}};
    const auto s = block_ground_energies(p, g, secs, false);
    CHECK(r.e_minus == s.at({3, 3}).energies.front());
    CHECK(r.e_zero == s.at({4, 3}).energies.front());
    CHECK(r.e_zero_mirror == s.at({3, 4}).energies.front());
    CHECK(r.e_plus == s.at({4, 4}).energies.front());
    CHECK(std::abs(r.e_zero - r.e_zero_mirror) <= 1e-12 * std::max(1.0, std::abs(r.e_zero)));
    CHECK(r.ph_asymmetry == r.e_plus - r.e_minus);
  }

  TEST_CASE("lambda is a bounded, uniform matrix element") {
    for (BlockKind kind : {BlockKind::hex7, BlockKind::tri3}) {
      const BlockGeometry g = make_block(kind);
      for (double u : {0.1, 1.0, 5.0, 12.5, 20.0, 100.0}) {
        CAPTURE(u);
        const RetainedSet r = retain_states(initial_params(1.0, u), g);
        REQUIRE(r.lambda_per_border.size() == g.border_sites.size());
        CHECK(r.lambda >= 0.0);
        CHECK(r.lambda <= 1.0);
        const auto [lo, hi] =
            std::minmax_element(r.lambda_per_border.begin(), r.lambda_per_border.end());
        CHECK(*hi - *lo <= 1e-10 * std::max(1.0, r.lambda));
      }
    }
  }

  TEST_CASE("lambda at U/t = 100 against dense operators in the full Fock space") {
    const BlockGeometry g = make_block(BlockKind::hex7);
    const double u = 100.0;
    const auto full = oracle::full_hubbard(7, g.bonds, 1.0, u);
    const auto minus_idx = oracle::sector_indices(7, 3, 3);
    const auto zero_idx = oracle::sector_indices(7, 4, 3);
    const Multiplet minus = lowest_multiplet(oracle::restrict(full.h, minus_idx, minus_idx));
    const Multiplet zero = lowest_multiplet(oracle::restrict(full.h, zero_idx, zero_idx));

    const RetainedSet r = retain_states(initial_params(1.0, u), g);
    CHECK(r.multiplet_minus == minus.vectors.cols());
    CHECK(r.multiplet_zero == zero.vectors.cols());
    for (std::size_t k = 0; k < g.border_sites.size(); ++k) {
      const int b = g.border_sites[k];
      const oracle::Sparse create = oracle::Sparse(full.c[static_cast<std::size_t>(b)].transpose());
      const Eigen::MatrixXd c = oracle::restrict(create, zero_idx, minus_idx);
      const Eigen::MatrixXd elements = zero.vectors.transpose() * c * minus.vectors;
      const double lam = std::sqrt(elements.squaredNorm() /
                                   static_cast<double>(elements.rows() * elements.cols()));
      CHECK(r.lambda_per_border[k] == doctest::Approx(lam).epsilon(1e-9));
    }
  }

  TEST_CASE("one step follows the recursion") {
    for (BlockKind kind : {BlockKind::hex7, BlockKind::tri3}) {
      const BlockGeometry g = make_block(kind);
      const HubbardParams p = initial_params(1.0, 8.0);
      const RgStep s = rg_step(p, g);
      const RetainedSet& r = s.retained;
      CHECK(s.next.t == doctest::Approx(g.nu * r.lambda * r.lambda).epsilon(1e-15));
      // U' comes from the unshifted energies, the sum below carries the mu/K offsets
      CHECK(std::abs(s.next.U - (r.e_plus + r.e_minus - 2 * r.e_zero)) <=
            1e-12 * std::max(1.0, std::abs(r.e_minus)));
      CHECK(s.next.U == r.gap);
      CHECK(s.next.mu == s.next.U / 2);
      CHECK(s.next.K == ((r.e_minus + r.e_plus) / 2 + r.e_zero) / 2);
      CHECK(s.next.U >= 0);
    }
    const RgStep hex = rg_step(initial_params(1.0, 8.0), make_block(BlockKind::hex7));
    CHECK(hex.next.t / 1.0 == doctest::Approx(3 * hex.retained.lambda * hex.retained.lambda));
  }

  TEST_CASE("scale covariance") {
    const BlockGeometry g = make_block(BlockKind::hex7);
    const HubbardParams p = initial_params(1.0, 9.0);
    const HubbardParams p2{2 * p.t, 2 * p.U, 2 * p.mu, 2 * p.K};
    const RgStep a = rg_step(p, g);
    const RgStep b = rg_step(p2, g);
    CHECK(b.next.t == doctest::Approx(2 * a.next.t).epsilon(1e-10));
    CHECK(b.next.U == doctest::Approx(2 * a.next.U).epsilon(1e-10));
    CHECK(b.next.K == doctest::Approx(2 * a.next.K).epsilon(1e-10));
    CHECK(b.retained.lambda == doctest::Approx(a.retained.lambda).epsilon(1e-10));
    const FlowResult fa = run_flow(p, make_block(BlockKind::tri3), 30);
    const FlowResult fb = run_flow(p2, make_block(BlockKind::tri3), 30);
    CHECK(fa.classification == fb.classification);
  }

  TEST_CASE("retention requires mu = U/2 and an odd block") {
    const BlockGeometry g = make_block(BlockKind::tri3);
    CHECK_THROWS_AS(retain_states({1.0, 4.0, 0.0, 0.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(retention_sectors(oracle::two_site_chain()), std::invalid_argument);
    const RetentionSectors s = retention_sectors(make_block(BlockKind::hex7));
    CHECK(s.minus == Sector{3, 3});
    CHECK(s.zero == Sector{4, 3});
    CHECK(s.zero_mirror == Sector{3, 4});
    CHECK(s.plus == Sector{4, 4});
  }

  TEST_CASE("single-level flow echoes its input") {
    const BlockGeometry g = make_block(BlockKind::tri3);
    const HubbardParams p = initial_params(1.0, 3.0);
    const FlowResult f = run_flow(p, g, 1);
    REQUIRE(f.levels.size() == 1);
    CHECK(f.levels[0].params.U == 3.0);
    CHECK(f.levels[0].params.mu == 1.5);
    CHECK(f.levels[0].params.K == -0.75);
    CHECK(f.levels[0].u_over_t == 3.0);
    CHECK(f.classification == Phase::critical_undecided);
    CHECK(f.gap == f.levels[0].retained.gap);
    CHECK_THROWS_AS(run_flow(p, g, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_flow({0.0, 1.0, 0.5, 0.0}, g, 3), std::invalid_argument);
  }

  TEST_CASE("flows move away from the critical coupling") {
    const BlockGeometry g = make_block(BlockKind::hex7);
    const FlowResult up = run_flow(initial_params(1.0, 20.0), g, 50);
    CHECK(up.classification == Phase::insulating);
    const FlowResult down = run_flow(initial_params(1.0, 2.0), g, 50);
    CHECK(down.classification == Phase::metallic);
    for (std::size_t i = 1; i < up.levels.size(); ++i) {
      CHECK(up.levels[i].u_over_t > up.levels[i - 1].u_over_t);
      CHECK(up.levels[i].u_over_t == up.levels[i].params.U / up.levels[i].params.t);
    }
    for (std::size_t i = 1; i < down.levels.size(); ++i) {
      CHECK(down.levels[i].u_over_t < down.levels[i - 1].u_over_t);
    }
  }

  TEST_CASE("U = 0 flow stays free") {
    const FlowResult f = run_flow(initial_params(1.0, 0.0), make_block(BlockKind::hex7), 5);
    CHECK(f.classification == Phase::metallic);
    for (const FlowLevel& l : f.levels) {
      CHECK(l.u_over_t == 0.0);
    }
  }

  TEST_CASE("classification thresholds") {
    CHECK(classify(2e6) == Phase::insulating);
    CHECK(classify(5e-7) == Phase::metallic);
    CHECK(classify(1.0) == Phase::critical_undecided);
    CHECK(classify(1e6) == Phase::critical_undecided);
    CHECK(to_string(Phase::critical_undecided) == "critical-undecided");
  }

  TEST_CASE("tri3 critical coupling by bisection") {
    const BlockGeometry g = make_block(BlockKind::tri3);
    const CriticalResult coarse = find_critical(g, 1e-3);
    CHECK(coarse.u_c_over_t > 1.0);
    CHECK(coarse.u_c_over_t < 50.0);
    CHECK(coarse.upper - coarse.lower <= 1e-3);
    CHECK(run_flow(initial_params(1.0, coarse.lower), g, 50).classification == Phase::metallic);
    CHECK(run_flow(initial_params(1.0, coarse.upper), g, 50).classification == Phase::insulating);
    const CriticalResult fine = find_critical(g, 1e-4);
    CHECK(std::abs(fine.u_c_over_t - coarse.u_c_over_t) <= 1e-3);
    CHECK(find_critical(g, 1e-3).u_c_over_t == coarse.u_c_over_t);
  }

  TEST_CASE("bisection needs a straddling bracket") {
    const BlockGeometry g = make_block(BlockKind::tri3);
    CHECK_THROWS_AS(find_critical(g, 1e-3, {20.0, 50.0, 50}), BracketFailure);
    CHECK_THROWS_AS(find_critical(g, 1e-3, {1.0, 50.0, 1}), BracketFailure);
    CHECK_THROWS_AS(find_critical(g, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(find_critical(g, 1e-3, {5.0, 2.0, 50}), std::invalid_argument);
  }
}
