// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/designs.hpp"
#include "isacbeam/model.hpp"
#include "isacbeam/oracle.hpp"
#include "isacbeam/rng.hpp"

#include <doctest.h>

using namespace isacbeam;
using namespace isacbeam::designs;

namespace {

CMatrix random_psd(Rng& rng, int n, int rank) {
  CMatrix x(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) x(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return x * x.adjoint();
}

CVector random_cvec(Rng& rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  return v;
}

Scene small_scene() {
  // the first exhaustive-search fixture doubles as a handy small scene
  return oracle::sandwich_fixture(0).scene;
}

}  // namespace

TEST_CASE("extraction is idempotent on rank-one inputs") {
  Rng rng(41);
  const int n = 4;
  const CVector w = random_cvec(rng, n);
  const CVector g = random_cvec(rng, n);
  const CMatrix s_tilde = random_psd(rng, n, n);
  const BeamDesign d = rank_one_extract(w * w.adjoint(), s_tilde, 2.5, g);
  // equal up to a unit phase
  const Complex phase = (w.adjoint() * d.info_beam)(0, 0) / w.squaredNorm();
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-9);
  CHECK((d.info_beam - phase * w).norm() < 1e-8 * w.norm());
  CHECK((d.sensing_cov - s_tilde).cwiseAbs().maxCoeff() <
        1e-8 * s_tilde.cwiseAbs().maxCoeff());
  CHECK(d.scale == 2.5);
}

TEST_CASE("extraction on the identity splits along the channel") {
  CVector g(2);
  g << 1.0, 0.0;
  const BeamDesign d = rank_one_extract(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), 1.0, g);
  CMatrix e11 = CMatrix::Zero(2, 2), e22 = CMatrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  CHECK((d.info_beam * d.info_beam.adjoint() - e11).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.sensing_cov - e22).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("extraction fuzz holds all four properties") {
  const oracle::FuzzReport rep = oracle::fuzz_proposition1(6, 1000, 42);
  CHECK(rep.passed());
  CHECK(rep.degenerate_hits > 0);
  CHECK(rep.worst_sum_dev < 1e-10);
  CHECK(rep.worst_w_min_eig > -1e-8);
  CHECK(rep.worst_s_min_eig > -1e-8);
  CHECK(rep.worst_cu_rel_dev < 1e-9);
  CHECK(rep.worst_eve_excess < 1e-9);
}

TEST_CASE("degenerate extraction throws") {
  Rng rng(43);
  const int n = 3;
  const CMatrix w_tilde = random_psd(rng, n, n - 1);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(w_tilde);
  const CVector g = es.eigenvectors().col(0);  // nullspace direction
  CHECK_THROWS_AS(rank_one_extract(w_tilde, CMatrix::Zero(n, n), 1.0, g),
                  DegenerateExtraction);
}

TEST_CASE("maximum secrecy rate closed forms") {
  // orthogonal CU channel: full power, zero leakage
  Scene s;
  s.n_antennas = 4;
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = 0.1;
  s.cu_noise_power_w = 1e-9;
  Target eve;
  eve.angle_rad = 0.0;
  eve.reference_pathloss = 1e-7;
  eve.is_eavesdropper = true;
  eve.noise_power_w = 1e-9;
  s.targets.push_back(eve);
  const CVector h = s.target_channel(0);
  Rng rng(44);
  CVector g = random_cvec(rng, 4);
  g -= h * (h.adjoint() * g) / h.squaredNorm();
  s.cu_channel = g * (3e-4 / g.norm());
  const double expected =
      std::log2(1.0 + s.power_budget_w * s.cu_channel.squaredNorm() / s.cu_noise_power_w);
  CHECK(max_secrecy_rate(s) == doctest::Approx(expected).epsilon(1e-3));

  // fully degraded: the CU sees exactly the eavesdropper's channel
  Scene degraded = s;
  degraded.cu_channel = h;
  degraded.cu_noise_power_w = degraded.targets[0].noise_power_w;
  CHECK(max_secrecy_rate(degraded) < 1e-4);
}

TEST_CASE("optimal design at r0 = 0 meets the sensing-only benchmark") {
  const oracle::SandwichFixture fx = oracle::sandwich_fixture(1);
  const DesignReport bench = solve_sensing_only(fx.scene, fx.grid);
  const DesignReport opt = solve_optimal(fx.scene, fx.grid, 0.0);
  CHECK(opt.matching_error <= bench.matching_error * 1.01);
  CHECK(opt.matching_error >= bench.matching_error * (1 - 1e-6));
  CHECK(opt.secrecy_rate >= 0.0);
}

TEST_CASE("optimal design is infeasible beyond the maximum rate") {
  const Scene scene = small_scene();
  const SampleGrid grid = oracle::sandwich_fixture(0).grid;
  const double max_rate = max_secrecy_rate(scene);
  CHECK_THROWS_AS(solve_optimal(scene, grid, max_rate * 2.0 + 1.0), FeasibilityError);
  try {
    solve_optimal(scene, grid, max_rate * 2.0 + 1.0);
  } catch (const FeasibilityError& e) {
    CHECK(e.max_rate_bpshz == doctest::Approx(max_rate).epsilon(1e-6));
  }
}

TEST_CASE("optimal design satisfies its report invariants") {
  const oracle::SandwichFixture fx = oracle::sandwich_fixture(0);
  const double max_rate = max_secrecy_rate(fx.scene);
  const double r0 = 0.5 * max_rate;
  const DesignReport rep = solve_optimal(fx.scene, fx.grid, r0);
  CHECK(rep.secrecy_rate >= r0 - 1e-6);
  CHECK(rep.design.info_power() + rep.design.sensing_power() ==
        doctest::Approx(fx.scene.power_budget_w).epsilon(1e-6));
  CHECK(std::isfinite(rep.gamma_e_star));
  REQUIRE(rep.trace.has_value());
  CHECK(rep.trace->value_star == doctest::Approx(rep.matching_error).epsilon(1e-6));
  // extraction preserves the relaxed objective
  CHECK(rep.matching_error ==
        doctest::Approx(model::matching_error(rep.design, fx.grid, fx.scene)));
}

TEST_CASE("zero-forcing nulls the eavesdroppers exactly") {
  // orthogonal channels: the projection leaves g untouched, w0 aligns with g
  Scene s;
  s.n_antennas = 4;
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = 0.1;
  s.cu_noise_power_w = 1e-9;
  Target eve;
  eve.angle_rad = 0.0;
  eve.reference_pathloss = 1e-7;
  eve.is_eavesdropper = true;
  eve.noise_power_w = 1e-9;
  s.targets.push_back(eve);
  Target trusted;
  trusted.angle_rad = deg_to_rad(50.0);
  trusted.reference_pathloss = 1e-7;
  s.targets.push_back(trusted);
  const CVector h = s.target_channel(0);
  Rng rng(45);
  CVector g = random_cvec(rng, 4);
  g -= h * (h.adjoint() * g) / h.squaredNorm();
  s.cu_channel = g * (3e-4 / g.norm());
  const SampleGrid grid = model::desired_beampattern(s, deg_to_rad(8.0), 61);

  const DesignReport rep = solve_zf(s, grid, 1.0);
  CHECK(rep.max_eve_sinr() < 1e-12);
  const Complex align = (s.cu_channel.adjoint() * rep.design.info_beam)(0, 0);
  CHECK(std::abs(align) ==
        doctest::Approx(s.cu_channel.norm() * rep.design.info_beam.norm()).epsilon(1e-8));
  CHECK(rep.secrecy_rate >= 1.0 - 1e-6);

  Scene tiny = s;
  tiny.n_antennas = 1;
  CHECK_THROWS_AS(solve_zf(tiny, grid, 0.0), std::invalid_argument);
}

TEST_CASE("zero-forcing fails cleanly when the CU lies in the eavesdropper span") {
  Scene s;
  s.n_antennas = 3;
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = 0.1;
  s.cu_noise_power_w = 1e-9;
  Target eve;
  eve.angle_rad = 0.3;
  eve.reference_pathloss = 1e-7;
  eve.is_eavesdropper = true;
  eve.noise_power_w = 1e-9;
  s.targets.push_back(eve);
  s.cu_channel = s.target_channel(0);
  const SampleGrid grid = model::desired_beampattern(s, deg_to_rad(10.0), 41);
  CHECK_THROWS_AS(solve_zf(s, grid, 0.5), FeasibilityError);
}

TEST_CASE("separate design closed form and invariants") {
  Scene s;
  s.n_antennas = 4;
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = 0.1;
  s.cu_noise_power_w = 1e-9;
  Target eve;
  eve.angle_rad = 0.0;
  eve.reference_pathloss = 1e-7;
  eve.is_eavesdropper = true;
  eve.noise_power_w = 1e-9;
  s.targets.push_back(eve);
  const CVector h = s.target_channel(0);
  Rng rng(46);
  CVector g = random_cvec(rng, 4);
  g -= h * (h.adjoint() * g) / h.squaredNorm();
  s.cu_channel = g * (3e-4 / g.norm());
  const SampleGrid grid = model::desired_beampattern(s, deg_to_rad(8.0), 61);

  const double r0 = 1.5;
  const DesignReport rep = solve_separate(s, grid, r0);
  const double expected_power =
      s.cu_noise_power_w * (std::pow(2.0, r0) - 1.0) / s.cu_channel.squaredNorm();
  CHECK(rep.design.info_power() == doctest::Approx(expected_power).epsilon(1e-5));
  CHECK(rep.secrecy_rate >= r0 - 1e-6);
  // AN invisible at the CU
  const double leak = std::real(
      Complex(s.cu_channel.adjoint() * rep.design.sensing_cov * s.cu_channel));
  CHECK(leak <= 1e-8 * s.cu_channel.squaredNorm() * rep.design.sensing_power());

  const DesignReport at_zero = solve_separate(s, grid, 0.0);
  CHECK(at_zero.design.info_power() == 0.0);
  CHECK(at_zero.design.sensing_power() == doctest::Approx(s.power_budget_w).epsilon(1e-8));
}

TEST_CASE("design ordering and benchmark bound") {
  const oracle::SandwichFixture fx = oracle::sandwich_fixture(2);
  const double max_rate = max_secrecy_rate(fx.scene);
  const double r0 = 0.5 * max_rate;
  const DesignReport bench = solve_sensing_only(fx.scene, fx.grid);
  const DesignReport opt = solve_optimal(fx.scene, fx.grid, r0);
  const DesignReport zf = solve_zf(fx.scene, fx.grid, r0);
  const DesignReport sep = solve_separate(fx.scene, fx.grid, r0);
  const double eps = 1e-4 * opt.matching_error + 1e-9;
  CHECK(bench.matching_error <= opt.matching_error + eps);
  CHECK(opt.matching_error <= zf.matching_error + eps);
  CHECK(opt.matching_error <= sep.matching_error + eps);
  CHECK(bench.secrecy_rate == 0.0);
}

TEST_CASE("optimal matching error is nondecreasing in the requirement") {
  const oracle::SandwichFixture fx = oracle::sandwich_fixture(3);
  const double max_rate = max_secrecy_rate(fx.scene);
  double prev = -1.0;
  for (double frac : {0.2, 0.5, 0.8}) {
    const DesignReport rep = solve_optimal(fx.scene, fx.grid, frac * max_rate);
    CHECK(rep.matching_error >= prev - 1e-6 * (1 + rep.matching_error));
    prev = rep.matching_error;
  }
}

TEST_CASE("sensing-only scaling with the power budget") {
  const oracle::SandwichFixture fx = oracle::sandwich_fixture(4);
  const DesignReport base = solve_sensing_only(fx.scene, fx.grid);
  Scene doubled = fx.scene;
  doubled.power_budget_w *= 2.0;
  const DesignReport twice = solve_sensing_only(doubled, fx.grid);
  CHECK(twice.eta_star == doctest::Approx(2.0 * base.eta_star).epsilon(1e-6));
  for (int m = 0; m < fx.grid.size(); ++m) {
    const double shape_a = base.total_gain(m) / base.eta_star;
    const double shape_b = twice.total_gain(m) / twice.eta_star;
    CHECK(std::abs(shape_a - shape_b) < 1e-6 * (1.0 + std::abs(shape_a)));
  }
}

TEST_CASE("feasibility coherence on a small scene") {
  const oracle::SandwichFixture fx = oracle::sandwich_fixture(1);
  const double max_rate = max_secrecy_rate(fx.scene);
  CHECK_NOTHROW(solve_optimal(fx.scene, fx.grid, 0.9 * max_rate));
  CHECK_THROWS_AS(solve_optimal(fx.scene, fx.grid, 1.5 * max_rate + 0.1), FeasibilityError);
}
