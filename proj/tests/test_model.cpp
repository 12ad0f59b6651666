// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/model.hpp"
#include "isacbeam/rng.hpp"

#include <doctest.h>

using namespace isacbeam;
using namespace isacbeam::model;

namespace {

Scene two_antenna_scene() {
  Scene s;
  s.n_antennas = 2;
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = 0.1;
  s.cu_noise_power_w = 1e-9;
  Target eve;
  eve.angle_rad = 0.0;
  eve.reference_pathloss = 1e-7;
  eve.is_eavesdropper = true;
  eve.noise_power_w = 1e-9;
  s.targets.push_back(eve);
  s.cu_channel = CVector(2);
  s.cu_channel << Complex(3e-4, 0), Complex(1e-4, 2e-4);
  return s;
}

CMatrix random_psd(Rng& rng, int n) {
  CMatrix x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return x * x.adjoint();
}

CVector random_cvec(Rng& rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  return v;
}

// scalar-loop quadratic form, independent of the Eigen expression path
double quad_loop(const CVector& a, const CMatrix& x) {
  Complex acc = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) acc += std::conj(a(i)) * x(i, j) * a(j);
  return acc.real();
}

}  // namespace

TEST_CASE("steering vector matches closed-form phases") {
  const CVector a0 = steering_vector(0.0, 2, 0.5);
  CHECK(std::abs(a0(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(a0(1) - Complex(1, 0)) < 1e-15);

  const CVector a1 = steering_vector(kPi / 2, 2, 0.5);
  CHECK(std::abs(a1(1) - Complex(-1, 0)) < 1e-12);

  // sin(pi/6) = 1/2 gives a quarter turn per element
  const CVector a2 = steering_vector(kPi / 6, 4, 0.5);
  CHECK(std::abs(a2(0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(a2(1) - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(a2(2) - Complex(-1, 0)) < 1e-12);
  CHECK(std::abs(a2(3) - Complex(0, -1)) < 1e-12);
}

TEST_CASE("steering vector entries have unit modulus") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double angle = rng.uniform(-kPi / 2, kPi / 2);
    const CVector a = steering_vector(angle, 8, 0.5);
    for (int i = 0; i < a.size(); ++i) CHECK(std::abs(std::abs(a(i)) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(steering_vector(0.0, 0, 0.5), std::invalid_argument);
}

TEST_CASE("LoS channel amplitude and phase") {
  Target t;
  t.angle_rad = 0.0;
  t.distance_m = 1.0;
  t.reference_pathloss = 1.0;
  const CVector h = los_channel(t, 2, 0.5);
  CHECK(std::abs(h(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(h(1) - Complex(1, 0)) < 1e-15);

  t.reference_pathloss = 1e-7;
  const CVector h2 = los_channel(t, 8, 0.5);
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(h2(i)) == doctest::Approx(3.16227766e-4).epsilon(1e-8));
  CHECK(h2.norm() == doctest::Approx(std::sqrt(8.0) * 3.16227766e-4).epsilon(1e-8));

  t.angle_rad = kPi / 2;
  t.distance_m = 2.0;
  t.reference_pathloss = 4.0;
  const CVector h3 = los_channel(t, 2, 0.5);
  CHECK(std::abs(h3(0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(h3(1) - Complex(-1, 0)) < 1e-12);

  t.distance_m = 0.0;
  CHECK_THROWS_AS(los_channel(t, 2, 0.5), std::invalid_argument);
}

TEST_CASE("CU SINR agrees with scalar-loop evaluation") {
  Scene s = two_antenna_scene();
  const double q = s.power_budget_w;

  BeamDesign matched;
  matched.info_beam = s.cu_channel * std::sqrt(q) / s.cu_channel.norm();
  matched.sensing_cov = CMatrix::Zero(2, 2);
  CHECK(sinr_cu(matched, s) ==
        doctest::Approx(q * s.cu_channel.squaredNorm() / s.cu_noise_power_w).epsilon(1e-12));

  matched.info_beam.setZero();
  CHECK(sinr_cu(matched, s) == 0.0);

  Scene s3 = s;
  s3.n_antennas = 3;
  Rng rng(5);
  s3.cu_channel = random_cvec(rng, 3);
  BeamDesign d;
  d.info_beam = random_cvec(rng, 3);
  d.sensing_cov = random_psd(rng, 3);
  const double expected = std::norm(Complex(s3.cu_channel.adjoint() * d.info_beam)) /
                          (quad_loop(s3.cu_channel, d.sensing_cov) + s3.cu_noise_power_w);
  CHECK(sinr_cu(d, s3) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("eavesdropper SINR") {
  Scene s = two_antenna_scene();
  const CVector h = s.target_channel(0);

  BeamDesign d;
  d.info_beam = CVector(2);
  d.info_beam << std::conj(h(1)), -std::conj(h(0));  // orthogonal to h
  d.sensing_cov = CMatrix::Zero(2, 2);
  CHECK(sinr_eavesdropper(d, 0, s) < 1e-20);

  d.info_beam.setZero();
  d.sensing_cov = (s.power_budget_w / 2) * CMatrix::Identity(2, 2);
  CHECK(sinr_eavesdropper(d, 0, s) == 0.0);

  Target trusted;
  trusted.reference_pathloss = 1e-7;
  s.targets.push_back(trusted);
  CHECK_THROWS_AS(sinr_eavesdropper(d, 1, s), std::invalid_argument);

  Rng rng(6);
  Scene s3 = two_antenna_scene();
  s3.n_antennas = 3;
  s3.cu_channel = random_cvec(rng, 3);
  BeamDesign r;
  r.info_beam = random_cvec(rng, 3);
  r.sensing_cov = random_psd(rng, 3);
  const CVector h3 = s3.target_channel(0);
  const double expected = std::norm(Complex(h3.adjoint() * r.info_beam)) /
                          (quad_loop(h3, r.sensing_cov) + s3.targets[0].noise_power_w);
  CHECK(sinr_eavesdropper(r, 0, s3) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("secrecy rate clamps at zero and takes the worst eavesdropper") {
  Scene s = two_antenna_scene();
  BeamDesign d;
  d.info_beam = CVector::Zero(2);
  d.sensing_cov = CMatrix::Zero(2, 2);
  CHECK(secrecy_rate(d, s) == 0.0);

  // engineer gamma_0 = 3 and gamma_1 = 1: rate log2(4/2) = 1
  Scene pair = two_antenna_scene();
  pair.cu_channel = CVector(2);
  pair.cu_channel << 1.0, 0.0;
  pair.cu_noise_power_w = 1.0;
  BeamDesign mix;
  mix.sensing_cov = CMatrix::Zero(2, 2);
  mix.info_beam = CVector(2);
  mix.info_beam << std::sqrt(3.0), 0.0;
  const CVector h = pair.target_channel(0);
  pair.targets[0].noise_power_w = std::norm(Complex(h.adjoint() * mix.info_beam));
  CHECK(secrecy_rate(mix, pair) == doctest::Approx(1.0).epsilon(1e-12));

  // clamp when the CU link is worse than the eavesdropper's
  Scene worse = pair;
  worse.cu_noise_power_w = 1e6;
  CHECK(secrecy_rate(mix, worse) == 0.0);

  // minimum over eavesdroppers, recomputed per-k
  Rng rng(7);
  Scene multi = two_antenna_scene();
  multi.n_antennas = 4;
  multi.cu_channel = random_cvec(rng, 4);
  multi.targets.clear();
  for (int k = 0; k < 2; ++k) {
    Target eve;
    eve.angle_rad = -0.5 + k;
    eve.reference_pathloss = 1e-7;
    eve.is_eavesdropper = true;
    eve.noise_power_w = 1e-9;
    multi.targets.push_back(eve);
  }
  BeamDesign rd;
  rd.info_beam = random_cvec(rng, 4) * 0.01;
  rd.sensing_cov = random_psd(rng, 4) * 1e-4;
  const double rate_cu = std::log2(1.0 + sinr_cu(rd, multi));
  double expect = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k)
    expect = std::min(expect, rate_cu - std::log2(1.0 + sinr_eavesdropper(rd, k, multi)));
  expect = std::max(expect, 0.0);
  CHECK(secrecy_rate(rd, multi) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("beampattern gain basics and realness") {
  Scene s = two_antenna_scene();
  s.n_antennas = 5;
  CHECK(beampattern_gain(CMatrix::Identity(5, 5), 0.3, s) == doctest::Approx(5.0));

  const CVector a = steering_vector(0.7, 5, 0.5);
  CHECK(beampattern_gain(a * a.adjoint(), 0.7, s) == doctest::Approx(25.0).epsilon(1e-12));

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix p = random_psd(rng, 5);
    const double angle = rng.uniform(-kPi / 2, kPi / 2);
    const double gain = beampattern_gain(p, angle, s);
    CHECK(gain >= -1e-10);
    const CVector av = steering_vector(angle, 5, 0.5);
    CHECK(gain == doctest::Approx(quad_loop(av, p)).epsilon(1e-12));
  }
}

TEST_CASE("desired beampattern windows") {
  Scene s;
  s.n_antennas = 2;
  s.power_budget_w = 1.0;
  s.cu_noise_power_w = 1.0;
  s.cu_channel = CVector::Ones(2);
  for (double deg : {-30.0, 30.0}) {
    Target t;
    t.angle_rad = deg_to_rad(deg);
    t.reference_pathloss = 1.0;
    t.is_eavesdropper = deg > 0;
    t.noise_power_w = 1.0;
    s.targets.push_back(t);
  }
  // 181 samples = 1 degree spacing; 29 deg falls inside the +-2.5 deg window
  const SampleGrid grid = desired_beampattern(s, deg_to_rad(5.0), 181);
  const int idx29 = 119;
  CHECK(grid.angles_rad(idx29) == doctest::Approx(deg_to_rad(29.0)));
  CHECK(grid.desired(idx29) == 1.0);
  CHECK(grid.desired(90) == 0.0);  // broadside is outside every window

  CHECK_THROWS_AS(desired_beampattern(s, deg_to_rad(5.0), 1), std::invalid_argument);
  Scene empty = s;
  empty.targets.clear();
  CHECK_THROWS_AS(desired_beampattern(empty, deg_to_rad(5.0), 11), std::invalid_argument);
  CHECK_THROWS_AS(desired_beampattern(s, deg_to_rad(1e-9), 5), std::invalid_argument);
}

TEST_CASE("paper-style window membership recomputed independently") {
  Scene s;
  s.n_antennas = 8;
  s.power_budget_w = 0.1;
  s.cu_noise_power_w = 1e-9;
  s.cu_channel = CVector::Ones(8);
  const std::vector<double> angles = {-10, 10, -30, 30, 80, -80, -50, 50};
  for (double deg : angles) {
    Target t;
    t.angle_rad = deg_to_rad(deg);
    t.reference_pathloss = 1e-7;
    t.is_eavesdropper = std::abs(deg) == 30;
    t.noise_power_w = 1e-9;
    s.targets.push_back(t);
  }
  const SampleGrid grid = desired_beampattern(s, deg_to_rad(5.0), 201);
  for (int m = 0; m < grid.size(); ++m) {
    bool expect = false;
    for (double deg : angles) {
      if (std::abs(rad_to_deg(grid.angles_rad(m)) - deg) < 2.5) expect = true;
    }
    CHECK(grid.desired(m) == (expect ? 1.0 : 0.0));
  }
  CHECK(grid.desired.sum() > 0);
}

TEST_CASE("matching error and the optimal scale") {
  Scene s = two_antenna_scene();
  const SampleGrid grid = desired_beampattern(s, deg_to_rad(10.0), 41);

  BeamDesign zero;
  zero.info_beam = CVector::Zero(2);
  zero.sensing_cov = CMatrix::Zero(2, 2);
  zero.scale = 0.0;
  CHECK(matching_error(zero, grid, s) == 0.0);
  CHECK(optimal_scale(zero.total_covariance(), grid, s) == 0.0);

  Rng rng(9);
  const CMatrix cov = random_psd(rng, 2);
  const double eta_star = optimal_scale(cov, grid, s);

  BeamDesign d;
  d.info_beam = CVector::Zero(2);
  d.sensing_cov = cov;
  d.scale = eta_star;
  const double best = matching_error(d, grid, s);

  // dense scan over the scale brackets the closed form
  const double max_gain = beampattern_samples(cov, grid, s).maxCoeff();
  double scan_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 4000; ++i) {
    d.scale = 2.0 * max_gain * i / 4000.0;
    scan_best = std::min(scan_best, matching_error(d, grid, s));
  }
  CHECK(best <= scan_best * (1 + 1e-6));
  CHECK(std::abs(best - scan_best) <= 1e-6 * std::max(best, 1e-12));
  for (int trial = 0; trial < 100; ++trial) {
    d.scale = rng.uniform(0.0, 2.0 * max_gain);
    CHECK(best <= matching_error(d, grid, s) + 1e-12);
  }

  // per-sample additivity of the error
  d.scale = eta_star;
  double total = 0.0;
  const RVector gains = beampattern_samples(cov, grid, s);
  for (int m = 0; m < grid.size(); ++m) {
    const double r = eta_star * grid.desired(m) - gains(m);
    total += r * r;
  }
  CHECK(matching_error(d, grid, s) == doctest::Approx(total).epsilon(1e-12));

  SampleGrid all_zero = grid;
  all_zero.desired.setZero();
  CHECK_THROWS_AS(optimal_scale(cov, all_zero, s), std::invalid_argument);

  // constant gains on a binary pattern pull the scale to that constant
  CHECK(optimal_scale(CMatrix::Identity(2, 2), grid, s) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("scene validation") {
  Scene s = two_antenna_scene();
  CHECK_NOTHROW(s.validate());
  Scene bad = s;
  bad.n_antennas = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.targets[0].is_eavesdropper = false;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.targets[0].angle_rad = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.power_budget_w = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
