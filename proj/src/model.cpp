// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/model.hpp"

#include <algorithm>
#include <cmath>

namespace isacbeam {

std::vector<int> Scene::eavesdroppers() const {
  std::vector<int> idx;
  for (int k = 0; k < static_cast<int>(targets.size()); ++k) {
    if (targets[k].is_eavesdropper) idx.push_back(k);
  }
  return idx;
}

CVector Scene::target_channel(int k) const {
  return model::los_channel(targets.at(static_cast<size_t>(k)), n_antennas,
                            antenna_spacing_ratio);
}

void Scene::validate() const {
  if (n_antennas <= 1) throw std::invalid_argument("scene: n_antennas must exceed 1");
  if (antenna_spacing_ratio <= 0.0)
    throw std::invalid_argument("scene: antenna_spacing_ratio must be positive");
  if (targets.empty()) throw std::invalid_argument("scene: at least one target required");
  if (power_budget_w <= 0.0)
    throw std::invalid_argument("scene: power budget must be positive");
  if (cu_noise_power_w <= 0.0)
    throw std::invalid_argument("scene: CU noise power must be positive");
  if (cu_channel.size() != n_antennas)
    throw std::invalid_argument("scene: CU channel length must equal n_antennas");
  int n_eve = 0;
  for (const Target& t : targets) {
    if (std::abs(t.angle_rad) > kPi / 2.0 + 1e-12)
      throw std::invalid_argument("scene: target angle outside [-pi/2, pi/2]");
    if (t.distance_m <= 0.0) throw std::invalid_argument("scene: target distance must be positive");
    if (t.reference_pathloss <= 0.0)
      throw std::invalid_argument("scene: target pathloss must be positive");
    if (t.is_eavesdropper) {
      ++n_eve;
      if (t.noise_power_w <= 0.0)
        throw std::invalid_argument("scene: eavesdropper noise power must be positive");
    }
  }
  if (n_eve < 1) throw std::invalid_argument("scene: at least one eavesdropper required");
}

namespace model {

CVector steering_vector(double angle_rad, int n_antennas, double spacing_ratio) {
  if (n_antennas < 1) throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
  CVector a(n_antennas);
  const double phase_step = 2.0 * kPi * spacing_ratio * std::sin(angle_rad);
  for (int n = 0; n < n_antennas; ++n) {
    a(n) = std::polar(1.0, phase_step * n);
  }
  return a;
}

CVector los_channel(const Target& target, int n_antennas, double spacing_ratio) {
  if (target.distance_m <= 0.0)
    throw std::invalid_argument("los_channel: target distance must be positive");
  if (target.reference_pathloss <= 0.0)
    throw std::invalid_argument("los_channel: reference pathloss must be positive");
  return target.amplitude() * steering_vector(target.angle_rad, n_antennas, spacing_ratio);
}

namespace {

double quad_form(const CVector& a, const CMatrix& x) {
  return std::real(Complex(a.adjoint() * x * a));
}

}  // namespace

double sinr_cu(const BeamDesign& design, const Scene& scene) {
  const CVector& g = scene.cu_channel;
  const double signal = std::norm(Complex(g.adjoint() * design.info_beam));
  const double interference = quad_form(g, design.sensing_cov);
  return signal / (interference + scene.cu_noise_power_w);
}

double sinr_eavesdropper(const BeamDesign& design, int target_index, const Scene& scene) {
  const Target& t = scene.targets.at(static_cast<size_t>(target_index));
  if (!t.is_eavesdropper)
    throw std::invalid_argument("sinr_eavesdropper: target is not an eavesdropper");
  const CVector h = scene.target_channel(target_index);
  const double signal = std::norm(Complex(h.adjoint() * design.info_beam));
  const double interference = quad_form(h, design.sensing_cov);
  return signal / (interference + t.noise_power_w);
}

double secrecy_rate(const BeamDesign& design, const Scene& scene) {
  const std::vector<int> eves = scene.eavesdroppers();
  if (eves.empty()) throw std::invalid_argument("secrecy_rate: no eavesdropper in scene");
  const double rate_cu = std::log2(1.0 + sinr_cu(design, scene));
  double rate = std::numeric_limits<double>::infinity();
  for (int k : eves) {
    const double rate_k = std::log2(1.0 + sinr_eavesdropper(design, k, scene));
    rate = std::min(rate, rate_cu - rate_k);
  }
  return std::max(rate, 0.0);
}

double beampattern_gain(const CMatrix& cov_total, double angle_rad, const Scene& scene) {
  const CVector a = steering_vector(angle_rad, scene.n_antennas, scene.antenna_spacing_ratio);
  return quad_form(a, cov_total);
}

SampleGrid desired_beampattern(const Scene& scene, double beam_width_rad, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("desired_beampattern: need at least 2 samples");
  if (scene.targets.empty())
    throw std::invalid_argument("desired_beampattern: scene has no target");
  SampleGrid grid;
  grid.beam_width_rad = beam_width_rad;
  grid.angles_rad.resize(n_samples);
  grid.desired.resize(n_samples);
  const double step = kPi / (n_samples - 1);
  for (int m = 0; m < n_samples; ++m) {
    const double theta = -kPi / 2.0 + step * m;
    grid.angles_rad(m) = theta;
    bool hit = false;
    for (const Target& t : scene.targets) {
      if (std::abs(theta - t.angle_rad) < beam_width_rad / 2.0) {
        hit = true;
        break;
      }
    }
    grid.desired(m) = hit ? 1.0 : 0.0;
  }
  if (grid.desired.sum() < 0.5)
    throw std::invalid_argument("desired_beampattern: no sample falls inside any beam window");
  return grid;
}

RVector beampattern_samples(const CMatrix& cov, const SampleGrid& grid, const Scene& scene) {
  RVector gains(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    gains(m) = beampattern_gain(cov, grid.angles_rad(m), scene);
  }
  return gains;
}

double matching_error(const BeamDesign& design, const SampleGrid& grid, const Scene& scene) {
  const RVector gains = beampattern_samples(design.total_covariance(), grid, scene);
  double err = 0.0;
  for (int m = 0; m < grid.size(); ++m) {
    const double r = design.scale * grid.desired(m) - gains(m);
    err += r * r;
  }
  return err;
}

double optimal_scale(const CMatrix& cov_total, const SampleGrid& grid, const Scene& scene) {
  const double denom = grid.desired.squaredNorm();
  if (denom <= 0.0)
    throw std::invalid_argument("optimal_scale: desired beampattern is identically zero");
  const RVector gains = beampattern_samples(cov_total, grid, scene);
  return grid.desired.dot(gains) / denom;
}

}  // namespace model
}  // namespace isacbeam
