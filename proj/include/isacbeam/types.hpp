// SPDX-License-Identifier: Apache-2.0
//
// isacbeam -- secrecy-constrained transmit beamforming for integrated
// sensing and communication. Core domain types and unit conversions.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace isacbeam {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// dBm -> watts.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Positive loss in dB -> linear power gain (70 dB loss -> 1e-7).
inline double loss_db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }

inline double ratio_to_db(double r) { return 10.0 * std::log10(r); }

/// Invalid or unparsable configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested secrecy rate exceeds what the scene supports.
class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(const std::string& what, double max_rate)
      : std::runtime_error(what), max_rate_bpshz(max_rate) {}
  double max_rate_bpshz;
};

/// A numerical guarantee did not hold (solver output unusable, invariant violated).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Rank-one extraction requested on a covariance carrying no power toward the CU.
class DegenerateExtraction : public NumericalError {
 public:
  explicit DegenerateExtraction(const std::string& what) : NumericalError(what) {}
};

/// A sensing target; `noise_power_w` is meaningful only for eavesdroppers.
struct Target {
  double angle_rad = 0.0;
  double distance_m = 1.0;
  double reference_pathloss = 1.0;  // linear, at 1 m
  bool is_eavesdropper = false;
  double noise_power_w = 0.0;

  /// Channel amplitude sqrt(reference_pathloss / distance^2).
  double amplitude() const { return std::sqrt(reference_pathloss) / distance_m; }
};

/// Array geometry, targets, CU channel, noise powers and power budget.
struct Scene {
  int n_antennas = 0;
  double antenna_spacing_ratio = 0.5;  // d / lambda
  std::vector<Target> targets;
  CVector cu_channel;       // g, length n_antennas
  double cu_noise_power_w = 0.0;
  double power_budget_w = 0.0;

  std::vector<int> eavesdroppers() const;
  int n_eavesdroppers() const { return static_cast<int>(eavesdroppers().size()); }

  /// LoS channel h_k of target k.
  CVector target_channel(int k) const;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// Uniform angular sample grid with the binary desired beampattern.
struct SampleGrid {
  RVector angles_rad;   // M samples over [-pi/2, pi/2], both endpoints included
  RVector desired;      // 0/1 per sample
  double beam_width_rad = 0.0;

  int size() const { return static_cast<int>(angles_rad.size()); }
};

/// Decision variables of a beamforming design: info beam w0, sensing covariance S,
/// beampattern scale eta.
struct BeamDesign {
  CVector info_beam;
  CMatrix sensing_cov;
  double scale = 0.0;

  CMatrix total_covariance() const {
    return sensing_cov + info_beam * info_beam.adjoint();
  }
  double info_power() const { return info_beam.squaredNorm(); }
  double sensing_power() const { return sensing_cov.trace().real(); }
};

}  // namespace isacbeam
