// SPDX-License-Identifier: Apache-2.0
//
// Physical and metric layer: array response, LoS channels, SINRs, secrecy
// rate, beampattern gain and the beampattern matching error.

#pragma once

#include "isacbeam/types.hpp"

namespace isacbeam::model {

/// ULA steering vector a(theta); element n is exp(j*2*pi*n*(d/lambda)*sin(theta)).
CVector steering_vector(double angle_rad, int n_antennas, double spacing_ratio);

/// LoS channel h_k = alpha_k * a(theta_k) with alpha_k = sqrt(pathloss / distance^2).
CVector los_channel(const Target& target, int n_antennas, double spacing_ratio);

/// Received SINR at the CU: |g^H w0|^2 / (g^H S g + sigma0^2).
double sinr_cu(const BeamDesign& design, const Scene& scene);

/// Received SINR at eavesdropper k: |h_k^H w0|^2 / (h_k^H S h_k + sigma_k^2).
/// Throws std::invalid_argument if target k is not an eavesdropper.
double sinr_eavesdropper(const BeamDesign& design, int target_index, const Scene& scene);

/// Worst-case secrecy rate min_k (log2(1+gamma0) - log2(1+gamma_k))^+ in bps/Hz.
double secrecy_rate(const BeamDesign& design, const Scene& scene);

/// Transmit beampattern gain a^H(theta) * cov_total * a(theta).
double beampattern_gain(const CMatrix& cov_total, double angle_rad, const Scene& scene);

/// Binary desired beampattern: desired[m] = 1 iff some target angle lies within
/// beam_width/2 of sample m (strict inequality). Samples are uniform over
/// [-pi/2, pi/2] including both endpoints.
SampleGrid desired_beampattern(const Scene& scene, double beam_width_rad, int n_samples);

/// Beampattern gains of a covariance at every grid sample.
RVector beampattern_samples(const CMatrix& cov, const SampleGrid& grid, const Scene& scene);

/// Matching error sum_m |eta*desired_m - a_m^H (S + w0 w0^H) a_m|^2.
double matching_error(const BeamDesign& design, const SampleGrid& grid, const Scene& scene);

/// Least-squares scale: the eta minimizing the matching error for a fixed
/// total covariance. Throws std::invalid_argument if no sample is desired.
double optimal_scale(const CMatrix& cov_total, const SampleGrid& grid, const Scene& scene);

}  // namespace isacbeam::model
