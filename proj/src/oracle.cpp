// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/oracle.hpp"

#include "isacbeam/designs.hpp"
#include "isacbeam/model.hpp"
#include "isacbeam/rng.hpp"

#include <array>
#include <cmath>

namespace isacbeam::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// flat-loop candidate evaluation state; N <= 3, no heap traffic per candidate
struct Workspace {
  int n = 0;
  int n_samples = 0;
  std::vector<std::array<Complex, 3>> steer;
  std::vector<double> desired;
  double desired_count = 0.0;
  std::array<Complex, 3> g{};
  double sigma0 = 0.0;
  struct Eve {
    std::array<Complex, 3> h{};
    double sigma = 0.0;
  };
  std::vector<Eve> eves;
  double r0 = 0.0;
  double slack = 0.0;
};

Workspace make_workspace(const Scene& scene, const SampleGrid& grid, double r0,
                         double slack) {
  Workspace ws;
  ws.n = scene.n_antennas;
  ws.n_samples = grid.size();
  ws.steer.resize(static_cast<size_t>(grid.size()));
  ws.desired.resize(static_cast<size_t>(grid.size()));
  for (int m = 0; m < grid.size(); ++m) {
    const CVector a = model::steering_vector(grid.angles_rad(m), scene.n_antennas,
                                             scene.antenna_spacing_ratio);
    for (int i = 0; i < ws.n; ++i) ws.steer[static_cast<size_t>(m)][static_cast<size_t>(i)] = a(i);
    ws.desired[static_cast<size_t>(m)] = grid.desired(m);
    ws.desired_count += grid.desired(m);
  }
  for (int i = 0; i < ws.n; ++i) ws.g[static_cast<size_t>(i)] = scene.cu_channel(i);
  ws.sigma0 = scene.cu_noise_power_w;
  for (int k : scene.eavesdroppers()) {
    Workspace::Eve e;
    const CVector h = scene.target_channel(k);
    for (int i = 0; i < ws.n; ++i) e.h[static_cast<size_t>(i)] = h(i);
    e.sigma = scene.targets[static_cast<size_t>(k)].noise_power_w;
    ws.eves.push_back(e);
  }
  ws.r0 = r0;
  ws.slack = slack;
  return ws;
}

double quad3(const std::array<Complex, 3>& a, const Complex s[3][3], int n) {
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) acc += std::conj(a[static_cast<size_t>(i)]) * s[i][j] * a[static_cast<size_t>(j)];
  }
  return acc.real();
}

Complex dot3(const std::array<Complex, 3>& a, const Complex w[3], int n) {
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::conj(a[static_cast<size_t>(i)]) * w[i];
  return acc;
}

// matching error with the per-candidate optimal scale; feasibility against r0
void evaluate_candidate(const Workspace& ws, const Complex w[3], const Complex s[3][3],
                        double& error, bool& feasible) {
  const double cu_sig = std::norm(dot3(ws.g, w, ws.n));
  const double cu_int = quad3(ws.g, s, ws.n);
  const double gamma0 = cu_sig / (cu_int + ws.sigma0);
  double rate = kInf;
  for (const auto& e : ws.eves) {
    const double sig = std::norm(dot3(e.h, w, ws.n));
    const double gk = sig / (quad3(e.h, s, ws.n) + e.sigma);
    rate = std::min(rate, std::log2((1.0 + gamma0) / (1.0 + gk)));
  }
  rate = std::max(rate, 0.0);
  feasible = rate >= ws.r0 - ws.slack;
  if (!feasible) {
    error = kInf;
    return;
  }
  double desired_gain = 0.0;
  double err0 = 0.0;  // sum over undesired samples of gain^2
  std::array<double, 256> gains_buf{};
  std::vector<double> gains_dyn;
  double* gains = gains_buf.data();
  if (ws.n_samples > 256) {
    gains_dyn.resize(static_cast<size_t>(ws.n_samples));
    gains = gains_dyn.data();
  }
  for (int m = 0; m < ws.n_samples; ++m) {
    const auto& a = ws.steer[static_cast<size_t>(m)];
    const double gain = quad3(a, s, ws.n) + std::norm(dot3(a, w, ws.n));
    gains[m] = gain;
    if (ws.desired[static_cast<size_t>(m)] > 0.5) desired_gain += gain;
    else err0 += gain * gain;
  }
  const double eta = desired_gain / ws.desired_count;
  double err1 = 0.0;
  for (int m = 0; m < ws.n_samples; ++m) {
    if (ws.desired[static_cast<size_t>(m)] > 0.5) {
      const double r = eta - gains[m];
      err1 += r * r;
    }
  }
  error = err0 + err1;
}

// candidate parameter space: mixed-radix odometer over direction, covariance
// basis and eigenvalue splits, with the power split from cfg.power_levels
struct ParamSpace {
  std::vector<int> radix;
  std::int64_t total = 1;

  void add(int r) {
    radix.push_back(r);
    total *= r;
  }
  void decode(std::int64_t idx, int* out) const {
    for (size_t d = 0; d < radix.size(); ++d) {
      out[d] = static_cast<int>(idx % radix[d]);
      idx /= radix[d];
    }
  }
};

struct CandidateBuilder {
  const Scene* scene = nullptr;
  BruteForceConfig cfg;
  std::vector<double> powers;
  ParamSpace space;
  int n = 0;

  // grid value helpers
  static double grid01(int i, int pts) { return pts == 1 ? 0.0 : double(i) / (pts - 1); }

  void build(std::int64_t idx, Complex w[3], Complex s[3][3]) const {
    std::array<int, 8> t{};
    space.decode(idx, t.data());
    const int pts = cfg.points_per_dim;
    int d = 0;
    const double q_info = powers[static_cast<size_t>(t[static_cast<size_t>(space.radix.size()) - 1])];
    const double tau = scene->power_budget_w - q_info;

    if (n == 2 && !cfg.restrict_real) {
      const double wa = grid01(t[static_cast<size_t>(d++)], pts) * kPi / 2.0;
      const double wb = grid01(t[static_cast<size_t>(d++)], pts) * 2.0 * kPi;
      w[0] = std::sqrt(q_info) * std::cos(wa);
      w[1] = std::sqrt(q_info) * std::sin(wa) * std::polar(1.0, wb);
      const double sa = grid01(t[static_cast<size_t>(d++)], pts) * kPi / 2.0;
      const double sb = grid01(t[static_cast<size_t>(d++)], pts) * 2.0 * kPi;
      const double mu = grid01(t[static_cast<size_t>(d++)], pts);
      const Complex u0 = std::cos(sa);
      const Complex u1 = std::sin(sa) * std::polar(1.0, sb);
      // S = tau (mu u u^H + (1-mu) v v^H), v orthogonal to u
      const Complex v0 = -std::conj(u1);
      const Complex v1 = std::conj(u0);
      s[0][0] = tau * (mu * std::norm(u0) + (1 - mu) * std::norm(v0));
      s[1][1] = tau * (mu * std::norm(u1) + (1 - mu) * std::norm(v1));
      s[0][1] = tau * (mu * u0 * std::conj(u1) + (1 - mu) * v0 * std::conj(v1));
      s[1][0] = std::conj(s[0][1]);
    } else if (n == 2) {
      const double wa = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      w[0] = std::sqrt(q_info) * std::cos(wa);
      w[1] = std::sqrt(q_info) * std::sin(wa);
      const double sa = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      const double mu = grid01(t[static_cast<size_t>(d++)], pts);
      const double c = std::cos(sa), sn = std::sin(sa);
      const double l0 = tau * mu, l1 = tau * (1 - mu);
      s[0][0] = l0 * c * c + l1 * sn * sn;
      s[1][1] = l0 * sn * sn + l1 * c * c;
      s[0][1] = (l0 - l1) * c * sn;
      s[1][0] = s[0][1];
    } else {  // n == 3, real
      const double wa = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      const double wb = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      w[0] = std::sqrt(q_info) * std::cos(wa);
      w[1] = std::sqrt(q_info) * std::sin(wa) * std::cos(wb);
      w[2] = std::sqrt(q_info) * std::sin(wa) * std::sin(wb);
      const double al = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      const double be = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      const double ga = grid01(t[static_cast<size_t>(d++)], pts) * kPi;
      const double mu1 = grid01(t[static_cast<size_t>(d++)], pts);
      const double mu2 = grid01(t[static_cast<size_t>(d++)], pts) * (1.0 - mu1);
      Eigen::Matrix3d rot =
          (Eigen::AngleAxisd(al, Eigen::Vector3d::UnitZ()) *
           Eigen::AngleAxisd(be, Eigen::Vector3d::UnitY()) *
           Eigen::AngleAxisd(ga, Eigen::Vector3d::UnitZ()))
              .toRotationMatrix();
      Eigen::Vector3d lam(tau * mu1, tau * mu2, tau * (1.0 - mu1 - mu2));
      Eigen::Matrix3d sm = rot * lam.asDiagonal() * rot.transpose();
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s[i][j] = sm(i, j);
      }
    }
  }
};

}  // namespace

BruteForceResult brute_force_p1(const Scene& scene, const SampleGrid& grid, double r0,
                                const BruteForceConfig& cfg, ExecPolicy policy) {
  scene.validate();
  const int n = scene.n_antennas;
  if (n > 3) throw std::invalid_argument("brute_force_p1: supports n_antennas <= 3 only");
  if (n == 3 && !cfg.restrict_real)
    throw std::invalid_argument("brute_force_p1: n_antennas == 3 requires restrict_real");
  if (cfg.points_per_dim < 2)
    throw std::invalid_argument("brute_force_p1: need at least 2 points per dimension");

  CandidateBuilder cb;
  cb.scene = &scene;
  cb.cfg = cfg;
  cb.n = n;
  cb.powers = cfg.power_levels;
  if (cb.powers.empty()) {
    for (int i = 0; i < 9; ++i) cb.powers.push_back(scene.power_budget_w * i / 8.0);
  }
  for (double p : cb.powers) {
    if (p < 0.0 || p > scene.power_budget_w * (1 + 1e-12))
      throw std::invalid_argument("brute_force_p1: power level outside the budget");
  }

  const int pts = cfg.points_per_dim;
  int n_dims = 0;
  if (n == 2 && !cfg.restrict_real) n_dims = 5;
  else if (n == 2) n_dims = 3;
  else n_dims = 7;
  for (int d = 0; d < n_dims; ++d) cb.space.add(pts);
  cb.space.add(static_cast<int>(cb.powers.size()));
  if (cb.space.total > cfg.max_candidates)
    throw std::invalid_argument("brute_force_p1: candidate budget exceeded");

  const Workspace ws = make_workspace(scene, grid, r0, cfg.rate_slack);

  struct Best {
    double error = kInf;
    std::int64_t idx = -1;
  };
  const std::int64_t total = cb.space.total;
  const int n_chunks = std::max(1, std::min<int>(max_threads() * 8,
                                                 static_cast<int>(std::min<std::int64_t>(total, 1024))));
  const std::int64_t chunk = (total + n_chunks - 1) / n_chunks;
  std::vector<Best> bests(static_cast<size_t>(n_chunks));
  parallel_for(n_chunks, policy, [&](std::int64_t c) {
    const std::int64_t lo = c * chunk;
    const std::int64_t hi = std::min(total, lo + chunk);
    Complex w[3] = {};
    Complex s[3][3] = {};
    Best local;
    for (std::int64_t i = lo; i < hi; ++i) {
      cb.build(i, w, s);
      double err = kInf;
      bool ok = false;
      evaluate_candidate(ws, w, s, err, ok);
      if (ok && err < local.error) {
        local.error = err;
        local.idx = i;
      }
    }
    bests[static_cast<size_t>(c)] = local;
  });

  Best best;
  for (const Best& b : bests) {
    if (b.idx >= 0 && (b.error < best.error || (b.error == best.error && b.idx < best.idx)))
      best = b;
  }

  BruteForceResult res;
  res.n_candidates = total;
  res.rate_slack = cfg.rate_slack;
  if (best.idx < 0) return res;  // infeasible at this r0 and resolution
  res.feasible = true;
  res.error = best.error;
  Complex w[3] = {};
  Complex s[3][3] = {};
  cb.build(best.idx, w, s);
  res.design.info_beam = CVector(n);
  res.design.sensing_cov = CMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    res.design.info_beam(i) = w[i];
    for (int j = 0; j < n; ++j) res.design.sensing_cov(i, j) = s[i][j];
  }
  res.design.scale = model::optimal_scale(res.design.total_covariance(), grid, scene);
  return res;
}

namespace {

CMatrix random_psd(Rng& rng, int n, int rank) {
  CMatrix x(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) x(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  CMatrix p = x * x.adjoint();
  return p / p.trace().real();
}

CVector random_cvec(Rng& rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  return v;
}

double min_eig(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

FuzzReport fuzz_proposition1(int n_antennas, int n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("fuzz_proposition1: need at least one trial");
  FuzzReport rep;
  rep.n_antennas = n_antennas;
  rep.trials = n_trials;
  const int n = n_antennas;

  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial));
    const bool rank_one = trial % 5 == 1;
    const bool degenerate = !rank_one && trial % 7 == 3 && n >= 2;
    CMatrix w_tilde = random_psd(rng, n, rank_one ? 1 : (degenerate ? n - 1 : n));
    const CMatrix s_tilde = random_psd(rng, n, n);
    CVector g = random_cvec(rng, n);
    if (degenerate) {
      // point g into the nullspace of the rank-deficient W~
      Eigen::SelfAdjointEigenSolver<CMatrix> es(w_tilde);
      g = es.eigenvectors().col(0);
    }

    BeamDesign d;
    try {
      d = designs::rank_one_extract(w_tilde, s_tilde, 1.0, g);
    } catch (const DegenerateExtraction&) {
      ++rep.degenerate_hits;
      continue;
    } catch (const std::exception& e) {
      rep.violations.push_back({trial, std::string("extraction threw: ") + e.what(), 0.0});
      continue;
    }

    const CMatrix w_star = d.info_beam * d.info_beam.adjoint();
    const double tr_sum = (w_tilde + s_tilde).trace().real();

    const double sum_dev =
        ((d.sensing_cov + w_star) - (w_tilde + s_tilde)).cwiseAbs().maxCoeff();
    const double w_eig = min_eig(w_tilde - w_star) / std::max(w_tilde.trace().real(), 1e-30);
    const double s_eig = min_eig(d.sensing_cov - s_tilde) / std::max(tr_sum, 1e-30);
    const double cu_before = std::real(Complex(g.adjoint() * w_tilde * g));
    const double cu_after = std::real(Complex(g.adjoint() * w_star * g));
    const double cu_dev = std::abs(cu_after - cu_before) / std::max(cu_before, 1e-300);
    double eve_excess = 0.0;
    for (int draw = 0; draw < 3; ++draw) {
      const CVector h = random_cvec(rng, n);
      const double before = std::real(Complex(h.adjoint() * w_tilde * h));
      const double after = std::real(Complex(h.adjoint() * w_star * h));
      eve_excess = std::max(eve_excess, (after - before) / std::max(before, 1e-300));
    }

    rep.worst_sum_dev = std::max(rep.worst_sum_dev, sum_dev);
    rep.worst_w_min_eig = std::min(rep.worst_w_min_eig, w_eig);
    rep.worst_s_min_eig = std::min(rep.worst_s_min_eig, s_eig);
    rep.worst_cu_rel_dev = std::max(rep.worst_cu_rel_dev, cu_dev);
    rep.worst_eve_excess = std::max(rep.worst_eve_excess, eve_excess);

    if (sum_dev > 1e-10)
      rep.violations.push_back({trial, "covariance sum not preserved", sum_dev});
    if (w_eig < -1e-8)
      rep.violations.push_back({trial, "W~ - W* lost positive semidefiniteness", w_eig});
    if (s_eig < -1e-8)
      rep.violations.push_back({trial, "S* - S~ lost positive semidefiniteness", s_eig});
    if (cu_dev > 1e-9)
      rep.violations.push_back({trial, "CU quadratic form drifted", cu_dev});
    if (eve_excess > 1e-9)
      rep.violations.push_back({trial, "eavesdropper quadratic form increased", eve_excess});
    if (rank_one) {
      // extraction must reproduce a rank-one input up to phase
      const double diff = (w_star - w_tilde).cwiseAbs().maxCoeff();
      if (diff > 1e-8)
        rep.violations.push_back({trial, "rank-one input not reproduced", diff});
    }
  }
  return rep;
}

std::vector<std::string> analytic_case_ids() {
  return {"orthogonal_zf", "p6_orthogonal", "projector_null"};
}

namespace {

// single eavesdropper at broadside, CU channel orthogonal to it by construction
Scene orthogonal_scene() {
  Scene scene;
  scene.n_antennas = 4;
  scene.antenna_spacing_ratio = 0.5;
  scene.power_budget_w = 0.1;
  scene.cu_noise_power_w = 1e-9;
  Target eve;
  eve.angle_rad = 0.0;
  eve.distance_m = 1.0;
  eve.reference_pathloss = 1e-7;
  eve.is_eavesdropper = true;
  eve.noise_power_w = 1e-9;
  scene.targets.push_back(eve);
  const CVector h = model::los_channel(eve, scene.n_antennas, scene.antenna_spacing_ratio);
  CVector g(4);
  g << Complex(1, 0.5), Complex(-0.3, 1.0), Complex(0.8, -0.2), Complex(0.1, 0.7);
  g -= h * (h.adjoint() * g) / h.squaredNorm();
  scene.cu_channel = g * (std::sqrt(1e-7) * 2.0 / g.norm());
  return scene;
}

}  // namespace

namespace {

Target trusted_at(double deg) {
  Target t;
  t.angle_rad = deg_to_rad(deg);
  t.distance_m = 1.0;
  t.reference_pathloss = 1e-7;
  return t;
}

Target eve_at(double deg, double noise_w = 1e-9) {
  Target t = trusted_at(deg);
  t.is_eavesdropper = true;
  t.noise_power_w = noise_w;
  return t;
}

}  // namespace

int n_sandwich_fixtures() { return 5; }

SandwichFixture sandwich_fixture(int index) {
  // angle sets symmetric about 0 and eavesdroppers at 0 or +-90 degrees keep
  // every channel real, so a real search loses nothing
  const double amp = std::sqrt(1e-7);
  SandwichFixture f;
  f.scene.n_antennas = 2;
  f.scene.antenna_spacing_ratio = 0.5;
  f.scene.power_budget_w = 0.1;
  f.scene.cu_noise_power_w = 1e-9;
  CVector g(2);
  switch (index) {
    case 0:
      f.name = "eve_broadside";
      f.scene.targets = {eve_at(0.0), trusted_at(-40.0), trusted_at(40.0)};
      g << 1.2, 0.4;
      f.r0_fraction = 0.4;
      break;
    case 1:
      f.name = "eve_endfire";
      f.scene.targets = {eve_at(90.0), trusted_at(0.0)};
      g << 1.0, -0.6;
      f.r0_fraction = 0.5;
      break;
    case 2:
      f.name = "eve_broadside_wide";
      f.scene.targets = {eve_at(0.0, 4e-9), trusted_at(-30.0), trusted_at(30.0)};
      g << 0.5, 1.1;
      f.r0_fraction = 0.6;
      break;
    case 3:
      f.name = "cu_aligned";
      f.scene.targets = {eve_at(0.0), trusted_at(-60.0), trusted_at(60.0)};
      g << 0.9, 0.9;
      f.r0_fraction = 0.35;
      break;
    case 4:
      f.name = "eve_endfire_close";
      f.scene.targets = {eve_at(-90.0), trusted_at(-20.0), trusted_at(20.0)};
      g << 0.7, -1.0;
      f.r0_fraction = 0.3;
      break;
    default:
      throw std::invalid_argument("sandwich_fixture: index out of range");
  }
  f.scene.cu_channel = amp * g;
  f.grid = model::desired_beampattern(f.scene, deg_to_rad(10.0), 61);
  return f;
}

AnalyticCheck run_analytic_case(const std::string& id, const conic::SolverSettings& settings) {
  AnalyticCheck chk;
  chk.id = id;
  if (id == "orthogonal_zf") {
    chk.description = "max secrecy rate with CU channel orthogonal to the eavesdropper";
    const Scene scene = orthogonal_scene();
    chk.expected = std::log2(1.0 + scene.power_budget_w * scene.cu_channel.squaredNorm() /
                                       scene.cu_noise_power_w);
    chk.actual = designs::max_secrecy_rate(scene, {}, settings);
    chk.tolerance = 1e-3;
  } else if (id == "p6_orthogonal") {
    chk.description = "minimum AN-free power with orthogonal channels";
    const Scene scene = orthogonal_scene();
    const double r0 = 2.0;
    chk.expected = scene.cu_noise_power_w * (std::pow(2.0, r0) - 1.0) /
                   scene.cu_channel.squaredNorm();
    const conic::P6Solution sol = conic::solve_p6_sdr(scene, r0, scene.power_budget_w,
                                                      settings);
    chk.actual = sol.optimal() ? sol.power : std::numeric_limits<double>::quiet_NaN();
    chk.tolerance = 1e-6 * chk.expected + 1e-15;
  } else if (id == "projector_null") {
    chk.description = "CU-orthogonal projector leaves zero power on the CU";
    Rng rng(20240915u);
    const int n = 5;
    const CVector g = random_cvec(rng, n);
    const CMatrix s_bar = random_psd(rng, n, n);
    const CMatrix q2 = CMatrix::Identity(n, n) - g * g.adjoint() / g.squaredNorm();
    const CMatrix s = q2 * s_bar * q2.adjoint();
    chk.expected = 0.0;
    chk.actual = std::abs(std::real(Complex(g.adjoint() * s * g))) / g.squaredNorm();
    chk.tolerance = 1e-12;
  } else {
    throw std::invalid_argument("run_analytic_case: unknown case id '" + id + "'");
  }
  chk.pass = std::abs(chk.actual - chk.expected) <=
             (chk.id == "orthogonal_zf" ? chk.tolerance * std::max(1.0, std::abs(chk.expected))
                                        : chk.tolerance);
  return chk;
}

}  // namespace isacbeam::oracle
