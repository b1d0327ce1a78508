#include "qpcnoise/trajectories.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "qpcnoise/errors.hpp"
#include "qpcnoise/units.hpp"

namespace qpcnoise {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream k of a run: mt19937_64 seeded from splitmix64(seed + golden * (k + 1)).
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)));
}

class Unravelling {
 public:
  explicit Unravelling(const OperatorSet& ops) {
    std::copy(ops.counted.begin(), ops.counted.end(), jumps_.begin());
    std::copy(ops.uncounted.begin(), ops.uncounted.end(), jumps_.begin() + 3);
    gamma_.setZero();
    for (const auto& L : jumps_) gamma_ += L.adjoint() * L;
    K_ = cplx(0.0, -1.0 / units::hbar) * ops.H - 0.5 * gamma_;
    min_rate_ = Eigen::SelfAdjointEigenSolver<Mat3>(gamma_, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();

    Eigen::ComplexEigenSolver<Mat3> es(K_);
    if (es.info() == Eigen::Success) {
      V_ = es.eigenvectors();
      Eigen::PartialPivLU<Mat3> lu(V_);
      const Mat3 Vinv = lu.inverse();
      const double cond = V_.cwiseAbs().rowwise().sum().maxCoeff() * Vinv.cwiseAbs().rowwise().sum().maxCoeff();
      if (std::isfinite(cond) && cond < 1e8) {
        diagonal_ = true;
        Vinv_ = Vinv;
        d_ = es.eigenvalues();
      }
    }
  }

  // Post-jump state and its eigen-coordinates.
  void set_state(const Vec3& psi) {
    psi0_ = psi;
    if (diagonal_) c_ = Vinv_ * psi;
  }

  Vec3 at(double tau) const {
    if (diagonal_) {
      Vec3 a;
      for (int k = 0; k < 3; ++k) a(k) = c_(k) * std::exp(d_(k) * tau);
      return V_ * a;
    }
    return expm(Mat3(K_ * tau)) * psi0_;
  }

  double decay_rate(const Vec3& psi) const { return (psi.adjoint() * gamma_ * psi)(0).real(); }

  // Time after the last jump at which the no-jump norm^2 reaches r, or
  // nullopt if it stays above r up to `horizon`. Newton on log(norm^2),
  // safeguarded by bisection; the function is monotone.
  std::optional<double> jump_time(double r, double horizon, double tol) const {
    const double log_r = std::log(r);
    // norm^2(tau) <= exp(-min_rate tau): past that bound a jump is certain.
    if (!(min_rate_ * horizon > -log_r) && at(horizon).squaredNorm() > r) return std::nullopt;
    double lo = 0.0;
    double hi = horizon;
    const double rate0 = decay_rate(psi0_);
    double tau = rate0 > 0.0 ? std::min(-log_r / rate0, hi) : 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
      const Vec3 psi = at(tau);
      const double n2 = psi.squaredNorm();
      const double f = std::log(n2) - log_r;
      if (std::abs(f) <= tol) return tau;
      if (f > 0.0) lo = tau;
      else hi = tau;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return 0.5 * (lo + hi);
      const double df = -decay_rate(psi) / n2;
      double next = df < 0.0 ? tau - f / df : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      tau = next;
    }
    return 0.5 * (lo + hi);
  }

  // Picks a channel with probability ||L_k psi||^2 / sum, applies it.
  // Returns the channel index and overwrites psi with the normalized result.
  template <class Rng>
  int jump(Vec3& psi, Rng& rng) const {
    std::array<double, 7> w{};
    double total = 0.0;
    for (int k = 0; k < 7; ++k) {
      w[k] = (jumps_[k] * psi).squaredNorm();
      total += w[k];
    }
    if (!(total > 0.0)) throw TrajectoryError("zero total jump rate at a jump time with decayed norm");
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    int k = 0;
    for (; k < 6; ++k) {
      if (u < w[k]) break;
      u -= w[k];
    }
    while (w[k] == 0.0) --k;  // u landed on the boundary of an empty tail
    const Vec3 out = jumps_[k] * psi;
    psi = out / std::sqrt(w[k]);
    return k;
  }

  static bool counted(int channel) { return channel < 3; }

  double max_counted_rate() const {
    Mat3 g = Mat3::Zero();
    for (int k = 0; k < 3; ++k) g += jumps_[k].adjoint() * jumps_[k];
    return Eigen::SelfAdjointEigenSolver<Mat3>(g, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  }

 private:
  std::array<Mat3, 7> jumps_;
  Mat3 gamma_;
  Mat3 K_;
  double min_rate_ = 0.0;
  bool diagonal_ = false;
  Mat3 V_;
  Mat3 Vinv_;
  Vec3 d_;
  Vec3 psi0_;
  Vec3 c_;
};

// Runs from psi at time 0 to t_end, calling on_jump(time, channel) for each jump.
template <class Rng, class OnJump>
Vec3 run_one(const Unravelling& un, Vec3 psi, double t_end, double tol, Rng& rng, OnJump&& on_jump) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double t = 0.0;
  Unravelling local = un;
  local.set_state(psi);
  while (true) {
    double r = uni(rng);
    while (r == 0.0) r = uni(rng);
    const auto tau = local.jump_time(r, t_end - t, tol);
    if (!tau) {
      psi = local.at(t_end - t);
      return psi.normalized();
    }
    t += *tau;
    psi = local.at(*tau);
    const int ch = local.jump(psi, rng);
    on_jump(t, ch);
    local.set_state(psi);
  }
}

template <class Fn>
void parallel_for(int n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = static_cast<int>(w); i < n; i += static_cast<int>(threads)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void validate_config(const TrajectoryConfig& cfg) {
  if (cfg.n_trajectories < 1) throw TrajectoryConfigError("n_trajectories must be >= 1");
  if (!(cfg.t_window > 0.0)) throw TrajectoryConfigError("t_window must be > 0");
  if (cfg.n_windows < 1) throw TrajectoryConfigError("n_windows must be >= 1");
  if (!(cfg.norm_tolerance > 0.0 && cfg.norm_tolerance < 1.0))
    throw TrajectoryConfigError("norm_tolerance must be in (0, 1)");
  if (cfg.burn_in && !(*cfg.burn_in >= 0.0)) throw TrajectoryConfigError("burn_in must be >= 0");
}

struct Moments {
  double mean;
  double variance;
};

Moments moments(const std::uint32_t* first, std::size_t n) {
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += first[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += (first[i] - mean) * (first[i] - mean);
  return {mean, n > 1 ? ss / static_cast<double>(n - 1) : 0.0};
}

double std_error_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

CountRecord run_trajectories(const ModelParams& p, const TrajectoryConfig& cfg) {
  validate_config(cfg);
  const OperatorSet ops = build_operator_set(p);
  const Unravelling un(ops);

  const double expected_max = un.max_counted_rate() * cfg.t_window;
  if (expected_max > 1e9) {
    throw TrajectoryConfigError("expected counts per window (" + std::to_string(expected_max) +
                                ") risk overflowing 32-bit counters; use a smaller t_window");
  }
  const double burn_in = cfg.burn_in.value_or(10.0 / spectral_gap(build_generator(ops)));
  const double t_end = burn_in + cfg.n_windows * cfg.t_window;

  CountRecord rec;
  rec.n_trajectories = cfg.n_trajectories;
  rec.n_windows = cfg.n_windows;
  rec.t_window = cfg.t_window;
  rec.burn_in = burn_in;
  rec.counts.assign(static_cast<std::size_t>(cfg.n_trajectories) * cfg.n_windows, 0);

  parallel_for(cfg.n_trajectories, cfg.threads, [&](int traj) {
    auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(traj));
    std::uint32_t* row = rec.counts.data() + static_cast<std::size_t>(traj) * cfg.n_windows;
    Vec3 psi = Vec3::Zero();
    psi(s0) = 1.0;
    run_one(un, psi, t_end, cfg.norm_tolerance, rng, [&](double t, int ch) {
      if (!Unravelling::counted(ch) || t < burn_in) return;
      const auto w = static_cast<long>((t - burn_in) / cfg.t_window);
      if (w >= cfg.n_windows) return;
      if (row[w] == std::numeric_limits<std::uint32_t>::max())
        throw TrajectoryConfigError("window count overflow; use a smaller t_window");
      ++row[w];
    });
  });

  const auto all = moments(rec.counts.data(), rec.counts.size());
  rec.mean = all.mean;
  rec.variance = all.variance;
  rec.fano_estimate = all.mean > 0.0 ? all.variance / all.mean : 0.0;

  // Batch means: one batch per trajectory, or contiguous window blocks when
  // there is only one trajectory.
  std::vector<double> batch_fano;
  std::vector<double> batch_mean;
  const std::size_t n_batches = cfg.n_trajectories >= 2 ? cfg.n_trajectories
                                                        : std::min<std::size_t>(10, cfg.n_windows);
  const std::size_t per = rec.counts.size() / n_batches;
  for (std::size_t b = 0; b < n_batches && per >= 2; ++b) {
    const auto m = moments(rec.counts.data() + b * per, per);
    batch_mean.push_back(m.mean);
    batch_fano.push_back(m.mean > 0.0 ? m.variance / m.mean : 0.0);
  }
  rec.std_error = std_error_of(batch_fano);
  rec.mean_std_error = std_error_of(batch_mean);
  return rec;
}

EnsembleAverage ensemble_average_state(const ModelParams& p, const TrajectoryConfig& cfg,
                                       const DensityMatrix& rho0, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("ensemble_average_state: t must be >= 0");
  if (cfg.n_trajectories < 1) throw TrajectoryConfigError("n_trajectories must be >= 1");
  const OperatorSet ops = build_operator_set(p);
  const Unravelling un(ops);

  const Mat3 h = 0.5 * (rho0.matrix() + rho0.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Mat3> es(h);
  const int n = cfg.n_trajectories;

  // samples[k * n + i]: final projector of trajectory i of component k.
  std::vector<Mat3> samples(static_cast<std::size_t>(3) * n, Mat3::Zero());
  std::vector<double> weights(3);
  for (int k = 0; k < 3; ++k) weights[k] = std::max(0.0, es.eigenvalues()(k));

  parallel_for(3 * n, cfg.threads, [&](int idx) {
    const int k = idx / n;
    if (weights[k] <= 1e-15) return;
    const Vec3 start = es.eigenvectors().col(k);
    if (t == 0.0) {
      samples[idx] = start * start.adjoint();
      return;
    }
    auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(idx));
    const Vec3 psi = run_one(un, start, t, cfg.norm_tolerance, rng, [](double, int) {});
    samples[idx] = psi * psi.adjoint();
  });

  EnsembleAverage out{DensityMatrix(Mat3::Zero()), Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero()};
  Mat3 mean = Mat3::Zero();
  Eigen::Matrix3d var_re = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d var_im = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 3; ++k) {
    if (weights[k] <= 1e-15) continue;
    Mat3 mk = Mat3::Zero();
    for (int i = 0; i < n; ++i) mk += samples[k * n + i];
    mk /= static_cast<double>(n);
    if (n > 1) {
      Eigen::Matrix3d sre = Eigen::Matrix3d::Zero();
      Eigen::Matrix3d sim = Eigen::Matrix3d::Zero();
      for (int i = 0; i < n; ++i) {
        const Mat3 d = samples[k * n + i] - mk;
        sre += d.real().cwiseAbs2();
        sim += d.imag().cwiseAbs2();
      }
      const double denom = static_cast<double>(n - 1) * n;
      var_re += weights[k] * weights[k] * sre / denom;
      var_im += weights[k] * weights[k] * sim / denom;
    }
    mean += weights[k] * mk;
  }
  out.rho = DensityMatrix(mean);
  out.std_error_re = var_re.cwiseSqrt();
  out.std_error_im = var_im.cwiseSqrt();
  return out;
}

void write_counts_csv(std::ostream& os, const CountRecord& rec) {
  os << "trajectory_index,window_index,count\n";
  for (int t = 0; t < rec.n_trajectories; ++t)
    for (int w = 0; w < rec.n_windows; ++w)
      os << t << ',' << w << ',' << rec.counts[static_cast<std::size_t>(t) * rec.n_windows + w] << '\n';
}

}  // namespace qpcnoise
