#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qpcnoise/lindblad.hpp"

namespace qpcnoise {

struct TrajectoryConfig {
  int n_trajectories = 16;
  double t_window = 1000.0;  // ns
  int n_windows = 100;       // per trajectory, after burn-in
  std::uint64_t seed = 1;
  double norm_tolerance = 1e-10;
  std::optional<double> burn_in;  // ns; default 10 / spectral gap
  unsigned threads = 0;           // 0: hardware concurrency
};

/// QPC jump counts per window. `counts` is trajectory-major:
/// counts[t * n_windows + w].
struct CountRecord {
  std::vector<std::uint32_t> counts;
  int n_trajectories = 0;
  int n_windows = 0;
  double t_window = 0.0;
  double burn_in = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double fano_estimate = 0.0;
  double std_error = 0.0;       // of fano_estimate, batch means
  double mean_std_error = 0.0;  // of mean, batch means
};

/// Monte-Carlo wave-function unravelling over all seven channels; only the
/// QPC channels (C1, C2, C3) are counted. Jump times come from inverting the
/// no-jump norm decay; each trajectory starts in s0 and discards `burn_in`
/// before its windows open. Output is bit-reproducible for a given config
/// regardless of thread count.
CountRecord run_trajectories(const ModelParams& p, const TrajectoryConfig& cfg);

struct EnsembleAverage {
  DensityMatrix rho;
  Eigen::Matrix3d std_error_re;
  Eigen::Matrix3d std_error_im;
};

/// Average of |psi(t)><psi(t)| over cfg.n_trajectories trajectories per
/// eigencomponent of rho0, weighted by the eigenvalues. Window settings in
/// `cfg` are ignored.
EnsembleAverage ensemble_average_state(const ModelParams& p, const TrajectoryConfig& cfg,
                                       const DensityMatrix& rho0, double t_ns);

/// `trajectory_index,window_index,count` lines, with header.
void write_counts_csv(std::ostream& os, const CountRecord& rec);

}  // namespace qpcnoise
