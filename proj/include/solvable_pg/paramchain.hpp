#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "solvable_pg/env.hpp"
#include "solvable_pg/kernels.hpp"
#include "solvable_pg/policy.hpp"

namespace solvable_pg {

/// Uniform bins over [theta_min, theta_max); bin b covers
/// [theta_min + b w, theta_min + (b + 1) w) with w = (theta_max - theta_min) / bins.
struct GridSpec {
  double theta_min = -20.0;
  double theta_max = 20.0;
  int bins = 1024;
  int subsamples = 8;

  void check() const;
  double width() const { return (theta_max - theta_min) / bins; }
  double span() const { return theta_max - theta_min; }
  double mid(int b) const { return theta_min + (b + 0.5) * width(); }
  /// Sub-sample k of bin b sits at the centre of the k-th of `subsamples` equal slices.
  double sample(int b, int k) const { return theta_min + (b + (k + 0.5) / subsamples) * width(); }
  /// Bin containing theta, clamped to the grid.
  int bin_of(double theta) const;
};

/// Boltzmann policies pi(+1 | theta) with fixed temperature and exploration floor.
struct PolicyFamily {
  double tau = 1.0;
  double epsilon = 0.0;

  BoltzmannPolicy1D at(double theta) const { return {theta, tau, epsilon}; }
};

/// Gradient outcomes at one parameter value, largest probability first,
/// cut once the remaining mass drops below the cutoff.
struct GradientSample {
  double theta = 0.0;
  std::vector<std::pair<double, double>> atoms;  // (gradient, probability)
  double truncated = 0.0;
};

/// Gradient samples for every (bin, sub-sample), row-major in bins.
struct GradientTable {
  GridSpec grid;
  double cutoff = 1e-12;
  std::vector<GradientSample> samples;

  const GradientSample& at(int bin, int k) const {
    return samples[static_cast<std::size_t>(bin) * grid.subsamples + k];
  }
  double max_abs_gradient() const;
};

GradientSample gradient_sample(const GamblerEnv& env, const BoltzmannPolicy1D& policy, double cutoff);
/// Evaluates every sub-sample in parallel.
GradientTable tabulate_gradients(const GamblerEnv& env, const PolicyFamily& family, const GridSpec& grid,
                                 double cutoff = 1e-12);

/// One policy-gradient step theta' = theta + alpha * grad, discretized.
struct TransitionKernel {
  GridSpec grid;
  Csr rows;
  std::vector<double> clamped;    // per row: mass pushed past a grid end and held at the boundary bin
  std::vector<double> truncated;  // per row: gradient mass below the cutoff, kept on the diagonal

  double self_prob(int b) const;
  double max_row_error() const;
};

struct KernelOptions {
  double alpha = 2e-4;
  /// Reject steps that jump more than a quarter of the grid span.
  bool check_coarse = true;
};

/// Rows are averages over sub-samples; each sub-sample stands for a slice of
/// width w / subsamples whose shifted image is spread over the bins it overlaps.
/// Throws GridTooCoarse (when enabled) and DomainError for alpha < 0.
TransitionKernel build_kernel(const GradientTable& table, const KernelOptions& options);
TransitionKernel build_kernel(const GamblerEnv& env, const PolicyFamily& family, const GridSpec& grid,
                              double alpha, double cutoff = 1e-12);

/// Kernel from explicit rows, for hand-built chains.
TransitionKernel kernel_from_rows(const GridSpec& grid, const std::vector<std::vector<std::pair<int, double>>>& rows);

/// Observer receives (iteration, distribution); iteration 0 is the initial law.
using EvolveObserver = std::function<void(int, std::span<const double>)>;
void evolve(const Csr& kernel, std::span<const double> init, int steps, const EvolveObserver& observe);
/// Full sequence of distributions, iterations 0..steps.
std::vector<std::vector<double>> evolve(const TransitionKernel& kernel, std::span<const double> init, int steps);

std::vector<double> point_mass(const GridSpec& grid, double theta);

struct AbsorptionOptions {
  double absorbing_threshold = 1e-9;  // self-transition >= 1 - threshold marks a bin absorbing
  double tolerance = 1e-12;
  int max_squarings = 64;
};

/// Per start bin, the probability of ending in each absorbing class: the
/// absorbing bins above theta = 0 (policy saturating at pi -> 1) or below.
struct AbsorptionResult {
  std::vector<int> absorbing_bins;
  std::vector<double> to_optimal;
  std::vector<double> to_pessimal;
  int squarings = 0;
  double residual = 0.0;
};

/// Absorbing bins are treated as exactly absorbing; the transient block is
/// squared until successive powers differ by < tolerance in max row L1.
/// Throws NoAbsorbingClass / NonConvergence.
AbsorptionResult absorption_probs(const TransitionKernel& kernel, const AbsorptionOptions& options = {});

/// Velocity grid with `bins` centres evenly spaced on [-v_max, v_max]
/// (odd bins keep v = 0 as a centre; bins == 1 is the single centre 0).
struct VelocityGrid {
  double v_max = 0.25;
  int bins = 101;

  void check() const;
  double spacing() const { return bins > 1 ? 2.0 * v_max / (bins - 1) : 0.0; }
  double center(int j) const { return (j - (bins - 1) / 2) * spacing(); }
  int nearest(double v) const;
};

enum class MomentumForm {
  HeavyBall,  // v' = mu v + alpha g,        theta' = theta + v'
  Ema,        // v' = mu v + (1 - mu) g,     theta' = theta + alpha v'
};

struct MomentumKernel {
  GridSpec theta_grid;
  VelocityGrid vel_grid;
  Csr rows;
  std::vector<double> clamped;
  std::vector<double> truncated;

  int state(int theta_bin, int vel_bin) const { return theta_bin * vel_grid.bins + vel_bin; }
  int size() const { return theta_grid.bins * vel_grid.bins; }
};

struct MomentumOptions {
  double alpha = 2e-4;
  double mu = 0.2;
  MomentumForm form = MomentumForm::HeavyBall;
  bool check_coarse = true;
};

/// Product-space kernel over (theta bin, velocity centre). The new velocity is
/// split linearly between its two neighbouring centres.
MomentumKernel build_momentum_kernel(const GradientTable& table, const VelocityGrid& vel_grid,
                                     const MomentumOptions& options);

/// theta-marginal of a product-space distribution.
std::vector<double> theta_marginal(const MomentumKernel& kernel, std::span<const double> dist);
std::vector<double> momentum_point_mass(const MomentumKernel& kernel, double theta, double v = 0.0);

/// Convergence probability grid for one env: rows (alpha, pi_init, P(pi -> 1)).
struct SweepRow {
  double alpha = 0.0;
  double pi_init = 0.0;
  double converge_prob = 0.0;
};
std::vector<SweepRow> convergence_sweep(const GradientTable& table, const PolicyFamily& family,
                                        std::span<const double> alphas, std::span<const double> pi_inits,
                                        const AbsorptionOptions& options = {});

/// n points log-spaced from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace solvable_pg
