#include "solvable_pg/paramchain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "solvable_pg/errors.hpp"

namespace solvable_pg {

namespace {

// Dense per-row accumulator that remembers which entries it touched.
struct RowScratch {
  std::vector<double> acc;
  std::vector<int> touched;

  explicit RowScratch(int n) : acc(static_cast<std::size_t>(n), 0.0) {}

  void add(int i, double m) {
    if (acc[i] == 0.0) touched.push_back(i);
    acc[i] += m;
    if (acc[i] == 0.0) acc[i] = 1e-300;  // keep it marked as touched
  }

  std::vector<std::pair<int, double>> drain() {
    std::sort(touched.begin(), touched.end());
    std::vector<std::pair<int, double>> out;
    out.reserve(touched.size());
    for (int i : touched) {
      if (acc[i] > 1e-300) out.emplace_back(i, acc[i]);
      acc[i] = 0.0;
    }
    touched.clear();
    return out;
  }
};

// Spreads `mass` uniformly over [ua, uc) in bin units; anything outside
// [0, bins) lands on the nearest end bin. Returns the clamped portion.
template <class Sink>
double spread(double ua, double uc, double mass, int bins, Sink&& sink) {
  const double len = uc - ua;
  if (!(len > 0.0)) {
    const int b = static_cast<int>(std::clamp(std::floor(ua), 0.0, static_cast<double>(bins - 1)));
    sink(b, mass);
    return (ua < 0.0 || ua >= bins) ? mass : 0.0;
  }
  double clamped = 0.0;
  double placed = 0.0;
  if (ua < 0.0) {
    const double m = mass * (std::min(uc, 0.0) - ua) / len;
    sink(0, m);
    clamped += m;
    placed += m;
  }
  if (uc > bins) {
    const double m = mass * (uc - std::max(ua, static_cast<double>(bins))) / len;
    sink(bins - 1, m);
    clamped += m;
    placed += m;
  }
  const double lo = std::max(ua, 0.0);
  const double hi = std::min(uc, static_cast<double>(bins));
  if (hi > lo) {
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(bins - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int i = first; i < last; ++i) {
      const double m = mass * (std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i))) / len;
      sink(i, m);
      placed += m;
    }
    sink(last, mass - placed);
  }
  return clamped;
}

Csr assemble(int n, std::vector<std::vector<std::pair<int, double>>>& rows) {
  Csr out;
  out.rows = n;
  out.cols = n;
  out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int r = 0; r < n; ++r) out.row_ptr[r + 1] = out.row_ptr[r] + static_cast<int>(rows[r].size());
  out.col.reserve(out.row_ptr[n]);
  out.val.reserve(out.row_ptr[n]);
  for (auto& row : rows) {
    for (auto [c, v] : row) {
      out.col.push_back(c);
      out.val.push_back(v);
    }
    row.clear();
    row.shrink_to_fit();
  }
  return out;
}

void check_step(const GradientTable& table, double step_scale, bool check_coarse) {
  if (!(step_scale >= 0.0) || !std::isfinite(step_scale)) throw DomainError("step size must be finite and >= 0");
  if (!check_coarse) return;
  const double jump = step_scale * table.max_abs_gradient();
  if (jump > 0.25 * table.grid.span()) {
    throw GridTooCoarse("largest step " + std::to_string(jump) + " exceeds a quarter of the grid span " +
                        std::to_string(table.grid.span()));
  }
}

}  // namespace

void GridSpec::check() const {
  if (!(theta_max > theta_min) || !std::isfinite(theta_min) || !std::isfinite(theta_max)) {
    throw DomainError("grid needs finite theta_min < theta_max");
  }
  if (bins < 2) throw DomainError("grid needs at least 2 bins");
  if (subsamples < 1) throw DomainError("grid needs at least 1 sub-sample per bin");
}

int GridSpec::bin_of(double theta) const {
  const double u = std::floor((theta - theta_min) / width());
  return static_cast<int>(std::clamp(u, 0.0, static_cast<double>(bins - 1)));
}

double GradientTable::max_abs_gradient() const {
  double m = 0.0;
  for (const auto& s : samples) {
    for (auto [g, p] : s.atoms) m = std::max(m, std::abs(g));
  }
  return m;
}

GradientSample gradient_sample(const GamblerEnv& env, const BoltzmannPolicy1D& policy, double cutoff) {
  policy.check();
  const double pr = policy.prob_plus(), pl = policy.prob_minus();
  const auto returns = until_tail_below<ReturnDistribution>(
      0.5 * cutoff, [&](int t) { return gambler_return_dist(env, pr, pl, t); });
  const auto grads = gradient_dist_1d(env, policy, returns);

  GradientSample out;
  out.theta = policy.theta;
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(grads.atoms.size());
  for (const auto& a : grads.atoms) atoms.emplace_back(a.grad[0], a.prob);
  std::stable_sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  // suffix[k] = tail + mass of atoms k.. ; summed from the small end
  std::vector<double> suffix(atoms.size() + 1);
  suffix.back() = grads.tail_mass;
  for (std::size_t k = atoms.size(); k-- > 0;) suffix[k] = suffix[k + 1] + atoms[k].second;
  std::size_t keep = 0;
  while (keep < atoms.size() && suffix[keep] >= cutoff) ++keep;
  atoms.resize(keep);
  out.atoms = std::move(atoms);
  out.truncated = suffix[keep];
  return out;
}

GradientTable tabulate_gradients(const GamblerEnv& env, const PolicyFamily& family, const GridSpec& grid,
                                 double cutoff) {
  validate(env);
  grid.check();
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw DomainError("cutoff must lie in (0, 1)");
  family.at(0.0).check();
  GradientTable table;
  table.grid = grid;
  table.cutoff = cutoff;
  const int n = grid.bins * grid.subsamples;
  table.samples.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    const int b = i / grid.subsamples, k = i % grid.subsamples;
    table.samples[i] = gradient_sample(env, family.at(grid.sample(b, k)), cutoff);
  }
  return table;
}

double TransitionKernel::self_prob(int b) const {
  for (int k = rows.row_ptr[b]; k < rows.row_ptr[b + 1]; ++k) {
    if (rows.col[k] == b) return rows.val[k];
  }
  return 0.0;
}

double TransitionKernel::max_row_error() const {
  double e = 0.0;
  for (int r = 0; r < rows.rows; ++r) e = std::max(e, std::abs(rows.row_sum(r) - 1.0));
  return e;
}

TransitionKernel build_kernel(const GradientTable& table, const KernelOptions& options) {
  const GridSpec& grid = table.grid;
  check_step(table, options.alpha, options.check_coarse);
  const int n = grid.bins, s = grid.subsamples;
  const double w = grid.width();
  const double weight = 1.0 / s;

  TransitionKernel out;
  out.grid = grid;
  out.clamped.assign(n, 0.0);
  out.truncated.assign(n, 0.0);
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n));

#pragma omp parallel
  {
    RowScratch scratch(n);
    auto sink = [&](int i, double m) { scratch.add(i, m); };
#pragma omp for schedule(dynamic, 8)
    for (int b = 0; b < n; ++b) {
      double clamped = 0.0, truncated = 0.0;
      for (int k = 0; k < s; ++k) {
        const auto& sample = table.at(b, k);
        const double ua = b + static_cast<double>(k) / s;
        const double uc = b + static_cast<double>(k + 1) / s;
        for (auto [g, p] : sample.atoms) {
          const double du = options.alpha * g / w;
          clamped += spread(ua + du, uc + du, weight * p, n, sink);
        }
        truncated += weight * sample.truncated;
      }
      scratch.add(b, truncated);
      rows[b] = scratch.drain();
      out.clamped[b] = clamped;
      out.truncated[b] = truncated;
    }
  }
  out.rows = assemble(n, rows);
  return out;
}

TransitionKernel build_kernel(const GamblerEnv& env, const PolicyFamily& family, const GridSpec& grid, double alpha,
                              double cutoff) {
  return build_kernel(tabulate_gradients(env, family, grid, cutoff), KernelOptions{alpha, true});
}

TransitionKernel kernel_from_rows(const GridSpec& grid, const std::vector<std::vector<std::pair<int, double>>>& rows) {
  grid.check();
  if (static_cast<int>(rows.size()) != grid.bins) throw DimensionMismatch("one row per bin required");
  auto copy = rows;
  for (auto& r : copy) {
    for (auto [c, v] : r) {
      if (c < 0 || c >= grid.bins) throw DimensionMismatch("column index outside the grid");
      if (!(v >= 0.0)) throw DomainError("transition probabilities must be >= 0");
    }
    std::sort(r.begin(), r.end());
  }
  TransitionKernel out;
  out.grid = grid;
  out.clamped.assign(grid.bins, 0.0);
  out.truncated.assign(grid.bins, 0.0);
  out.rows = assemble(grid.bins, copy);
  if (out.max_row_error() > 1e-9) throw DomainError("kernel rows must sum to 1");
  return out;
}

void evolve(const Csr& kernel, std::span<const double> init, int steps, const EvolveObserver& observe) {
  if (static_cast<int>(init.size()) != kernel.rows) throw DimensionMismatch("initial law size differs from kernel");
  if (steps < 0) throw DomainError("steps must be >= 0");
  const Csr pt = kernel.transposed();
  std::vector<double> cur(init.begin(), init.end()), next(cur.size());
  observe(0, cur);
  for (int it = 1; it <= steps; ++it) {
    kernels::push_forward(pt, cur, next);
    cur.swap(next);
    observe(it, cur);
  }
}

std::vector<std::vector<double>> evolve(const TransitionKernel& kernel, std::span<const double> init, int steps) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(std::max(steps, 0)) + 1);
  evolve(kernel.rows, init, steps, [&](int, std::span<const double> d) { out.emplace_back(d.begin(), d.end()); });
  return out;
}

std::vector<double> point_mass(const GridSpec& grid, double theta) {
  grid.check();
  std::vector<double> d(static_cast<std::size_t>(grid.bins), 0.0);
  d[grid.bin_of(theta)] = 1.0;
  return d;
}

AbsorptionResult absorption_probs(const TransitionKernel& kernel, const AbsorptionOptions& options) {
  const int n = kernel.rows.rows;
  AbsorptionResult out;
  std::vector<int> index(n, -1);
  std::vector<int> transient;
  for (int b = 0; b < n; ++b) {
    if (kernel.self_prob(b) >= 1.0 - options.absorbing_threshold) {
      out.absorbing_bins.push_back(b);
    } else {
      index[b] = static_cast<int>(transient.size());
      transient.push_back(b);
    }
  }
  if (out.absorbing_bins.empty()) throw NoAbsorbingClass();
  auto optimal = [&](int b) { return kernel.grid.mid(b) > 0.0; };

  const int nt = static_cast<int>(transient.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(nt, nt);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nt, 2);
  for (int i = 0; i < nt; ++i) {
    const int b = transient[i];
    for (int k = kernel.rows.row_ptr[b]; k < kernel.rows.row_ptr[b + 1]; ++k) {
      const int c = kernel.rows.col[k];
      if (index[c] >= 0) {
        q(i, index[c]) += kernel.rows.val[k];
      } else {
        r(i, optimal(c) ? 0 : 1) += kernel.rows.val[k];
      }
    }
  }

  // [Q R; 0 I]^2 = [Q^2  QR + R; 0 I]
  double residual = nt > 0 ? 1.0 : 0.0;
  while (residual >= options.tolerance) {
    if (out.squarings >= options.max_squarings) throw NonConvergence(residual);
    Eigen::MatrixXd r_next = kernels::multiply(q, r);
    r_next += r;
    Eigen::MatrixXd q_next = kernels::multiply(q, q);
    // rounding in the row sums doubles with every squaring unless removed
    for (int i = 0; i < nt; ++i) {
      const double sum = q_next.row(i).sum() + r_next.row(i).sum();
      if (sum > 0.0) {
        q_next.row(i) /= sum;
        r_next.row(i) /= sum;
      }
    }
    // absorbed mass only grows, so the lumped R change is the exact L1 change
    residual = ((q_next - q).cwiseAbs().rowwise().sum() + (r_next - r).cwiseAbs().rowwise().sum()).maxCoeff();
    q.swap(q_next);
    r.swap(r_next);
    ++out.squarings;
  }
  out.residual = residual;

  out.to_optimal.assign(n, 0.0);
  out.to_pessimal.assign(n, 0.0);
  for (int b = 0; b < n; ++b) {
    if (index[b] < 0) {
      (optimal(b) ? out.to_optimal : out.to_pessimal)[b] = 1.0;
    } else {
      out.to_optimal[b] = r(index[b], 0);
      out.to_pessimal[b] = r(index[b], 1);
    }
  }
  return out;
}

void VelocityGrid::check() const {
  if (bins < 1 || bins % 2 == 0) throw DomainError("velocity grid needs an odd number of bins");
  if (bins > 1 && !(v_max > 0.0 && std::isfinite(v_max))) throw DomainError("velocity grid needs finite v_max > 0");
}

int VelocityGrid::nearest(double v) const {
  if (bins == 1) return 0;
  const double j = std::round((v + v_max) / spacing());
  return static_cast<int>(std::clamp(j, 0.0, static_cast<double>(bins - 1)));
}

MomentumKernel build_momentum_kernel(const GradientTable& table, const VelocityGrid& vel_grid,
                                     const MomentumOptions& options) {
  vel_grid.check();
  if (!(options.mu >= 0.0 && options.mu < 1.0)) throw DomainError("momentum mu must lie in [0, 1)");
  const bool heavy = options.form == MomentumForm::HeavyBall;
  check_step(table, heavy ? options.alpha : options.alpha * (1.0 - options.mu), options.check_coarse);

  const GridSpec& grid = table.grid;
  MomentumKernel out;
  out.theta_grid = grid;
  out.vel_grid = vel_grid;
  const int nv = vel_grid.bins, s = grid.subsamples, n = out.size();
  const double w = grid.width();
  const double weight = 1.0 / s;
  out.clamped.assign(n, 0.0);
  out.truncated.assign(n, 0.0);
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n));

#pragma omp parallel
  {
    RowScratch scratch(n);
#pragma omp for schedule(dynamic, 16)
    for (int row = 0; row < n; ++row) {
      const int b = row / nv, j = row % nv;
      const double v = vel_grid.center(j);
      double clamped = 0.0, truncated = 0.0;
      for (int k = 0; k < s; ++k) {
        const auto& sample = table.at(b, k);
        const double ua = b + static_cast<double>(k) / s;
        const double uc = b + static_cast<double>(k + 1) / s;
        for (auto [g, p] : sample.atoms) {
          const double v_new = heavy ? options.mu * v + options.alpha * g : options.mu * v + (1.0 - options.mu) * g;
          const double du = (heavy ? v_new : options.alpha * v_new) / w;
          // linear split of v_new between neighbouring centres
          int j0 = 0, j1 = 0;
          double f1 = 0.0;
          if (nv > 1) {
            const double x = (v_new + vel_grid.v_max) / vel_grid.spacing();
            if (x <= 0.0 || x >= nv - 1) {
              j0 = j1 = x <= 0.0 ? 0 : nv - 1;
              if (x < 0.0 || x > nv - 1) clamped += weight * p;
            } else {
              j0 = static_cast<int>(std::floor(x));
              j1 = std::min(j0 + 1, nv - 1);
              f1 = x - j0;
            }
          } else if (v_new != 0.0) {
            clamped += weight * p;
          }
          const double m = weight * p;
          clamped += spread(ua + du, uc + du, m, grid.bins, [&](int tb, double mass) {
            if (f1 > 0.0) {
              scratch.add(out.state(tb, j0), mass * (1.0 - f1));
              scratch.add(out.state(tb, j1), mass * f1);
            } else {
              scratch.add(out.state(tb, j0), mass);
            }
          });
        }
        truncated += weight * sample.truncated;
      }
      scratch.add(row, truncated);
      rows[row] = scratch.drain();
      out.clamped[row] = clamped;
      out.truncated[row] = truncated;
    }
  }
  out.rows = assemble(n, rows);
  return out;
}

std::vector<double> theta_marginal(const MomentumKernel& kernel, std::span<const double> dist) {
  if (static_cast<int>(dist.size()) != kernel.size()) throw DimensionMismatch("distribution size differs from kernel");
  std::vector<double> out(static_cast<std::size_t>(kernel.theta_grid.bins), 0.0);
  const int nv = kernel.vel_grid.bins;
  for (std::size_t i = 0; i < dist.size(); ++i) out[i / nv] += dist[i];
  return out;
}

std::vector<double> momentum_point_mass(const MomentumKernel& kernel, double theta, double v) {
  std::vector<double> d(static_cast<std::size_t>(kernel.size()), 0.0);
  d[kernel.state(kernel.theta_grid.bin_of(theta), kernel.vel_grid.nearest(v))] = 1.0;
  return d;
}

std::vector<SweepRow> convergence_sweep(const GradientTable& table, const PolicyFamily& family,
                                        std::span<const double> alphas, std::span<const double> pi_inits,
                                        const AbsorptionOptions& options) {
  std::vector<int> starts;
  for (double pi : pi_inits) starts.push_back(table.grid.bin_of(BoltzmannPolicy1D::theta_for(pi, family.tau, family.epsilon)));
  std::vector<SweepRow> out;
  out.reserve(alphas.size() * pi_inits.size());
  for (double alpha : alphas) {
    const auto kernel = build_kernel(table, KernelOptions{alpha, false});
    const auto absorbed = absorption_probs(kernel, options);
    for (std::size_t i = 0; i < pi_inits.size(); ++i) {
      out.push_back({alpha, pi_inits[i], absorbed.to_optimal[starts[i]]});
    }
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo) || n < 1) throw DomainError("log grid needs 0 < lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace solvable_pg
