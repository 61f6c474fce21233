// Copyright 2026 The KPG Lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kpg/theory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kpg/errors.h"
#include "kpg/finite_diff.h"

namespace kpg {
namespace {

constexpr double kDegeneratePair = 1e-12;
constexpr double kLocalPairScale = 0.05;
// Relative rounding slack for bounds that are attained with equality by
// linear games (e.g. B = 0 in the squared-distance bound).
constexpr double kRoundingSlack = 1e-12;

Vector uniform_point(const Box& box, std::mt19937_64& rng) {
  Vector x(box.dim());
  for (int j = 0; j < box.dim(); ++j) {
    std::uniform_real_distribution<double> u(box.lower[j], box.upper[j]);
    x[j] = u(rng);
  }
  return x;
}

Vector clip_to(const Box& box, Vector x) {
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

Vector local_point(const Box& box, const Vector& center, std::mt19937_64& rng) {
  Vector x = center;
  for (int j = 0; j < box.dim(); ++j) {
    std::normal_distribution<double> n(
        0.0, kLocalPairScale * (box.upper[j] - box.lower[j]));
    x[j] += n(rng);
  }
  return clip_to(box, std::move(x));
}

Matrix identity_like(const HessianBlocks& blocks) {
  return Matrix::Identity(blocks.A.rows(), blocks.A.cols());
}

void require_reference(const DifferentiableGame& game, const Vector& theta) {
  if (theta.size() != game.total_dim()) {
    throw InputError("reference point has length " +
                     std::to_string(theta.size()) + ", game expects " +
                     std::to_string(game.total_dim()));
  }
}

SuiteReport skipped(int theorem, std::string note) {
  SuiteReport report;
  report.theorem = theorem;
  report.status = SuiteStatus::kSkipped;
  report.note = std::move(note);
  return report;
}

void finish(SuiteReport& report) {
  if (report.status != SuiteStatus::kSkipped) {
    report.status =
        report.violations == 0 ? SuiteStatus::kPass : SuiteStatus::kFail;
  }
}

}  // namespace

GameConstants estimate_constants(const DifferentiableGame& game,
                                 std::optional<Box> region, int samples,
                                 std::uint64_t seed) {
  if (samples < 2) throw InputError("samples must be at least 2");
  const Box box = region ? *region : game.region();
  if (box.dim() != game.total_dim() || box.upper.size() != game.total_dim()) {
    throw InputError("region dimension does not match the game");
  }
  const Layout& layout = game.layout();
  const int n = layout.num_agents();

  std::mt19937_64 rng(seed);
  GameConstants out;
  out.lipschitz.assign(n, 0.0);
  out.samples = samples;
  out.seed = seed;
  std::vector<int> valid(n, 0);

  for (int s = 0; s < samples; ++s) {
    const Vector x = uniform_point(box, rng);
    const Vector y = (s % 2 == 0) ? uniform_point(box, rng)
                                  : local_point(box, x, rng);
    for (int i = 0; i < n; ++i) {
      const Vector paired = splice(layout, i, x, y);
      const Vector gx = game.gradient(i, x);
      const Vector gy = game.gradient(i, paired);
      out.grad_max = std::max({out.grad_max, gx.norm(), gy.norm()});
      const double dist = game.distance(x, paired);
      if (dist < kDegeneratePair) continue;
      ++valid[i];
      out.lipschitz[i] = std::max(out.lipschitz[i], (gx - gy).norm() / dist);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (valid[i] == 0) {
      NumericContext ctx;
      ctx.agent = i;
      throw EstimationError("every sampled pair was degenerate", ctx);
    }
  }
  out.L = *std::max_element(out.lipschitz.begin(), out.lipschitz.end());
  if (!std::isfinite(out.L) || !std::isfinite(out.grad_max)) {
    throw EstimationError("non-finite constant estimate");
  }
  return out;
}

Matrix complement_selection(const Layout& layout) {
  int rows = 0;
  for (int i = 0; i < layout.num_agents(); ++i) {
    rows += layout.complement_dim(i);
  }
  Matrix d = Matrix::Zero(rows, layout.total_dim());
  int r = 0;
  for (int i = 0; i < layout.num_agents(); ++i) {
    for (int j : layout.complement_indices(i)) d(r++, j) = 1.0;
  }
  return d;
}

HessianBlocks assemble_blocks(const DifferentiableGame& game,
                              const Vector& theta_star,
                              const LearningRates& rates) {
  require_reference(game, theta_star);
  const Layout& layout = game.layout();
  const int n = layout.num_agents();
  if (rates.size() != n) {
    throw InputError("expected " + std::to_string(n) + " learning rates");
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, game.gradient(i, theta_star).norm());
  }
  if (!(worst < kStationarityTolerance)) {
    throw PreconditionError(
        "reference point is not stationary: max gradient norm " +
        std::to_string(worst));
  }

  const int total = layout.total_dim();
  Matrix d = complement_selection(layout);
  HessianBlocks blocks{Matrix::Zero(total, total),
                       Matrix::Zero(total, d.rows()), std::move(d),
                       Matrix::Zero(total, total),
                       {}};
  int column = 0;
  for (int i = 0; i < n; ++i) {
    std::optional<AgentHessian> h = game.analytic_hessian(i, theta_star);
    if (!h) h = fd_hessian_blocks(game, i, theta_star);
    const int off = layout.offset(i);
    const int di = layout.dim(i);
    const int ci = layout.complement_dim(i);
    blocks.A.block(off, off, di, di) = h->own;
    blocks.B.block(off, column, di, ci) = h->cross;
    blocks.eta_block.block(off, off, di, di) =
        rates[i] * Matrix::Identity(di, di);
    blocks.C.push_back(h->others);
    column += ci;
  }
  return blocks;
}

SpectralExtremes spectral_extremes(const Matrix& z) {
  if (z.size() == 0) throw InputError("matrix must be non-empty");
  if (!z.allFinite()) throw InputError("matrix must be finite");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(z.transpose() * z,
                                            Eigen::EigenvaluesOnly);
  const Vector& lambda = eig.eigenvalues();
  SpectralExtremes out{std::sqrt(std::max(0.0, lambda.maxCoeff())),
                       std::sqrt(std::max(0.0, lambda.minCoeff()))};
  // Small singular values go through a direct SVD.
  constexpr double kRefine = 1e-6;
  if (out.sigma_min <= kRefine * out.sigma_max || z.rows() < z.cols()) {
    Eigen::JacobiSVD<Matrix> svd(z);
    const Vector& s = svd.singularValues();
    out.sigma_max = s.maxCoeff();
    out.sigma_min = z.rows() < z.cols() ? 0.0 : s.minCoeff();
  }
  return out;
}

double theorem1_bound(int k, double eta_max, double L, int n,
                      double grad_max) {
  if (k < 1) throw InputError("k must be at least 1");
  if (n < 2) throw InputError("n must be at least 2");
  if (!(eta_max > 0.0) || L < 0.0 || grad_max < 0.0) {
    throw InputError("bound inputs must be non-negative");
  }
  const int e = k - 1;
  return eta_max * std::pow(eta_max * L, e) * n * std::pow(n - 1.0, e) *
         grad_max;
}

double gsppm_ratio(const HessianBlocks& blocks) {
  const Matrix eye = identity_like(blocks);
  const SpectralExtremes plus =
      spectral_extremes(eye + blocks.eta_block * blocks.A);
  const SpectralExtremes minus =
      spectral_extremes(eye - blocks.eta_block * blocks.B * blocks.D);
  if (!(minus.sigma_min >
        std::numeric_limits<double>::epsilon() * std::max(1.0, minus.sigma_max))) {
    throw SingularityError("I - eta B D is singular; the implicit update is "
                           "undefined");
  }
  return (plus.sigma_max * plus.sigma_max) /
         (minus.sigma_min * minus.sigma_min);
}

Theorem3Bound theorem3_bound(const HessianBlocks& blocks, double r0,
                             double r_prev, double grad_max) {
  if (!(r0 >= 0.0) || !(r_prev >= 0.0) || !(grad_max >= 0.0)) {
    throw InputError("distances and grad_max must be non-negative");
  }
  const Matrix eye = identity_like(blocks);
  Theorem3Bound b;
  b.sigma_own = spectral_extremes(eye + blocks.eta_block * blocks.A).sigma_max;
  b.sigma_cross =
      spectral_extremes(blocks.eta_block * blocks.B * blocks.D).sigma_max;
  const double s1 = b.sigma_own;
  const double s2 = b.sigma_cross;
  b.own_term = (s1 * s1 + 2.0 * s1 * s2) * r0 * r0;
  b.mixed_term = 2.0 * s1 * s2 * r0 * grad_max;
  b.previous_term = s2 * s2 * r_prev * r_prev;
  b.value = b.own_term + b.mixed_term + b.previous_term;
  b.condition = s2 * s2 < 1.0;
  b.mixed_dominates = b.mixed_term > b.own_term + b.previous_term;
  return b;
}

std::string to_string(SuiteStatus status) {
  switch (status) {
    case SuiteStatus::kPass:
      return "PASS";
    case SuiteStatus::kFail:
      return "FAIL";
    case SuiteStatus::kSkipped:
      return "SKIPPED";
  }
  return "FAIL";
}

std::vector<Vector> region_starts(const DifferentiableGame& game, int count,
                                  std::uint64_t seed) {
  if (count < 1) throw InputError("need at least one start");
  std::mt19937_64 rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) out.push_back(uniform_point(game.region(), rng));
  return out;
}

std::vector<Vector> sphere_starts(const DifferentiableGame& game,
                                  const Vector& center, double radius,
                                  int count, std::uint64_t seed) {
  require_reference(game, center);
  if (count < 1) throw InputError("need at least one start");
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vector u(center.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = normal(rng);
    const double norm = u.norm();
    if (norm == 0.0) continue;
    out.push_back(clip_to(game.region(), center + radius / norm * u));
  }
  return out;
}

SuiteReport verify_theorem1(const DifferentiableGame& game,
                            const LearningRates& rates,
                            const Theorem1Options& options) {
  if (options.max_level < 1) throw InputError("max_level must be at least 1");
  const GameConstants c =
      estimate_constants(game, std::nullopt, options.samples, options.seed);
  const int n = game.num_agents();
  const double eta = rates.max();
  const double contraction = eta * c.L * (n - 1);

  SuiteReport report;
  report.theorem = 1;
  report.metrics = {{"L", c.L},
                    {"grad_max", c.grad_max},
                    {"eta_max", eta},
                    {"eta_L_n1", contraction}};
  if (!(contraction < 1.0)) {
    SuiteReport s = skipped(1, "precondition unmet: eta_max * L * (n - 1) = " +
                                   std::to_string(contraction) + " >= 1");
    s.metrics = report.metrics;
    return s;
  }

  const auto bound = [&](int k) {
    return theorem1_bound(k, eta, c.L, n, c.grad_max);
  };
  double worst_ratio = 0.0;
  const std::vector<Vector> starts =
      region_starts(game, options.starts, options.seed + 1);
  for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
    Optimizer plain({}, game.layout());
    TraceOptions trace;
    trace.update = s;
    trace.step_bound = bound;
    UpdateResult r = kpg_update(game, JointParams(game.layout(), starts[s]),
                                rates, options.max_level, plain, trace);
    for (const TraceRow& row : r.trace.rows) {
      if (!row.step_dist || !row.bound_t1) continue;
      ++report.checked;
      if (*row.bound_t1 > 0.0) {
        worst_ratio = std::max(worst_ratio, *row.step_dist / *row.bound_t1);
      }
      if (*row.step_dist > *row.bound_t1) ++report.violations;
    }
    report.detail.append(r.trace);
  }
  report.metrics["max_step_over_bound"] = worst_ratio;
  finish(report);
  return report;
}

SuiteReport verify_theorem2(const DifferentiableGame& game,
                            const Vector& theta_star,
                            const LearningRates& rates,
                            const Theorem2Options& options) {
  const HessianBlocks blocks = assemble_blocks(game, theta_star, rates);
  const double ratio = gsppm_ratio(blocks);
  if (!(ratio < 1.0)) {
    SuiteReport s =
        skipped(2, "ratio " + std::to_string(ratio) + " is not below 1");
    s.metrics["ratio"] = ratio;
    return s;
  }

  SuiteReport report;
  report.theorem = 2;
  report.metrics["ratio"] = ratio;
  const double factor = std::sqrt(ratio);
  int converged = 0;
  int most_updates = 0;
  double worst_contraction = 0.0;

  const std::vector<Vector> starts = sphere_starts(
      game, theta_star, options.radius, options.starts, options.seed);
  for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
    JointParams theta(game.layout(), starts[s]);
    const double r0 = game.distance(theta.flat(), theta_star);

    TraceOptions trace;
    trace.update = s;
    trace.reference = theta_star;
    GsppmResult first = gsppm_solve(game, theta, rates, options.level_tol,
                                    options.max_levels, trace);
    const double r1 = game.distance(first.theta.flat(), theta_star);
    const double limit = factor * r0 + options.contraction_slack;
    TraceRow row;
    row.update = s;
    row.level = first.levels_used;
    row.dist_star = r1;
    row.bound_t1 = limit;
    report.detail.rows.push_back(row);
    ++report.checked;
    if (!first.converged || r1 > limit) ++report.violations;
    if (r0 > 0.0) worst_contraction = std::max(worst_contraction, r1 / r0);

    theta = first.theta;
    int updates = 1;
    double dist = r1;
    while (dist >= options.target && updates < options.max_updates) {
      GsppmResult next = gsppm_solve(game, theta, rates, options.level_tol,
                                     options.max_levels);
      theta = next.theta;
      dist = game.distance(theta.flat(), theta_star);
      ++updates;
      if (!std::isfinite(dist)) break;
    }
    ++report.checked;
    if (dist < options.target) {
      ++converged;
      most_updates = std::max(most_updates, updates);
    } else {
      ++report.violations;
    }
  }
  report.metrics["sqrt_ratio"] = factor;
  report.metrics["max_one_step_contraction"] = worst_contraction;
  report.metrics["converged_starts"] = converged;
  report.metrics["max_updates_to_target"] = most_updates;
  finish(report);
  return report;
}

SuiteReport verify_theorem3(const DifferentiableGame& game,
                            const Vector& theta_star,
                            const LearningRates& rates,
                            const Theorem3Options& options) {
  if (options.max_level < 1) throw InputError("max_level must be at least 1");
  const HessianBlocks blocks = assemble_blocks(game, theta_star, rates);
  const GameConstants c =
      estimate_constants(game, std::nullopt, options.samples, options.seed);
  const Theorem3Bound probe = theorem3_bound(blocks, 0.0, 0.0, c.grad_max);
  if (!probe.condition) {
    SuiteReport s = skipped(3, "condition unmet: sigma_max(eta B D)^2 >= 1");
    s.metrics["sigma_cross"] = probe.sigma_cross;
    return s;
  }

  SuiteReport report;
  report.theorem = 3;
  int mixed = 0;
  double worst_ratio = 0.0;
  const std::vector<Vector> starts = sphere_starts(
      game, theta_star, options.radius, options.starts, options.seed + 1);
  for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
    Optimizer plain({}, game.layout());
    TraceOptions trace;
    trace.update = s;
    trace.reference = theta_star;
    UpdateResult r = kpg_update(game, JointParams(game.layout(), starts[s]),
                                rates, options.max_level, plain, trace);
    const double r0 = *r.trace.rows.front().dist_star;
    double r_prev = r0;
    for (TraceRow& row : r.trace.rows) {
      if (row.level == 0 || !row.dist_star) continue;
      const Theorem3Bound b = theorem3_bound(blocks, r0, r_prev, c.grad_max);
      const double measured = *row.dist_star * *row.dist_star;
      row.bound_t1 = std::sqrt(b.value);
      ++report.checked;
      if (b.mixed_dominates) ++mixed;
      if (b.value > 0.0) worst_ratio = std::max(worst_ratio, measured / b.value);
      if (measured > b.value * (1.0 + kRoundingSlack)) ++report.violations;
      r_prev = *row.dist_star;
    }
    report.detail.append(r.trace);
  }
  report.metrics = {{"sigma_own", probe.sigma_own},
                    {"sigma_cross", probe.sigma_cross},
                    {"grad_max", c.grad_max},
                    {"mixed_term_dominant_rows", mixed},
                    {"max_measured_over_bound", worst_ratio}};
  finish(report);
  return report;
}

SuiteReport verify_level_monotonicity(const DifferentiableGame& game,
                                      const Vector& theta_star,
                                      const LearningRates& rates,
                                      const std::vector<Vector>& starts,
                                      const MonotonicityOptions& options) {
  if (options.max_level < 1) throw InputError("max_level must be at least 1");
  if (starts.empty()) throw InputError("need at least one start");
  const HessianBlocks blocks = assemble_blocks(game, theta_star, rates);
  const Theorem3Bound probe = theorem3_bound(blocks, 0.0, 0.0, 0.0);
  if (!probe.condition) {
    return skipped(3, "condition unmet: sigma_max(eta B D)^2 >= 1");
  }

  SuiteReport report;
  report.theorem = 3;
  int fixed_checked = 0;
  int fixed_violations = 0;
  int bad_starts = 0;
  double worst_rise = 0.0;
  for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
    const JointParams theta(game.layout(), starts[s]);
    Optimizer plain({}, game.layout());
    TraceOptions trace;
    trace.update = s;
    trace.reference = theta_star;
    trace.record_params = true;
    UpdateResult r =
        kpg_update(game, theta, rates, options.max_level, plain, trace);
    const GsppmResult fixed = gsppm_solve(game, theta, rates, 1e-15, 10000);

    bool bad = false;
    for (std::size_t k = 1; k < r.trace.params.size(); ++k) {
      const double before = *r.trace.rows[k - 1].dist_star;
      const double after = *r.trace.rows[k].dist_star;
      ++report.checked;
      worst_rise = std::max(worst_rise, after - before);
      if (after > before + options.tolerance) {
        ++report.violations;
        bad = true;
      }
      const double fb =
          game.distance(r.trace.params[k - 1].theta, fixed.theta.flat());
      const double fa = game.distance(r.trace.params[k].theta, fixed.theta.flat());
      ++fixed_checked;
      if (fa > fb + options.tolerance) ++fixed_violations;
    }
    if (bad) ++bad_starts;
    r.trace.params.clear();
    report.detail.append(r.trace);
  }
  report.metrics = {{"max_rise", worst_rise},
                    {"non_monotone_starts", bad_starts},
                    {"gsppm_distance_checked", fixed_checked},
                    {"gsppm_distance_violations", fixed_violations}};
  finish(report);
  return report;
}

}  // namespace kpg
