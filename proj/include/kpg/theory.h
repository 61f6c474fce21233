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

#ifndef KPG_THEORY_H_
#define KPG_THEORY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kpg/engine.h"
#include "kpg/game.h"

namespace kpg {

// Sample estimates of the game constants over a region. Both are lower
// bounds of the true suprema.
struct GameConstants {
  std::vector<double> lipschitz;  // L_i
  double L = 0.0;
  double grad_max = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

// L_i = max ||grad_i J_i(x_i, y) - grad_i J_i(x_i, y')|| / ||y - y'|| over
// sampled x and pairs (y, y') of complements. Even samples draw y' uniformly
// from the region; odd samples draw it near y.
GameConstants estimate_constants(const DifferentiableGame& game,
                                 std::optional<Box> region, int samples,
                                 std::uint64_t seed);

// Linearization of the joint level map at a stationary point:
//   A = blockdiag(A_i),  B = blockdiag(B_i),  D theta = [theta_-1; ...; theta_-n]
//   eta_block = diag(eta_i I_{d_i})
struct HessianBlocks {
  Matrix A;
  Matrix B;
  Matrix D;
  Matrix eta_block;
  std::vector<Matrix> C;
};

inline constexpr double kStationarityTolerance = 1e-6;

HessianBlocks assemble_blocks(const DifferentiableGame& game,
                              const Vector& theta_star,
                              const LearningRates& rates);

// Complement-selection matrix for a layout.
Matrix complement_selection(const Layout& layout);

struct SpectralExtremes {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

SpectralExtremes spectral_extremes(const Matrix& z);

// eta (eta L)^(k-1) n (n-1)^(k-1) grad_max
double theorem1_bound(int k, double eta_max, double L, int n, double grad_max);

// sigma_max(I + eta A)^2 / sigma_min(I - eta B D)^2
double gsppm_ratio(const HessianBlocks& blocks);

struct Theorem3Bound {
  double sigma_own = 0.0;    // sigma_max(I + eta A)
  double sigma_cross = 0.0;  // sigma_max(eta B D)
  double own_term = 0.0;
  double mixed_term = 0.0;
  double previous_term = 0.0;
  double value = 0.0;  // squared distance bound
  bool condition = false;
  bool mixed_dominates = false;
};

// (s1^2 + 2 s1 s2) r0^2 + 2 s1 s2 r0 grad_max + s2^2 r_prev^2
Theorem3Bound theorem3_bound(const HessianBlocks& blocks, double r0,
                             double r_prev, double grad_max);

enum class SuiteStatus { kPass, kFail, kSkipped };

std::string to_string(SuiteStatus status);

struct SuiteReport {
  int theorem = 0;
  SuiteStatus status = SuiteStatus::kPass;
  int checked = 0;
  int violations = 0;
  std::string note;
  ConvergenceTrace detail;
  std::map<std::string, double> metrics;
};

struct Theorem1Options {
  int starts = 100;
  int max_level = 10;
  int samples = 10000;
  std::uint64_t seed = 0;
};

// Random starts in the region; every step_dist(k) against theorem1_bound(k).
// Skipped unless eta_max * L * (n - 1) < 1.
SuiteReport verify_theorem1(const DifferentiableGame& game,
                            const LearningRates& rates,
                            const Theorem1Options& options = {});

struct Theorem2Options {
  int starts = 20;
  double radius = 1e-2;
  double contraction_slack = 1e-6;
  double target = 1e-6;
  int max_updates = 10000;
  double level_tol = 1e-14;
  int max_levels = 1000;
  std::uint64_t seed = 0;
};

// Starts on the sphere of the given radius around theta*. Each start checks
// one GSPPM update, ||theta_1 - theta*|| <= sqrt(ratio) ||theta_0 - theta*||
// + slack, and that repeated updates reach the target distance. Skipped
// when the ratio is not below one.
SuiteReport verify_theorem2(const DifferentiableGame& game,
                            const Vector& theta_star,
                            const LearningRates& rates,
                            const Theorem2Options& options = {});

struct Theorem3Options {
  int starts = 100;
  double radius = 1e-2;
  int max_level = 10;
  int samples = 10000;
  std::uint64_t seed = 0;
};

// Within one plain update from each start, dist_star(k)^2 against
// theorem3_bound(r0 = dist_star(0), r_prev = dist_star(k-1)). Skipped when
// sigma_max(eta B D)^2 >= 1.
SuiteReport verify_theorem3(const DifferentiableGame& game,
                            const Vector& theta_star,
                            const LearningRates& rates,
                            const Theorem3Options& options = {});

struct MonotonicityOptions {
  int max_level = 10;
  double tolerance = 1e-9;
};

// Within one plain update, dist_star(k) <= dist_star(k-1) + tolerance for
// k = 1..K. Metrics also report the same check against the distance to the
// update's own GSPPM point. Skipped when sigma_max(eta B D)^2 >= 1.
SuiteReport verify_level_monotonicity(const DifferentiableGame& game,
                                      const Vector& theta_star,
                                      const LearningRates& rates,
                                      const std::vector<Vector>& starts,
                                      const MonotonicityOptions& options = {});

// Points on the sphere of radius r around center, region-clipped.
std::vector<Vector> sphere_starts(const DifferentiableGame& game,
                                  const Vector& center, double radius,
                                  int count, std::uint64_t seed);

// Points uniform in the game region.
std::vector<Vector> region_starts(const DifferentiableGame& game, int count,
                                  std::uint64_t seed);

}  // namespace kpg

#endif  // KPG_THEORY_H_
