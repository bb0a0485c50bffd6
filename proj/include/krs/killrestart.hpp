#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "krs/core.hpp"

namespace krs {

/// A planned probe: run `job` from `start` for at most `budget`.
/// The probe succeeds iff the job's processing time fits into the budget;
/// an infinite budget always succeeds.
struct Probing {
  double start = 0.0;
  int job = 0;  // 1-based
  double budget = 0.0;
  bool infinite = false;
};

/// An executed probe. duration = min(budget, p_j); restart-from-scratch
/// semantics make a successful probe run for the full p_j.
struct ProbeSegment {
  int machine = 1;  // 1-based
  Probing probe;
  double duration = 0.0;
  bool completed = false;
};

/// A closed-form batch of infinitesimal probing rounds: between `start` and
/// `end` the jobs in `jobs` are advanced jointly from rank -inf to
/// `rank_reached`, consuming sum_j w_j * b^rank / (b-1) machine time.
struct AnalyticPhase {
  double start = 0.0;
  double end = 0.0;
  std::vector<int> jobs;
  int rank_reached = 0;
};

/// Realized schedule of a kill-and-restart strategy: explicit probe segments
/// plus the analytic geometric prefix charged below the starting round.
struct ProbeSchedule {
  int machines = 1;
  double prefix_time = 0.0;             // machine time in all analytic phases
  std::vector<double> prefix_elapsed;   // per-job share of the analytic time
  std::vector<ProbeSegment> segments;   // ordered by start
  std::vector<AnalyticPhase> phases;    // ordered by start
};

struct RandomSpec {
  std::uint64_t seed = 1;
  int trials = 1;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

using BScaleResult = std::pair<ProbeSchedule, CompletionReport>;

/// Simulates the b-scaling strategy with probing order `sigma` (a permutation
/// of 1..n giving the within-round order) and offset xi in [0,1]. Requires
/// trivial release dates and one machine. The rounds below the largest
/// all-fail round are charged analytically as a geometric prefix.
BScaleResult simulate_bscaling(const Instance& instance, double b,
                               const std::vector<int>& sigma, double xi);

/// Deterministic variant: identity order, zero offset.
BScaleResult simulate_bscaling(const Instance& instance, double b);

/// D_jk = time spent probing job j before the completion of job k,
/// reconstructed from segments plus the analytic prefix.
Eigen::MatrixXd delta_matrix(const ProbeSchedule& schedule,
                             const Instance& instance);

/// Piecewise-linear overestimator F(s, s') of the pairwise weighted delay,
/// for 0 < s <= s'. Class boundaries use the floor (upper semi-continuous
/// envelope).
double overestimator_F(double s, double s_prime, double b);

/// Sum of w_j w_k F(min(s_j,s_k), max(s_j,s_k)) over unordered pairs,
/// including j = k. An upper bound on the deterministic strategy's cost.
double upper_U(const Instance& instance, double b);

/// Exact deterministic b-scaling cost of the expansion of a grouped instance
/// (integer exponents, unit weights, jobs ordered non-increasing in size),
/// evaluated from multiplicities in closed form.
double det_cost_grouped(const GroupedInstance& grouped);

/// Overestimator f(alpha) of the expected pairwise delay ratio, on [1, b].
/// Nondecreasing and concave.
double f_alpha(double alpha, double b);

/// Exact expected cost of the randomized b-scaling strategy (uniform
/// permutation, log-uniform offset) for trivial release dates, one machine.
double expected_cost_exact(const Instance& instance, double b);

/// Exact expected randomized cost of a grouped instance (unit weights,
/// arbitrary real class sizes), evaluated from multiplicities.
double expected_cost_grouped(const GroupedInstance& grouped);

/// Monte-Carlo estimate of the randomized strategy's cost. Reproducible:
/// trial t uses splitmix64(seed + t) to seed the generator, permutations are
/// Fisher-Yates with rejection-sampled bounded draws.
McEstimate expected_cost_mc(const Instance& instance, double b,
                            const RandomSpec& spec);

/// Recomputes the objective from the emitted segments, independently of the
/// simulator's bookkeeping. Throws if the schedule is incomplete.
double objective_from_schedule(const ProbeSchedule& schedule,
                               const Instance& instance);

/// Extracts per-job completion times from a schedule's completed segments.
std::vector<double> completions_from_schedule(const ProbeSchedule& schedule,
                                              const Instance& instance);

/// Smallest integer q with s <= b^(q+xi), up to relative tolerance 1e-12.
/// This is the round in which a job of Smith ratio s completes.
int completion_round(double s, double b, double xi = 0.0);

/// Largest integer k with b^k <= s, up to relative tolerance 1e-12.
int floor_log(double s, double b);

/// 64-bit mixing function used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace krs
