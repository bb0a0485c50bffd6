#pragma once

#include <utility>
#include <vector>

#include "krs/core.hpp"

namespace krs {

/// Piecewise-constant fractional schedule: rates[i][j-1] is job j's rate on
/// [breakpoints[i], breakpoints[i+1]). Rates sum to at most m per interval
/// and each job's rate never exceeds 1.
struct RateSchedule {
  std::vector<double> breakpoints;          // size k+1, increasing
  std::vector<std::vector<double>> rates;   // k rows of n rates
  std::vector<double> completions;          // per job
};

using RateResult = std::pair<RateSchedule, CompletionReport>;

/// Weighted Shortest Elapsed Time First on one machine with release dates:
/// the released unfinished jobs of minimum elapsed-time-to-weight ratio share
/// the machine with weight-proportional rates.
RateResult wsetf(const Instance& instance);

/// Preemptive WSPT on one machine: unit rate to the released unfinished job
/// of smallest Smith ratio (ties by index); preemption only at releases and
/// completions.
RateResult pwspt(const Instance& instance);

/// Round-robin on m identical machines with trivial release dates: every
/// unfinished job runs at rate min(1, m/|U|).
RateResult rr_parallel(const Instance& instance, int m);

/// Mean busy times M_j = (1/p_j) * integral of t * y_j(t) dt.
std::vector<double> mean_busy_times(const RateSchedule& schedule,
                                    const Instance& instance);

/// Elapsed processing Y_j(t) of a job at time t (piecewise linear).
double elapsed(const RateSchedule& schedule, int job, double t);

/// Recomputes completion times by integrating rates until each job's
/// processing requirement is met; the independent schedule-consistency check.
std::vector<double> completions_from_rates(const RateSchedule& schedule,
                                           const Instance& instance);

}  // namespace krs
