#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace krs {

/// Default relative tolerance for value comparisons throughout the library.
inline constexpr double kRelTol = 1e-9;

/// Relative tolerance used for floating-point boundary decisions
/// (probe success at exact thresholds, power-of-b detection, ratio grouping).
inline constexpr double kBoundaryTol = 1e-12;

/// A single job. Indices are 1-based and stable; they break all ties.
struct Job {
  int index = 0;
  double p = 0.0;  // processing time, > 0
  double w = 1.0;  // weight, > 0
  double r = 0.0;  // release date, >= 0

  double smith() const { return p / w; }
};

/// A scheduling instance: a set of jobs and a machine count.
struct Instance {
  std::vector<Job> jobs;
  int machines = 1;

  int size() const { return static_cast<int>(jobs.size()); }
  const Job& job(int index) const { return jobs[static_cast<size_t>(index) - 1]; }

  bool trivial_releases() const;
  bool unit_weights() const;
  double total_weight() const;
};

/// One Smith-ratio class of a multiplicity-compressed instance.
/// Jobs in the class have processing time base^exponent + epsilon and a
/// common weight. Counts are integral-valued doubles, exact up to 2^53.
struct GroupedClass {
  double exponent = 0.0;
  double count = 0.0;
  double epsilon = 0.0;
  double weight = 1.0;
};

/// Multiplicity-compressed instance over Smith-ratio classes with base > 1.
struct GroupedInstance {
  double base = 2.0;
  std::vector<GroupedClass> classes;  // strictly increasing exponents

  double size(const GroupedClass& c) const {
    return std::pow(base, c.exponent) + c.epsilon;
  }
};

/// Completion times plus the weighted-completion-time objective.
struct CompletionReport {
  std::vector<double> completions;  // completions[j-1] = C_j
  double objective = 0.0;

  double completion(int index) const {
    return completions[static_cast<size_t>(index) - 1];
  }
};

/// Builds a report from completion times, recomputing the objective.
CompletionReport make_report(const Instance& instance,
                             std::vector<double> completions);

/// Checks invariants and re-indexes jobs 1..n in input order.
/// Throws std::invalid_argument on nonpositive p or w, negative r, or m < 1.
Instance validate(Instance instance);

/// Exact optimum for weighted completion time on one machine with trivial
/// release dates: sequence by nondecreasing Smith ratio, ties by index.
/// Throws std::invalid_argument for nonzero release dates or m > 1.
CompletionReport wspt_opt(const Instance& instance);

/// Exact optimum for total completion time of unit-weight jobs on identical
/// parallel machines: SPT order, each job on the earliest-available machine.
/// Throws std::invalid_argument for non-unit weights or nonzero release dates.
CompletionReport spt_list_parallel_opt(const Instance& instance);

/// Drops zero-count classes and checks ordering/validity of a grouped
/// instance. Throws std::invalid_argument on violations.
GroupedInstance normalize_grouped(GroupedInstance grouped);

/// Exact optimal cost of the expansion of a grouped instance, computed
/// group-wise with suffix sums. Within-class pairs count n(n+1)/2.
double grouped_opt(const GroupedInstance& grouped);

/// Scales processing times and release dates by alpha > 0.
Instance scale_instance(const Instance& instance, double alpha);

/// Expands a grouped instance into an explicit instance with jobs sorted by
/// non-increasing processing time (completing jobs run after failed probes).
Instance expand_grouped(const GroupedInstance& grouped);

/// Total number of jobs across classes.
double grouped_job_count(const GroupedInstance& grouped);

/// True when |a - b| <= tol * max(1, |a|, |b|).
bool approx_eq(double a, double b, double tol = kRelTol);

}  // namespace krs
