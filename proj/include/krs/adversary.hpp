#pragma once

#include <memory>
#include <vector>

#include "krs/core.hpp"
#include "krs/killrestart.hpp"

namespace krs {

/// Incremental interface to a deterministic kill-and-restart strategy: the
/// interrogator pulls planned probes in start-time order and feeds back
/// completions, after which subsequent probes reflect the re-planned action.
class StrategyOracle {
 public:
  virtual ~StrategyOracle() = default;

  /// Returns to the initial state.
  virtual void reset() = 0;

  /// Next planned probe, assuming everything served so far failed unless a
  /// completion was reported. Starts are nondecreasing.
  virtual Probing next_probe() = 0;

  /// Reports that `job` completed at `time` inside the last served probe.
  virtual void notify_completion(int job, double time, double p) = 0;

  /// Probing time charged to a job below the first served probe (the
  /// truncated geometric tail of strategies with infinitesimal probing).
  virtual double prefix_elapsed(int job) const {
    (void)job;
    return 0.0;
  }
};

/// Adapter serving the b-scaling strategy's planned probes for n unit-weight
/// jobs, truncating the infinitesimal prefix at a negligible tail.
class BScalingOracle : public StrategyOracle {
 public:
  BScalingOracle(int n, double b);
  void reset() override;
  Probing next_probe() override;
  void notify_completion(int job, double time, double p) override;
  double prefix_elapsed(int job) const override;

 private:
  int n_;
  double b_;
  int q_start_;
  double clock_ = 0.0;
  int round_ = 0;
  size_t cursor_ = 0;
  std::vector<char> alive_;
};

/// Degenerate oracle that runs the lowest-index unfinished job
/// non-preemptively until it completes.
class ProbeForeverOracle : public StrategyOracle {
 public:
  explicit ProbeForeverOracle(int n) : n_(n) { reset(); }
  void reset() override;
  Probing next_probe() override;
  void notify_completion(int job, double time, double p) override;

 private:
  int n_;
  int next_ = 1;
  double clock_ = 0.0;
  bool waiting_ = false;
};

struct AdversaryOutcome {
  enum class Branch { finite_probe, infinite_probe };
  Instance instance;
  double strategy_cost = 0.0;
  double opt_cost = 0.0;
  double ratio = 0.0;
  Branch branch = Branch::finite_probe;
};

/// Runs the lower-bound adversary against a deterministic strategy: serves
/// probes with nothing completing until the first probe at or past the
/// horizon T = (2-eps)(n^2+n)/(eps(n+1)-2), then builds the instance that
/// forces a ratio approaching 3 - eps. Requires n >= 3, eps in (2/(n+1), 1].
AdversaryOutcome adversary_instance(StrategyOracle& oracle, int n, double eps);

/// Replays a strategy oracle against a concrete instance and returns its
/// realized weighted completion time.
double replay_oracle_cost(StrategyOracle& oracle, const Instance& instance);

/// Tight deterministic lower-bound family: counts floor(t * x_l) of jobs
/// with processing time b^l + eps, from the truncated sine direction.
GroupedInstance det_lb_family(double b, int L, double t, double eps);

/// Tight randomized lower-bound family over classes b^(i/K), i = 0..L.
GroupedInstance rand_lb_family(double b, int K, int L, double t);

}  // namespace krs
