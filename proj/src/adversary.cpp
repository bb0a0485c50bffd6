#include "krs/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "krs/spectral.hpp"

namespace krs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

BScalingOracle::BScalingOracle(int n, double b) : n_(n), b_(b) {
  if (n < 1) throw std::invalid_argument("need at least one job");
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  // Truncate the infinitesimal prefix so the ignored tail is negligible.
  q_start_ = static_cast<int>(std::floor(std::log(1e-12 / n) / std::log(b)));
  reset();
}

void BScalingOracle::reset() {
  alive_.assign(n_, 1);
  round_ = q_start_;
  cursor_ = 0;
  clock_ = n_ * std::pow(b_, q_start_) / (b_ - 1.0);
}

double BScalingOracle::prefix_elapsed(int job) const {
  (void)job;
  return std::pow(b_, q_start_) / (b_ - 1.0);
}

Probing BScalingOracle::next_probe() {
  for (;;) {
    if (cursor_ >= static_cast<size_t>(n_)) {
      cursor_ = 0;
      ++round_;
    }
    int j = static_cast<int>(cursor_++);
    if (!alive_[j]) continue;
    double budget = std::pow(b_, round_);
    Probing probe{clock_, j + 1, budget, false};
    clock_ += budget;
    return probe;
  }
}

void BScalingOracle::notify_completion(int job, double time, double p) {
  (void)p;
  alive_[job - 1] = 0;
  clock_ = time;
}

void ProbeForeverOracle::reset() {
  next_ = 1;
  clock_ = 0.0;
  waiting_ = false;
}

Probing ProbeForeverOracle::next_probe() {
  if (waiting_ || next_ > n_) {
    throw std::runtime_error("oracle has no further probes");
  }
  waiting_ = true;
  return {clock_, next_, kInf, true};
}

void ProbeForeverOracle::notify_completion(int job, double time, double p) {
  (void)job;
  (void)p;
  clock_ = time;
  ++next_;
  waiting_ = false;
}

double replay_oracle_cost(StrategyOracle& oracle, const Instance& instance) {
  oracle.reset();
  const int n = instance.size();
  std::vector<char> alive(n, 1);
  int remaining = n;
  double cost = 0.0;
  long guard = 0;
  while (remaining > 0) {
    if (++guard > 100000000L) {
      throw std::runtime_error("oracle did not complete the instance");
    }
    Probing probe = oracle.next_probe();
    int j = probe.job - 1;
    if (j < 0 || j >= n || !alive[j]) {
      throw std::runtime_error("oracle emitted an infeasible probe");
    }
    const Job& jb = instance.jobs[j];
    if (probe.infinite || jb.p <= probe.budget * (1.0 + kBoundaryTol)) {
      double completion = probe.start + jb.p;
      cost += jb.w * completion;
      alive[j] = 0;
      --remaining;
      oracle.notify_completion(probe.job, completion, jb.p);
    }
  }
  return cost;
}

AdversaryOutcome adversary_instance(StrategyOracle& oracle, int n, double eps) {
  if (n < 3) throw std::invalid_argument("need at least three jobs");
  if (!(eps > 2.0 / (n + 1)) || eps > 1.0) {
    throw std::invalid_argument("eps must lie in (2/(n+1), 1]");
  }
  const double T =
      (2.0 - eps) * (static_cast<double>(n) * n + n) / (eps * (n + 1) - 2.0);

  oracle.reset();
  std::vector<double> elapsed(n), elapsed_at_T(n);
  for (int j = 0; j < n; ++j) {
    elapsed[j] = oracle.prefix_elapsed(j + 1);
    elapsed_at_T[j] = elapsed[j];
  }

  AdversaryOutcome outcome;
  std::vector<double> p(n, 0.0);
  long probes = 0;
  for (;;) {
    if (++probes > 10000000L) {
      throw std::runtime_error("oracle never probed past the horizon");
    }
    Probing probe = oracle.next_probe();
    int j = probe.job - 1;
    if (j < 0 || j >= n || probe.start > 1e3 * T + T) {
      throw std::runtime_error("oracle emitted an infeasible probe");
    }
    double total = 0.0;
    for (double e : elapsed) total += e;
    bool huge = probe.infinite || probe.budget > 1e6 * (1.0 + total);
    if (huge) {
      // The strategy commits to finishing this job; make it enormous.
      outcome.branch = AdversaryOutcome::Branch::infinite_probe;
      for (int k = 0; k < n; ++k) {
        if (k != j) p[k] = 1.0 + elapsed_at_T[k];
      }
      std::vector<double> others;
      for (int k = 0; k < n; ++k) {
        if (k != j) others.push_back(p[k]);
      }
      std::sort(others.begin(), others.end());
      double opt_rest = 0.0, acc = 0.0;
      for (double q : others) {
        acc += q;
        opt_rest += acc;
      }
      p[j] = 10.0 * opt_rest;
      break;
    }
    if (probe.start >= T) {
      // Everything served, including this probe, ends by its end time t.
      outcome.branch = AdversaryOutcome::Branch::finite_probe;
      elapsed[j] += probe.budget;
      for (int k = 0; k < n; ++k) p[k] = 1.0 + elapsed[k];
      break;
    }
    elapsed[j] += probe.budget;
    elapsed_at_T[j] += std::min(probe.budget, std::max(0.0, T - probe.start));
  }

  Instance instance;
  instance.machines = 1;
  for (int j = 0; j < n; ++j) {
    Job job;
    job.p = p[j];
    instance.jobs.push_back(job);
  }
  outcome.instance = validate(std::move(instance));
  outcome.strategy_cost = replay_oracle_cost(oracle, outcome.instance);
  outcome.opt_cost = wspt_opt(outcome.instance).objective;
  outcome.ratio = outcome.strategy_cost / outcome.opt_cost;
  return outcome;
}

GroupedInstance det_lb_family(double b, int L, double t, double eps) {
  LbVector v = lb_vector(L, b);
  GroupedInstance family;
  family.base = b;
  for (int ell = 1; ell <= L; ++ell) {
    double count = std::floor(t * v.x(ell - 1));
    if (count <= 0.0) continue;
    family.classes.push_back({static_cast<double>(ell), count, eps, 1.0});
  }
  if (family.classes.empty() ||
      family.classes.back().exponent != static_cast<double>(L)) {
    throw std::invalid_argument("t too small: top class is empty");
  }
  return normalize_grouped(family);
}

GroupedInstance rand_lb_family(double b, int K, int L, double t) {
  if (K < 1) throw std::invalid_argument("K must be positive");
  double beta = std::pow(b, 1.0 / K);
  LbVector v = lb_vector(L + 1, beta);
  GroupedInstance family;
  family.base = b;
  for (int i = 0; i <= L; ++i) {
    double count = std::floor(t * v.x(i));
    if (count <= 0.0) continue;
    family.classes.push_back(
        {static_cast<double>(i) / K, count, 0.0, 1.0});
  }
  if (family.classes.empty() ||
      family.classes.back().exponent != static_cast<double>(L) / K) {
    throw std::invalid_argument("t too small: top class is empty");
  }
  return normalize_grouped(family);
}

}  // namespace krs
