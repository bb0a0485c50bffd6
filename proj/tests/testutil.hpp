#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "krs/core.hpp"
#include "krs/killrestart.hpp"

namespace krs::testutil {

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(splitmix64(seed)) {}
  double uniform() { return (engine() >> 11) * 0x1.0p-53; }
  double log_uniform(double lo_exp, double hi_exp) {
    return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * uniform());
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
  }
};

inline Instance random_instance(Rng& rng, int max_jobs, bool unit_weights,
                                double release_density, int machines = 1) {
  Instance instance;
  instance.machines = machines;
  int n = rng.uniform_int(1, max_jobs);
  double sum_p = 0.0;
  for (int j = 0; j < n; ++j) {
    Job job;
    job.p = rng.log_uniform(-3.0, 3.0);
    job.w = unit_weights ? 1.0 : rng.log_uniform(-1.0, 1.0);
    sum_p += job.p;
    instance.jobs.push_back(job);
  }
  if (release_density > 0.0) {
    for (Job& job : instance.jobs) {
      job.r = rng.uniform() * release_density * sum_p;
    }
  }
  return validate(std::move(instance));
}

/// Re-labels jobs in nondecreasing Smith-ratio order (ties by old index).
inline Instance sort_by_smith(const Instance& instance) {
  Instance sorted = instance;
  std::sort(sorted.jobs.begin(), sorted.jobs.end(),
            [](const Job& a, const Job& b) {
              if (a.smith() != b.smith()) return a.smith() < b.smith();
              return a.index < b.index;
            });
  return validate(std::move(sorted));
}

/// Minimum weighted completion time over all n! sequences (n <= 8).
inline double brute_force_opt(const Instance& instance) {
  const int n = instance.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double t = 0.0, cost = 0.0;
    for (int idx : perm) {
      t += instance.jobs[idx].p;
      cost += instance.jobs[idx].w * t;
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline Instance make_instance(std::vector<double> p,
                              std::vector<double> w = {},
                              std::vector<double> r = {}, int machines = 1) {
  Instance instance;
  instance.machines = machines;
  for (size_t j = 0; j < p.size(); ++j) {
    Job job;
    job.p = p[j];
    job.w = w.empty() ? 1.0 : w[j];
    job.r = r.empty() ? 0.0 : r[j];
    instance.jobs.push_back(job);
  }
  return validate(std::move(instance));
}

}  // namespace krs::testutil
