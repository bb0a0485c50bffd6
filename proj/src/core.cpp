#include "krs/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace krs {

bool approx_eq(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool Instance::trivial_releases() const {
  return std::all_of(jobs.begin(), jobs.end(),
                     [](const Job& j) { return j.r == 0.0; });
}

bool Instance::unit_weights() const {
  return std::all_of(jobs.begin(), jobs.end(),
                     [](const Job& j) { return j.w == 1.0; });
}

double Instance::total_weight() const {
  return std::accumulate(jobs.begin(), jobs.end(), 0.0,
                         [](double s, const Job& j) { return s + j.w; });
}

CompletionReport make_report(const Instance& instance,
                             std::vector<double> completions) {
  CompletionReport report;
  report.completions = std::move(completions);
  report.objective = 0.0;
  for (const Job& j : instance.jobs) {
    report.objective += j.w * report.completions[j.index - 1];
  }
  return report;
}

Instance validate(Instance instance) {
  if (instance.machines < 1) {
    throw std::invalid_argument("machine count must be positive");
  }
  int index = 1;
  for (Job& j : instance.jobs) {
    if (!(j.p > 0.0)) throw std::invalid_argument("nonpositive processing time");
    if (!(j.w > 0.0)) throw std::invalid_argument("nonpositive weight");
    if (j.r < 0.0) throw std::invalid_argument("negative release date");
    j.index = index++;
  }
  return instance;
}

CompletionReport wspt_opt(const Instance& instance) {
  if (!instance.trivial_releases() || instance.machines != 1) {
    throw std::invalid_argument("baseline undefined; use lower bound");
  }
  const int n = instance.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double sa = instance.jobs[a].smith();
    double sb = instance.jobs[b].smith();
    if (sa != sb) return sa < sb;
    return a < b;
  });
  std::vector<double> completions(n, 0.0);
  double t = 0.0;
  for (int idx : order) {
    t += instance.jobs[idx].p;
    completions[idx] = t;
  }
  return make_report(instance, std::move(completions));
}

CompletionReport spt_list_parallel_opt(const Instance& instance) {
  if (!instance.unit_weights()) {
    throw std::invalid_argument("optimality not guaranteed");
  }
  if (!instance.trivial_releases()) {
    throw std::invalid_argument("baseline undefined; use lower bound");
  }
  const int n = instance.size();
  const int m = instance.machines;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (instance.jobs[a].p != instance.jobs[b].p)
      return instance.jobs[a].p < instance.jobs[b].p;
    return a < b;
  });
  std::vector<double> load(m, 0.0);
  std::vector<double> completions(n, 0.0);
  for (int idx : order) {
    auto it = std::min_element(load.begin(), load.end());
    *it += instance.jobs[idx].p;
    completions[idx] = *it;
  }
  return make_report(instance, std::move(completions));
}

GroupedInstance normalize_grouped(GroupedInstance grouped) {
  if (!(grouped.base > 1.0)) {
    throw std::invalid_argument("grouped base must exceed 1");
  }
  std::vector<GroupedClass> kept;
  for (const GroupedClass& c : grouped.classes) {
    if (c.count < 0.0 || c.count != std::floor(c.count)) {
      throw std::invalid_argument("class count must be a nonnegative integer");
    }
    if (c.count >= 9007199254740992.0) {
      throw std::invalid_argument("class count exceeds exact double range");
    }
    if (c.epsilon < 0.0) throw std::invalid_argument("negative class epsilon");
    if (!(c.weight > 0.0)) throw std::invalid_argument("nonpositive class weight");
    if (c.count > 0.0) kept.push_back(c);
  }
  for (size_t i = 1; i < kept.size(); ++i) {
    if (!(kept[i - 1].exponent < kept[i].exponent)) {
      throw std::invalid_argument("class exponents must be strictly increasing");
    }
  }
  grouped.classes = std::move(kept);
  return grouped;
}

double grouped_opt(const GroupedInstance& grouped) {
  GroupedInstance g = normalize_grouped(grouped);
  const size_t L = g.classes.size();
  // Suffix sums of class weight mass (count * weight) over larger classes.
  std::vector<double> suffix(L + 1, 0.0);
  for (size_t l = L; l-- > 0;) {
    suffix[l] = suffix[l + 1] + g.classes[l].count * g.classes[l].weight;
  }
  double total = 0.0;
  for (size_t l = 0; l < L; ++l) {
    const GroupedClass& c = g.classes[l];
    double p = g.size(c);
    double within = c.weight * c.count * (c.count + 1.0) / 2.0;
    total += p * (within + c.count * suffix[l + 1]);
  }
  return total;
}

Instance scale_instance(const Instance& instance, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("scale factor must be positive");
  Instance scaled = instance;
  for (Job& j : scaled.jobs) {
    j.p *= alpha;
    j.r *= alpha;
  }
  return scaled;
}

Instance expand_grouped(const GroupedInstance& grouped) {
  GroupedInstance g = normalize_grouped(grouped);
  Instance instance;
  instance.machines = 1;
  for (size_t l = g.classes.size(); l-- > 0;) {
    const GroupedClass& c = g.classes[l];
    auto count = static_cast<long long>(c.count);
    for (long long i = 0; i < count; ++i) {
      Job j;
      j.p = g.size(c);
      j.w = c.weight;
      instance.jobs.push_back(j);
    }
  }
  return validate(std::move(instance));
}

double grouped_job_count(const GroupedInstance& grouped) {
  double n = 0.0;
  for (const GroupedClass& c : grouped.classes) n += c.count;
  return n;
}

}  // namespace krs
