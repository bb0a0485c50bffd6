#include "krs/killrestart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace krs {

namespace {

void require_basic(const Instance& instance) {
  if (!instance.trivial_releases() || instance.machines != 1) {
    throw std::invalid_argument("use extensions module");
  }
  if (instance.jobs.empty()) {
    throw std::invalid_argument("empty instance");
  }
}

bool probe_succeeds(double p, double budget) {
  return p <= budget * (1.0 + kBoundaryTol);
}

}  // namespace

int completion_round(double s, double b, double xi) {
  double v = std::log(s) / std::log(b) - xi;
  int q = static_cast<int>(std::ceil(v - 1e-9));
  while (!probe_succeeds(s, std::pow(b, q + xi))) ++q;
  while (probe_succeeds(s, std::pow(b, q - 1 + xi))) --q;
  return q;
}

int floor_log(double s, double b) {
  double v = std::log(s) / std::log(b);
  int k = static_cast<int>(std::floor(v + 1e-9));
  while (std::pow(b, k) > s * (1.0 + kBoundaryTol)) --k;
  while (std::pow(b, k + 1) <= s * (1.0 + kBoundaryTol)) ++k;
  return k;
}

BScaleResult simulate_bscaling(const Instance& instance, double b,
                               const std::vector<int>& sigma, double xi) {
  require_basic(instance);
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("offset must be in [0,1]");
  const int n = instance.size();
  if (static_cast<int>(sigma.size()) != n) {
    throw std::invalid_argument("order must be a permutation of 1..n");
  }

  // Round of first possible success per job; all rounds below min are failed.
  std::vector<int> round_done(n);
  int q0 = 0;
  for (int j = 0; j < n; ++j) {
    round_done[j] = completion_round(instance.jobs[j].smith(), b, xi);
    q0 = (j == 0) ? round_done[j] : std::min(q0, round_done[j]);
  }
  q0 -= 1;  // largest round in which every probe fails

  ProbeSchedule schedule;
  schedule.machines = 1;
  schedule.prefix_elapsed.assign(n, 0.0);
  const double geo = std::pow(b, q0 + xi) / (b - 1.0);
  for (int j = 0; j < n; ++j) {
    schedule.prefix_elapsed[j] = instance.jobs[j].w * geo;
    schedule.prefix_time += schedule.prefix_elapsed[j];
  }

  std::vector<double> completions(n, 0.0);
  std::vector<char> alive(n, 1);
  int remaining = n;
  double t = schedule.prefix_time;
  for (int q = q0; remaining > 0; ++q) {
    const double scale = std::pow(b, q + xi);
    for (int job : sigma) {
      int j = job - 1;
      if (!alive[j]) continue;
      const Job& jb = instance.jobs[j];
      double budget = jb.w * scale;
      bool done = q >= round_done[j];
      double duration = done ? jb.p : budget;
      schedule.segments.push_back({1, {t, job, budget, false}, duration, done});
      t += duration;
      if (done) {
        completions[j] = t;
        alive[j] = 0;
        --remaining;
      }
    }
  }
  return {std::move(schedule), make_report(instance, std::move(completions))};
}

BScaleResult simulate_bscaling(const Instance& instance, double b) {
  std::vector<int> sigma(instance.size());
  std::iota(sigma.begin(), sigma.end(), 1);
  return simulate_bscaling(instance, b, sigma, 0.0);
}

std::vector<double> completions_from_schedule(const ProbeSchedule& schedule,
                                              const Instance& instance) {
  std::vector<double> completions(instance.size(), -1.0);
  for (const ProbeSegment& seg : schedule.segments) {
    if (seg.completed) {
      completions[seg.probe.job - 1] = seg.probe.start + seg.duration;
    }
  }
  for (double c : completions) {
    if (c < 0.0) throw std::invalid_argument("incomplete schedule");
  }
  return completions;
}

double objective_from_schedule(const ProbeSchedule& schedule,
                               const Instance& instance) {
  std::vector<double> completions = completions_from_schedule(schedule, instance);
  double objective = 0.0;
  for (const Job& j : instance.jobs) objective += j.w * completions[j.index - 1];
  return objective;
}

Eigen::MatrixXd delta_matrix(const ProbeSchedule& schedule,
                             const Instance& instance) {
  const int n = instance.size();
  std::vector<double> completions = completions_from_schedule(schedule, instance);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  if (schedule.phases.empty()) {
    // Trivial-release schedule: the single geometric prefix precedes every
    // completion, so it counts in full toward every D_jk.
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) d(j, k) = schedule.prefix_elapsed[j];
    }
  } else {
    // Release-date schedule: prefix_elapsed is the sum over phases; phases
    // never straddle a completion, so clipping is all-or-nothing.
    for (const AnalyticPhase& phase : schedule.phases) {
      double len = phase.end - phase.start;
      if (len <= 0.0) continue;
      double weight_sum = 0.0;
      for (int job : phase.jobs) weight_sum += instance.jobs[job - 1].w;
      for (int job : phase.jobs) {
        int j = job - 1;
        double share = instance.jobs[j].w / weight_sum * len;
        for (int k = 0; k < n; ++k) {
          if (completions[k] >= phase.end * (1.0 - kBoundaryTol)) {
            d(j, k) += share;
          }
        }
      }
    }
  }
  for (const ProbeSegment& seg : schedule.segments) {
    int j = seg.probe.job - 1;
    for (int k = 0; k < n; ++k) {
      double ck = completions[k];
      if (seg.probe.start < ck) {
        d(j, k) += std::min(seg.duration, ck - seg.probe.start);
      }
    }
  }
  return d;
}

double overestimator_F(double s, double s_prime, double b) {
  if (!(s > 0.0) || s > s_prime * (1.0 + kBoundaryTol)) {
    throw std::invalid_argument("requires 0 < s <= s'");
  }
  int k = floor_log(s, b);
  int k_prime = floor_log(s_prime, b);
  double lead = std::pow(b, k + 1);
  if (k == k_prime) {
    return 2.0 * lead / (b - 1.0) + s_prime;
  }
  return lead * (2.0 / (b - 1.0) + 1.0) + s;
}

double upper_U(const Instance& instance, double b) {
  require_basic(instance);
  const int n = instance.size();
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const Job& a = instance.jobs[j];
    total += a.w * a.w * overestimator_F(a.smith(), a.smith(), b);
    for (int k = j + 1; k < n; ++k) {
      const Job& c = instance.jobs[k];
      double lo = std::min(a.smith(), c.smith());
      double hi = std::max(a.smith(), c.smith());
      total += a.w * c.w * overestimator_F(lo, hi, b);
    }
  }
  return total;
}

double det_cost_grouped(const GroupedInstance& grouped) {
  GroupedInstance g = normalize_grouped(grouped);
  const double b = g.base;
  for (const GroupedClass& c : g.classes) {
    if (c.weight != 1.0) {
      throw std::invalid_argument("det_cost_grouped requires unit weights");
    }
    if (c.exponent != std::floor(c.exponent)) {
      throw std::invalid_argument(
          "det_cost_grouped requires integer exponents");
    }
  }
  const size_t L = g.classes.size();
  const double diag_coef = b / (b - 1.0) + 1.0;
  const double same_coef = 2.0 * b / (b - 1.0) + 1.0;
  const double cross_coef = 2.0 * b / (b - 1.0) + b + 1.0;
  std::vector<double> suffix_count(L + 1, 0.0);
  for (size_t l = L; l-- > 0;) {
    suffix_count[l] = suffix_count[l + 1] + g.classes[l].count;
  }
  double total = 0.0;
  for (size_t l = 0; l < L; ++l) {
    const GroupedClass& c = g.classes[l];
    double lead = std::pow(b, c.exponent);
    double pairs = c.count * (c.count - 1.0) / 2.0;
    total += c.count * (lead * diag_coef + c.epsilon);
    total += pairs * (lead * same_coef + c.epsilon);
    total += c.count * suffix_count[l + 1] * (lead * cross_coef + c.epsilon);
  }
  return total;
}

double f_alpha(double alpha, double b) {
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  if (alpha < 1.0 - kBoundaryTol || alpha > b * (1.0 + kBoundaryTol)) {
    throw std::domain_error("alpha must lie in [1, b]");
  }
  alpha = std::clamp(alpha, 1.0, b);
  double lb = std::log(b);
  return (1.0 + alpha) / 2.0 + 2.0 / lb +
         (alpha - 1.0) * (1.0 - std::log(alpha)) / (2.0 * lb);
}

double expected_cost_exact(const Instance& instance, double b) {
  require_basic(instance);
  const int n = instance.size();
  const double lb = std::log(b);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const Job& a = instance.jobs[j];
    total += a.w * a.w * a.smith() * (1.0 + 1.0 / lb);
    for (int k = j + 1; k < n; ++k) {
      const Job& c = instance.jobs[k];
      double lo = std::min(a.smith(), c.smith());
      double hi = std::max(a.smith(), c.smith());
      total += a.w * c.w * lo * f_alpha(std::min(b, hi / lo), b);
    }
  }
  return total;
}

double expected_cost_grouped(const GroupedInstance& grouped) {
  GroupedInstance g = normalize_grouped(grouped);
  const double b = g.base;
  for (const GroupedClass& c : g.classes) {
    if (c.weight != 1.0) {
      throw std::invalid_argument("expected_cost_grouped requires unit weights");
    }
  }
  const double lb = std::log(b);
  const size_t L = g.classes.size();
  double total = 0.0;
  for (size_t l = 0; l < L; ++l) {
    const GroupedClass& c = g.classes[l];
    double s = g.size(c);
    // n(n+1)/2 pairs at f(1) with the diagonal corrected down by s/log b.
    total += c.count * (c.count + 1.0) / 2.0 * s * f_alpha(1.0, b);
    total -= c.count * s / lb;
    for (size_t k = l + 1; k < L; ++k) {
      const GroupedClass& d = g.classes[k];
      double ratio = std::min(b, g.size(d) / s);
      total += c.count * d.count * s * f_alpha(ratio, b);
    }
  }
  return total;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Rejection-sampled bounded draw; exact uniformity, platform-stable.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t threshold = (0ULL - bound) % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v >= threshold) return v % bound;
  }
}

}  // namespace

McEstimate expected_cost_mc(const Instance& instance, double b,
                            const RandomSpec& spec) {
  require_basic(instance);
  if (spec.trials < 1) throw std::invalid_argument("trials must be positive");
  const int n = instance.size();
  double mean = 0.0;
  double m2 = 0.0;
  for (int trial = 0; trial < spec.trials; ++trial) {
    std::mt19937_64 rng(splitmix64(spec.seed + static_cast<std::uint64_t>(trial)));
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 1);
    for (int i = n - 1; i > 0; --i) {
      auto j = static_cast<int>(bounded_draw(rng, static_cast<std::uint64_t>(i) + 1));
      std::swap(sigma[i], sigma[j]);
    }
    double xi = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double cost = simulate_bscaling(instance, b, sigma, xi).second.objective;
    double delta = cost - mean;
    mean += delta / (trial + 1);
    m2 += delta * (cost - mean);
  }
  McEstimate estimate;
  estimate.mean = mean;
  estimate.std_error =
      spec.trials > 1 ? std::sqrt(m2 / (static_cast<double>(spec.trials) - 1.0) /
                                  static_cast<double>(spec.trials))
                      : 0.0;
  return estimate;
}

}  // namespace krs
