#include "krs/preemptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace krs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Recorder {
  RateSchedule schedule;
  int n;

  explicit Recorder(int n_) : n(n_) { schedule.breakpoints.push_back(0.0); }

  void advance(double to, const std::vector<double>& rates) {
    double from = schedule.breakpoints.back();
    if (to <= from) return;
    schedule.breakpoints.push_back(to);
    schedule.rates.push_back(rates);
  }

  void jump(double to) {
    advance(to, std::vector<double>(n, 0.0));
  }
};

double ratio_tol(double ratio) { return kBoundaryTol * (1.0 + ratio); }

}  // namespace

RateResult wsetf(const Instance& instance) {
  if (instance.machines != 1) {
    throw std::invalid_argument("wsetf is defined for a single machine");
  }
  const int n = instance.size();
  std::vector<double> y(n, 0.0);
  std::vector<char> done(n, 0);
  std::vector<double> completions(n, 0.0);
  Recorder rec(n);
  double t = 0.0;
  int remaining = n;

  while (remaining > 0) {
    double next_release = kInf;
    bool any_ready = false;
    for (int j = 0; j < n; ++j) {
      if (done[j]) continue;
      if (instance.jobs[j].r <= t + ratio_tol(t)) {
        any_ready = true;
      } else {
        next_release = std::min(next_release, instance.jobs[j].r);
      }
    }
    if (!any_ready) {
      rec.jump(next_release);
      t = next_release;
      continue;
    }

    // Front group: released unfinished jobs of minimum elapsed/weight ratio.
    double rmin = kInf;
    for (int j = 0; j < n; ++j) {
      if (!done[j] && instance.jobs[j].r <= t + ratio_tol(t)) {
        rmin = std::min(rmin, y[j] / instance.jobs[j].w);
      }
    }
    std::vector<int> active;
    double weight_sum = 0.0;
    double next_ratio = kInf;
    for (int j = 0; j < n; ++j) {
      if (done[j] || instance.jobs[j].r > t + ratio_tol(t)) continue;
      double rho = y[j] / instance.jobs[j].w;
      if (rho <= rmin + ratio_tol(rmin)) {
        active.push_back(j);
        weight_sum += instance.jobs[j].w;
      } else {
        next_ratio = std::min(next_ratio, rho);
      }
    }

    double dt_complete = kInf;
    for (int j : active) {
      dt_complete = std::min(dt_complete,
                             weight_sum * (instance.jobs[j].p - y[j]) /
                                 instance.jobs[j].w);
    }
    double dt_catch =
        next_ratio < kInf ? weight_sum * (next_ratio - rmin) : kInf;
    double dt_release = next_release - t;
    double dt = std::min({dt_complete, dt_catch, dt_release});
    dt = std::max(dt, 0.0);

    std::vector<double> rates(n, 0.0);
    for (int j : active) rates[j] = instance.jobs[j].w / weight_sum;
    rec.advance(t + dt, rates);
    for (int j : active) y[j] += rates[j] * dt;
    t += dt;
    for (int j : active) {
      if (y[j] >= instance.jobs[j].p - kRelTol * instance.jobs[j].p) {
        y[j] = instance.jobs[j].p;
        done[j] = 1;
        completions[j] = t;
        --remaining;
      }
    }
  }
  rec.schedule.completions = completions;
  return {std::move(rec.schedule), make_report(instance, std::move(completions))};
}

RateResult pwspt(const Instance& instance) {
  if (instance.machines != 1) {
    throw std::invalid_argument("pwspt is defined for a single machine");
  }
  const int n = instance.size();
  std::vector<double> y(n, 0.0);
  std::vector<char> done(n, 0);
  std::vector<double> completions(n, 0.0);
  Recorder rec(n);
  double t = 0.0;
  int remaining = n;

  while (remaining > 0) {
    double next_release = kInf;
    int top = -1;
    for (int j = 0; j < n; ++j) {
      if (done[j]) continue;
      if (instance.jobs[j].r <= t + ratio_tol(t)) {
        if (top < 0 ||
            instance.jobs[j].smith() < instance.jobs[top].smith() ||
            (instance.jobs[j].smith() == instance.jobs[top].smith() && j < top)) {
          top = j;
        }
      } else {
        next_release = std::min(next_release, instance.jobs[j].r);
      }
    }
    if (top < 0) {
      rec.jump(next_release);
      t = next_release;
      continue;
    }
    double dt = std::min(instance.jobs[top].p - y[top], next_release - t);
    dt = std::max(dt, 0.0);
    std::vector<double> rates(n, 0.0);
    rates[top] = 1.0;
    rec.advance(t + dt, rates);
    y[top] += dt;
    t += dt;
    if (y[top] >= instance.jobs[top].p - kRelTol * instance.jobs[top].p) {
      y[top] = instance.jobs[top].p;
      done[top] = 1;
      completions[top] = t;
      --remaining;
    }
  }
  rec.schedule.completions = completions;
  return {std::move(rec.schedule), make_report(instance, std::move(completions))};
}

RateResult rr_parallel(const Instance& instance, int m) {
  if (m < 1) throw std::invalid_argument("machine count must be positive");
  if (!instance.trivial_releases()) {
    throw std::invalid_argument("rr_parallel requires trivial release dates");
  }
  const int n = instance.size();
  std::vector<double> y(n, 0.0);
  std::vector<char> done(n, 0);
  std::vector<double> completions(n, 0.0);
  Recorder rec(n);
  double t = 0.0;
  int remaining = n;

  while (remaining > 0) {
    double rate = std::min(1.0, static_cast<double>(m) / remaining);
    double dt = kInf;
    for (int j = 0; j < n; ++j) {
      if (!done[j]) dt = std::min(dt, (instance.jobs[j].p - y[j]) / rate);
    }
    std::vector<double> rates(n, 0.0);
    for (int j = 0; j < n; ++j) {
      if (!done[j]) rates[j] = rate;
    }
    rec.advance(t + dt, rates);
    t += dt;
    for (int j = 0; j < n; ++j) {
      if (done[j]) continue;
      y[j] += rate * dt;
      if (y[j] >= instance.jobs[j].p - kRelTol * instance.jobs[j].p) {
        y[j] = instance.jobs[j].p;
        done[j] = 1;
        completions[j] = t;
        --remaining;
      }
    }
  }
  rec.schedule.completions = completions;
  return {std::move(rec.schedule), make_report(instance, std::move(completions))};
}

std::vector<double> mean_busy_times(const RateSchedule& schedule,
                                    const Instance& instance) {
  const int n = instance.size();
  std::vector<double> m(n, 0.0);
  for (size_t i = 0; i < schedule.rates.size(); ++i) {
    double a = schedule.breakpoints[i];
    double b = schedule.breakpoints[i + 1];
    double mid = 0.5 * (a + b);
    double len = b - a;
    for (int j = 0; j < n; ++j) {
      m[j] += schedule.rates[i][j] * len * mid;
    }
  }
  for (int j = 0; j < n; ++j) m[j] /= instance.jobs[j].p;
  return m;
}

double elapsed(const RateSchedule& schedule, int job, double t) {
  if (schedule.rates.empty() ||
      job < 1 || job > static_cast<int>(schedule.rates.front().size())) {
    throw std::invalid_argument("unknown job");
  }
  double total = 0.0;
  for (size_t i = 0; i < schedule.rates.size(); ++i) {
    double a = schedule.breakpoints[i];
    double b = std::min(schedule.breakpoints[i + 1], t);
    if (b <= a) break;
    total += schedule.rates[i][job - 1] * (b - a);
  }
  return total;
}

std::vector<double> completions_from_rates(const RateSchedule& schedule,
                                           const Instance& instance) {
  const int n = instance.size();
  std::vector<double> acc(n, 0.0);
  std::vector<double> completions(n, -1.0);
  for (size_t i = 0; i < schedule.rates.size(); ++i) {
    double a = schedule.breakpoints[i];
    double b = schedule.breakpoints[i + 1];
    for (int j = 0; j < n; ++j) {
      double rate = schedule.rates[i][j];
      if (rate <= 0.0 || completions[j] >= 0.0) continue;
      double need = instance.jobs[j].p - acc[j];
      double got = rate * (b - a);
      if (got >= need - kRelTol * instance.jobs[j].p) {
        completions[j] = a + std::min(need / rate, b - a);
        acc[j] = instance.jobs[j].p;
      } else {
        acc[j] += got;
      }
    }
  }
  for (double c : completions) {
    if (c < 0.0) throw std::invalid_argument("incomplete rate schedule");
  }
  return completions;
}

}  // namespace krs
