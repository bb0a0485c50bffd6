#include <doctest.h>

#include <cmath>

#include "krs/preemptive.hpp"
#include "testutil.hpp"

using namespace krs;
using namespace krs::testutil;

namespace {

// Integral of eta_j = Y_j/p_j over the times job k runs at unit rate.
double eta_integral_over_unit_segments(const RateSchedule& schedule,
                                       const Instance& instance, int k, int j) {
  double total = 0.0;
  for (size_t i = 0; i < schedule.rates.size(); ++i) {
    if (schedule.rates[i][k - 1] < 1.0 - 1e-12) continue;
    double a = schedule.breakpoints[i];
    double b = schedule.breakpoints[i + 1];
    double eta_a = elapsed(schedule, j, a) / instance.jobs[j - 1].p;
    double eta_b = elapsed(schedule, j, b) / instance.jobs[j - 1].p;
    total += (b - a) * 0.5 * (eta_a + eta_b);
  }
  return total;
}

double unfinished_integral(const RateSchedule& schedule,
                           const Instance& instance, int j) {
  double total = 0.0;
  double p = instance.jobs[j - 1].p;
  for (size_t i = 0; i < schedule.rates.size(); ++i) {
    double a = schedule.breakpoints[i];
    double b = schedule.breakpoints[i + 1];
    double eta_a = elapsed(schedule, j, a) / p;
    double eta_b = elapsed(schedule, j, b) / p;
    total += (b - a) * (1.0 - 0.5 * (eta_a + eta_b));
  }
  return total;
}

}  // namespace

TEST_CASE("wsetf on frozen examples") {
  auto [s1, r1] = wsetf(make_instance({1, 1}));
  CHECK(r1.completion(1) == doctest::Approx(2));
  CHECK(r1.completion(2) == doctest::Approx(2));
  CHECK(r1.objective == doctest::Approx(4));

  auto [s2, r2] = wsetf(make_instance({1, 2, 3}));
  CHECK(r2.completion(1) == doctest::Approx(3));
  CHECK(r2.completion(2) == doctest::Approx(5));
  CHECK(r2.completion(3) == doctest::Approx(6));

  auto [s3, r3] = wsetf(make_instance({2, 1}, {}, {0, 1}));
  CHECK(r3.completion(1) == doctest::Approx(3));
  CHECK(r3.completion(2) == doctest::Approx(2));
}

TEST_CASE("pwspt on frozen examples") {
  auto [s1, r1] = pwspt(make_instance({2, 1}, {}, {0, 1}));
  CHECK(r1.completion(1) == doctest::Approx(3));
  CHECK(r1.completion(2) == doctest::Approx(2));
  CHECK(elapsed(s1, 1, 1.0) == doctest::Approx(1.0));

  auto [s2, r2] = pwspt(make_instance({1, 2}));
  CHECK(r2.completion(1) == doctest::Approx(1));
  CHECK(r2.completion(2) == doctest::Approx(3));

  // Figure instance: the shortest available job at time 0 is job 4.
  Instance fig = make_instance({4, 4, 8, 16, 32, 32}, {},
                               {30, 93, 18, 0, 0, 18});
  auto [s3, r3] = pwspt(fig);
  CHECK(elapsed(s3, 4, 16.0) == doctest::Approx(16.0));
  CHECK(r3.completion(4) == doctest::Approx(16.0));
}

TEST_CASE("mean busy times on frozen examples") {
  Instance two = make_instance({1, 2});
  auto [schedule, report] = pwspt(two);
  std::vector<double> m = mean_busy_times(schedule, two);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(2.0));

  Instance single = make_instance({5});
  auto [s1, r1] = pwspt(single);
  CHECK(mean_busy_times(s1, single)[0] == doctest::Approx(2.5));

  double weighted_sum = 0.0;
  for (const Job& j : two.jobs) weighted_sum += j.w * m[j.index - 1];
  CHECK(weighted_sum <= report.objective);
}

TEST_CASE("elapsed evaluations") {
  auto [s1, r1] = wsetf(make_instance({1, 1}));
  CHECK(elapsed(s1, 1, 1.0) == doctest::Approx(0.5));
  CHECK(elapsed(s1, 2, 1.0) == doctest::Approx(0.5));
  CHECK(elapsed(s1, 1, r1.completion(1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(elapsed(s1, 3, 1.0), std::invalid_argument);
}

TEST_CASE("round robin on frozen examples") {
  auto [s1, r1] = rr_parallel(make_instance({1, 1, 1}, {}, {}, 2), 2);
  CHECK(r1.completion(1) == doctest::Approx(1.5));
  CHECK(r1.objective == doctest::Approx(4.5));

  auto [s2, r2] = rr_parallel(make_instance({1, 1}, {}, {}, 2), 2);
  CHECK(r2.completion(1) == doctest::Approx(1.0));
  CHECK(r2.completion(2) == doctest::Approx(1.0));

  // n equal jobs on one machine all complete at n p.
  const int n = 8;
  Instance equal = make_instance(std::vector<double>(n, 1.0));
  auto [s3, r3] = rr_parallel(equal, 1);
  for (int j = 1; j <= n; ++j) CHECK(r3.completion(j) == doctest::Approx(n));
}

TEST_CASE("wsetf order property") {
  Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    Instance instance = random_instance(rng, 10, false, 0.7);
    auto [schedule, report] = wsetf(instance);
    for (const Job& j : instance.jobs) {
      for (const Job& k : instance.jobs) {
        if (k.r < report.completion(j.index) &&
            k.smith() <= j.smith() * (1.0 - 1e-12)) {
          CHECK(report.completion(j.index) >=
                report.completion(k.index) * (1.0 - 1e-9));
        }
      }
    }
  }
}

TEST_CASE("wsetf no-release identity") {
  Rng rng(32);
  for (int trial = 0; trial < 150; ++trial) {
    Instance instance = sort_by_smith(random_instance(rng, 10, false, 0.0));
    auto [schedule, report] = wsetf(instance);
    CompletionReport opt = wspt_opt(instance);
    for (int j = 1; j <= instance.size(); ++j) {
      double lhs = instance.job(j).w * report.completion(j);
      double rhs = instance.job(j).w * opt.completion(j);
      for (int k = j + 1; k <= instance.size(); ++k) {
        rhs += instance.job(k).w * instance.job(j).p;
      }
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("pwspt dominates wsetf per job") {
  Rng rng(33);
  for (int trial = 0; trial < 150; ++trial) {
    Instance instance = random_instance(rng, 10, false, 0.8);
    CompletionReport w = wsetf(instance).second;
    CompletionReport p = pwspt(instance).second;
    for (int j = 1; j <= instance.size(); ++j) {
      CHECK(p.completion(j) <= w.completion(j) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("mean busy duality") {
  Rng rng(34);
  for (int trial = 0; trial < 80; ++trial) {
    Instance instance = random_instance(rng, 8, false, 0.6);
    auto [schedule, report] = pwspt(instance);
    std::vector<double> m = mean_busy_times(schedule, instance);
    for (int j = 1; j <= instance.size(); ++j) {
      CHECK(m[j - 1] ==
            doctest::Approx(unfinished_integral(schedule, instance, j))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("eta segment integrals") {
  Rng rng(35);
  for (int trial = 0; trial < 60; ++trial) {
    Instance instance = sort_by_smith(random_instance(rng, 7, false, 0.6));
    auto [schedule, report] = pwspt(instance);
    for (int k = 1; k <= instance.size(); ++k) {
      for (int j = 1; j <= instance.size(); ++j) {
        double integral =
            eta_integral_over_unit_segments(schedule, instance, k, j);
        double expected;
        if (k < j) {
          double zeta = elapsed(schedule, j, report.completion(k)) /
                        instance.job(j).p;
          expected = zeta * instance.job(k).p;
        } else if (k == j) {
          expected = instance.job(j).p / 2.0;
        } else {
          double zeta = elapsed(schedule, k, report.completion(j)) /
                        instance.job(k).p;
          expected = (1.0 - zeta) * instance.job(k).p;
        }
        CHECK(integral == doctest::Approx(expected).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("wsetf cost at most twice the weighted mean busy time") {
  Rng rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    Instance instance = random_instance(rng, 12, false, 0.8);
    double lhs = wsetf(instance).second.objective;
    auto [schedule, report] = pwspt(instance);
    std::vector<double> m = mean_busy_times(schedule, instance);
    double rhs = 0.0;
    for (const Job& j : instance.jobs) rhs += j.w * m[j.index - 1];
    CHECK(lhs <= 2.0 * rhs * (1.0 + 1e-9));
  }
}

TEST_CASE("no idling while work is available") {
  Rng rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    Instance instance = random_instance(rng, 8, false, 0.6);
    auto [schedule, report] = wsetf(instance);
    for (size_t i = 0; i < schedule.rates.size(); ++i) {
      double a = schedule.breakpoints[i];
      double b = schedule.breakpoints[i + 1];
      double mid = 0.5 * (a + b);
      double total_rate = 0.0;
      for (double rate : schedule.rates[i]) total_rate += rate;
      bool available = false;
      for (const Job& j : instance.jobs) {
        if (j.r <= mid && mid < report.completion(j.index)) available = true;
      }
      if (available) CHECK(total_rate == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("rate schedules integrate to the reported completions") {
  Rng rng(38);
  for (int trial = 0; trial < 60; ++trial) {
    Instance instance = random_instance(rng, 9, false, 0.5);
    for (auto* fn : {&wsetf, &pwspt}) {
      auto [schedule, report] = (*fn)(instance);
      std::vector<double> recomputed = completions_from_rates(schedule, instance);
      for (int j = 1; j <= instance.size(); ++j) {
        CHECK(recomputed[j - 1] ==
              doctest::Approx(report.completion(j)).epsilon(1e-9));
      }
    }
  }
}
