#include <doctest.h>

#include <cmath>

#include "krs/extensions.hpp"
#include "krs/preemptive.hpp"
#include "testutil.hpp"

using namespace krs;
using namespace krs::testutil;

TEST_CASE("release variant on frozen examples") {
  // Shifted single job: idle to the release, then the usual closed form.
  auto [s1, r1] = simulate_bscaling_release(make_instance({1}, {}, {5}), 2.0);
  CHECK(r1.completion(1) == doctest::Approx(7.0));

  // Trivial releases reduce to the basic simulator.
  Instance both = make_instance({1, 1});
  auto base = simulate_bscaling(both, 2.0);
  auto released = simulate_bscaling_release(both, 2.0);
  CHECK(released.second.completion(1) ==
        doctest::Approx(base.second.completion(1)).epsilon(1e-9));
  CHECK(released.second.completion(2) ==
        doctest::Approx(base.second.completion(2)).epsilon(1e-9));

  // Fresh batch after an idle gap: geometric prefix then one full probe.
  auto [s3, r3] = simulate_bscaling_release(make_instance({1, 4}, {}, {0, 3}),
                                            2.0);
  CHECK(r3.completion(1) == doctest::Approx(2.0));
  CHECK(r3.completion(2) == doctest::Approx(11.0));
}

TEST_CASE("release variant reduces to the basic simulator on r = 0") {
  Rng rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    Instance instance = random_instance(rng, 9, trial % 2 == 0, 0.0);
    double b = 1.5 + 2.5 * rng.uniform();
    CompletionReport base = simulate_bscaling(instance, b).second;
    CompletionReport rel = simulate_bscaling_release(instance, b).second;
    for (int j = 1; j <= instance.size(); ++j) {
      CHECK(rel.completion(j) ==
            doctest::Approx(base.completion(j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("probing ends obey t + tau <= b t") {
  Rng rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    Instance instance = random_instance(rng, 8, false, 0.8);
    double b = 1.5 + 2.0 * rng.uniform();
    auto [schedule, report] = simulate_bscaling_release(instance, b);
    for (const ProbeSegment& seg : schedule.segments) {
      CHECK(seg.probe.start + seg.probe.budget <=
            b * seg.probe.start * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("parallel variant on frozen examples") {
  // n <= m: every job runs alone from time zero.
  auto [s1, r1] =
      simulate_bscaling_parallel(make_instance({3, 1}, {}, {}, 2), 2, 2.0);
  CHECK(r1.completion(1) == doctest::Approx(3.0));
  CHECK(r1.completion(2) == doctest::Approx(1.0));

  // One machine: when the first job completes at 3, one survivor remains,
  // so its next run is non-preemptive and finishes in one go at 3 + 3.
  auto [s2, r2] = simulate_bscaling_parallel(make_instance({1, 3}), 1, 2.0);
  CHECK(r2.completion(1) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(r2.completion(2) == doctest::Approx(6.0).epsilon(1e-8));

  auto [s3, r3] =
      simulate_bscaling_parallel(make_instance({1, 1, 1, 1}, {}, {}, 2), 2, 2.0);
  double opt = spt_list_parallel_opt(make_instance({1, 1, 1, 1}, {}, {}, 2))
                   .objective;
  CHECK(r3.objective <= (3.0 * 4.0 - 2.0) / (2.0 - 1.0) * opt);
}

TEST_CASE("parallel segments stay consistent") {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    Instance instance = random_instance(rng, 10, true, 0.0,
                                        1 + trial % 3);
    double b = 1.4 + 2.0 * rng.uniform();
    auto [schedule, report] =
        simulate_bscaling_parallel(instance, instance.machines, b);
    CHECK(objective_from_schedule(schedule, instance) ==
          doctest::Approx(report.objective).epsilon(1e-9));
    // Per-machine disjointness and no same-job overlap.
    std::vector<double> machine_end(schedule.machines, 0.0);
    std::vector<double> job_end(instance.size(), 0.0);
    for (const ProbeSegment& seg : schedule.segments) {
      CHECK(seg.probe.start >= machine_end[seg.machine - 1] - 1e-9);
      machine_end[seg.machine - 1] = seg.probe.start + seg.duration;
      CHECK(seg.probe.start >= job_end[seg.probe.job - 1] - 1e-9);
      job_end[seg.probe.job - 1] =
          std::max(job_end[seg.probe.job - 1], seg.probe.start + seg.duration);
    }
  }
}

TEST_CASE("rounding to power-of-b Smith ratios") {
  TransformedPair pair = transform_round_smith(make_instance({8}), 2.0);
  CHECK(pair.rounded.jobs[0].p == doctest::Approx(8.0));
  pair = transform_round_smith(make_instance({9}), 2.0);
  CHECK(pair.rounded.jobs[0].p == doctest::Approx(16.0));

  Instance with_releases = make_instance({1, 2}, {}, {0, 5});
  TransformedPair shifted = transform_round_smith(with_releases, 2.0);
  CHECK(shifted.rounded.jobs[0].r == 0.0);
  CHECK(shifted.rounded.jobs[1].r >= 5.0);
}

TEST_CASE("inflation") {
  Instance rounded = make_instance({4});
  Instance inflated = inflate(rounded, 2.0, InflateMode::single_machine);
  CHECK(inflated.jobs[0].p == doctest::Approx(8.0));

  Instance r9 = make_instance({9});
  CHECK(inflate(r9, 3.0, InflateMode::single_machine).jobs[0].p ==
        doctest::Approx(13.5));

  // p'' equals the total probing time sum_{i<=q} w b^i.
  double b = 2.7;
  double p_prime = 3.0 * std::pow(b, 2);  // w = 3, q = 2
  Instance weighted = make_instance({p_prime}, {3.0});
  double expected = 3.0 * std::pow(b, 3) / (b - 1.0);
  CHECK(inflate(weighted, b, InflateMode::single_machine).jobs[0].p ==
        doctest::Approx(expected));

  CHECK_THROWS_WITH_AS(inflate(make_instance({5}), 2.0,
                               InflateMode::single_machine),
                       "non-power-of-b input size", std::invalid_argument);
}

TEST_CASE("release-date transform chain") {
  Rng rng(54);
  double b = (9.0 + std::sqrt(17.0)) / 8.0;
  for (int trial = 0; trial < 60; ++trial) {
    Instance instance = random_instance(rng, 8, trial % 2 == 0, 0.7);
    double alg_original = simulate_bscaling_release(instance, b).second.objective;

    TransformedPair pair = transform_round_smith(instance, b);
    for (int j = 0; j < instance.size(); ++j) {
      CHECK(pair.rounded.jobs[j].p <=
            std::pow(b, 3) / (2.0 * b - 1.0) * instance.jobs[j].p * (1 + 1e-9));
      CHECK(pair.rounded.jobs[j].r <=
            std::pow(b, 3) / (2.0 * b - 1.0) * instance.jobs[j].r * (1 + 1e-9) +
                1e-12);
    }
    double alg_rounded =
        simulate_bscaling_release(pair.rounded, b).second.objective;
    CHECK(alg_original <= alg_rounded * (1.0 + 1e-7));

    Instance inflated = inflate(pair.rounded, b, InflateMode::single_machine);
    double wsetf_cost = wsetf(inflated).second.objective;
    CHECK(alg_rounded <= wsetf_cost * (1.0 + 1e-7));
  }
}

TEST_CASE("parallel guarantee against the exact optimum") {
  Rng rng(55);
  double b = (3.0 + std::sqrt(6.0)) / 3.0;
  double bound = 5.0 + 2.0 * std::sqrt(6.0);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 2 + trial % 3;
    Instance instance = random_instance(rng, 12, true, 0.0, m);
    double cost =
        simulate_bscaling_parallel(instance, m, b).second.objective;
    double opt = spt_list_parallel_opt(instance).objective;
    CHECK(cost <= bound * opt * (1.0 + 1e-9));
  }
}

TEST_CASE("scaled-domination bound for the parallel optimum") {
  Rng rng(56);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 1 + trial % 4;
    Instance instance = random_instance(rng, 10, true, 0.0, m);
    double alpha = 1.0 + 2.0 * rng.uniform();
    Instance dominated = instance;
    for (Job& job : dominated.jobs) job.p *= alpha * rng.uniform();
    double lhs = spt_list_parallel_opt(dominated).objective;
    double rhs = alpha * spt_list_parallel_opt(instance).objective;
    CHECK(lhs <= rhs * (1.0 + 1e-9));
  }
}
