#include "krs/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace krs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kFresh = std::numeric_limits<int>::min();

bool probe_succeeds(double p, double budget) {
  return p <= budget * (1.0 + kBoundaryTol);
}

double time_tol(double t) { return kBoundaryTol * (1.0 + std::abs(t)); }

}  // namespace

BScaleResult simulate_bscaling_release(const Instance& instance, double b) {
  if (instance.machines != 1) {
    throw std::invalid_argument("parallel variant is separate");
  }
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  const int n = instance.size();

  std::vector<int> rank(n, kFresh);
  std::vector<char> released(n, 0), done(n, 0);
  std::vector<int> round_done(n);
  for (int j = 0; j < n; ++j) {
    round_done[j] = completion_round(instance.jobs[j].smith(), b);
  }

  ProbeSchedule schedule;
  schedule.machines = 1;
  schedule.prefix_elapsed.assign(n, 0.0);
  std::vector<double> completions(n, 0.0);
  double theta = 0.0;
  int remaining = n;

  while (remaining > 0) {
    for (int j = 0; j < n; ++j) {
      if (!released[j] && instance.jobs[j].r <= theta + time_tol(theta)) {
        released[j] = 1;
      }
    }
    double next_release = kInf;
    for (int j = 0; j < n; ++j) {
      if (!released[j] && !done[j]) {
        next_release = std::min(next_release, instance.jobs[j].r);
      }
    }

    std::vector<int> fresh;
    int pick = -1;
    int old_rank = std::numeric_limits<int>::max();
    for (int j = 0; j < n; ++j) {
      if (!released[j] || done[j]) continue;
      if (rank[j] == kFresh) {
        fresh.push_back(j);
      } else {
        old_rank = std::min(old_rank, rank[j]);
        if (pick < 0 || rank[j] < rank[pick] ||
            (rank[j] == rank[pick] && j < pick)) {
          pick = j;
        }
      }
    }

    if (fresh.empty() && pick < 0) {
      if (next_release == kInf) {
        throw std::runtime_error("stalled with unfinished jobs");
      }
      theta = next_release;  // idle jump
      continue;
    }

    if (!fresh.empty()) {
      // Joint closed-form advance of the fresh batch: all rounds below the
      // target rank fail, so they collapse into one geometric block.
      double weight_sum = 0.0;
      int first_done = std::numeric_limits<int>::max();
      for (int j : fresh) {
        weight_sum += instance.jobs[j].w;
        first_done = std::min(first_done, round_done[j]);
      }
      int target = std::min(first_done, old_rank);
      double full_time = std::pow(b, target) / (b - 1.0) * weight_sum;
      if (theta + full_time > next_release + time_tol(next_release)) {
        // A release interrupts the batch; stop the analytic part at the
        // largest rank still ending before it, then probe explicitly.
        double gap = next_release - theta;
        int q = static_cast<int>(
            std::floor(std::log(gap * (b - 1.0) / weight_sum) / std::log(b)));
        while (std::pow(b, q) / (b - 1.0) * weight_sum >
               gap + time_tol(next_release)) {
          --q;
        }
        while (std::pow(b, q + 1) / (b - 1.0) * weight_sum <=
               gap + time_tol(next_release)) {
          ++q;
        }
        target = std::min(target, q);
        full_time = std::pow(b, target) / (b - 1.0) * weight_sum;
      }
      AnalyticPhase phase;
      phase.start = theta;
      phase.end = theta + full_time;
      phase.rank_reached = target;
      for (int j : fresh) {
        phase.jobs.push_back(j + 1);
        double share = instance.jobs[j].w * std::pow(b, target) / (b - 1.0);
        schedule.prefix_elapsed[j] += share;
        rank[j] = target;
      }
      schedule.prefix_time += full_time;
      schedule.phases.push_back(std::move(phase));
      theta += full_time;
      continue;
    }

    const Job& jb = instance.jobs[pick];
    int q = rank[pick];
    double budget = jb.w * std::pow(b, q);
    bool success = q >= round_done[pick];
    double duration = success ? jb.p : budget;
    schedule.segments.push_back(
        {1, {theta, pick + 1, budget, false}, duration, success});
    theta += duration;
    if (success) {
      completions[pick] = theta;
      done[pick] = 1;
      --remaining;
    } else {
      rank[pick] = q + 1;
    }
  }
  return {std::move(schedule), make_report(instance, std::move(completions))};
}

BScaleResult simulate_bscaling_parallel(const Instance& instance, int m,
                                        double b) {
  if (m < 1) throw std::invalid_argument("machine count must be positive");
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  if (!instance.unit_weights() || !instance.trivial_releases()) {
    throw std::invalid_argument(
        "parallel variant requires unit weights and trivial release dates");
  }
  const int n = instance.size();

  ProbeSchedule schedule;
  schedule.machines = m;
  schedule.prefix_elapsed.assign(n, 0.0);
  std::vector<double> completions(n, 0.0);
  std::vector<double> load(m, 0.0);
  std::vector<char> done(n, 0);      // known complete (end time passed)
  std::vector<char> probing(n, 0);   // has an unfinished assigned probe
  int remaining = n;

  // Explicit prefix rounds: start low enough that the truncated geometric
  // tail is below 1e-9 of the smallest job.
  double min_p = kInf;
  int c_min = std::numeric_limits<int>::max();
  std::vector<int> round_done(n);
  for (int j = 0; j < n; ++j) {
    min_p = std::min(min_p, instance.jobs[j].p);
    round_done[j] = completion_round(instance.jobs[j].p, b);
    c_min = std::min(c_min, round_done[j]);
  }
  int q_start = static_cast<int>(
      std::floor(std::log(1e-9 * min_p * (b - 1.0) / n) / std::log(b)));
  q_start = std::min(q_start, c_min - 1);
  const double tail = std::pow(b, q_start) / (b - 1.0);
  for (int j = 0; j < n; ++j) schedule.prefix_elapsed[j] = tail;
  schedule.prefix_time = n * tail;
  std::vector<int> rank(n, q_start);

  struct End {
    double time;
    int job;
    bool success;
    size_t segment;
    bool operator>(const End& other) const { return time > other.time; }
  };
  std::priority_queue<End, std::vector<End>, std::greater<End>> pending;

  double trigger_time = 0.0;
  bool do_finish = remaining <= m;

  // Pops the earliest probe end; returns true when its completion dropped
  // the survivor count to the machine count (the non-abort moment).
  auto process_one_end = [&]() {
    End top = pending.top();
    pending.pop();
    probing[top.job] = 0;
    if (top.success) {
      done[top.job] = 1;
      completions[top.job] = top.time;
      --remaining;
      if (remaining <= m) {
        trigger_time = top.time;
        return true;
      }
    }
    return false;
  };

  while (!do_finish) {
    double t_assign = *std::min_element(load.begin(), load.end());
    if (!pending.empty() &&
        pending.top().time <= t_assign + time_tol(t_assign)) {
      do_finish = process_one_end();
      continue;
    }
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (done[j] || probing[j]) continue;
      if (pick < 0 || rank[j] < rank[pick] ||
          (rank[j] == rank[pick] && j < pick)) {
        pick = j;
      }
    }
    if (pick < 0) {
      // Every survivor is on a machine; wait for the next end.
      if (pending.empty()) throw std::runtime_error("deadlocked schedule");
      do_finish = process_one_end();
      continue;
    }
    int machine = 0;
    for (int i = 1; i < m; ++i) {
      if (load[i] < load[machine]) machine = i;
    }
    int q = rank[pick];
    double budget = std::pow(b, q);
    bool success = q >= round_done[pick];
    double duration = success ? instance.jobs[pick].p : budget;
    double start = load[machine];
    schedule.segments.push_back(
        {machine + 1, {start, pick + 1, budget, false}, duration, success});
    load[machine] = start + duration;
    rank[pick] = q + 1;
    probing[pick] = 1;
    pending.push({start + duration, pick, success,
                  schedule.segments.size() - 1});
  }

  // Non-abort phase: probes already running keep their machine and finish
  // their job; probes planned beyond the trigger are dropped and re-planned
  // as non-preemptive runs on the least loaded machines.
  std::vector<size_t> cancelled;
  while (!pending.empty()) {
    End top = pending.top();
    pending.pop();
    ProbeSegment& seg = schedule.segments[top.segment];
    int j = top.job;
    probing[j] = 0;
    if (seg.probe.start <= trigger_time + time_tol(trigger_time)) {
      seg.probe.infinite = true;
      seg.duration = instance.jobs[j].p;
      seg.completed = true;
      completions[j] = seg.probe.start + seg.duration;
      done[j] = 1;
      --remaining;
    } else {
      cancelled.push_back(top.segment);
      rank[j] -= 1;
    }
  }
  if (!cancelled.empty()) {
    std::sort(cancelled.begin(), cancelled.end());
    std::vector<ProbeSegment> kept;
    kept.reserve(schedule.segments.size() - cancelled.size());
    size_t c = 0;
    for (size_t i = 0; i < schedule.segments.size(); ++i) {
      if (c < cancelled.size() && cancelled[c] == i) {
        ++c;
        continue;
      }
      kept.push_back(schedule.segments[i]);
    }
    schedule.segments = std::move(kept);
  }
  std::fill(load.begin(), load.end(), 0.0);
  for (const ProbeSegment& seg : schedule.segments) {
    load[seg.machine - 1] =
        std::max(load[seg.machine - 1], seg.probe.start + seg.duration);
  }
  std::vector<int> waiting;
  for (int j = 0; j < n; ++j) {
    if (!done[j]) waiting.push_back(j);
  }
  std::sort(waiting.begin(), waiting.end(), [&](int a, int c) {
    if (rank[a] != rank[c]) return rank[a] < rank[c];
    return a < c;
  });
  for (int j : waiting) {
    auto it = std::min_element(load.begin(), load.end());
    double start = std::max(*it, trigger_time);
    schedule.segments.push_back({static_cast<int>(it - load.begin()) + 1,
                                 {start, j + 1, 0.0, true},
                                 instance.jobs[j].p,
                                 true});
    *it = start + instance.jobs[j].p;
    completions[j] = *it;
    done[j] = 1;
    --remaining;
  }

  std::sort(schedule.segments.begin(), schedule.segments.end(),
            [](const ProbeSegment& a, const ProbeSegment& c) {
              return a.probe.start < c.probe.start;
            });
  return {std::move(schedule), make_report(instance, std::move(completions))};
}

namespace {

// One event of the recorded single-machine release schedule, in start order.
struct ReplayEvent {
  bool is_phase;
  double start;
  double length;     // phase length or probe duration
  int job;           // probe only
  double budget;     // probe only
  size_t index;      // position in the source vector
};

std::vector<ReplayEvent> merged_events(const ProbeSchedule& schedule) {
  std::vector<ReplayEvent> events;
  for (size_t i = 0; i < schedule.segments.size(); ++i) {
    const ProbeSegment& seg = schedule.segments[i];
    events.push_back({false, seg.probe.start, seg.duration, seg.probe.job,
                      seg.probe.budget, i});
  }
  for (size_t i = 0; i < schedule.phases.size(); ++i) {
    const AnalyticPhase& ph = schedule.phases[i];
    events.push_back({true, ph.start, ph.end - ph.start, 0, 0.0, i});
  }
  std::sort(events.begin(), events.end(),
            [](const ReplayEvent& a, const ReplayEvent& b) {
              return a.start < b.start;
            });
  return events;
}

}  // namespace

TransformedPair transform_round_smith(const Instance& instance, double b) {
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  TransformedPair pair;
  pair.original = instance;
  const int n = instance.size();
  pair.ranks.resize(n);
  pair.rounded = instance;
  for (int j = 0; j < n; ++j) {
    pair.ranks[j] = completion_round(instance.jobs[j].smith(), b);
    pair.rounded.jobs[j].p = instance.jobs[j].w * std::pow(b, pair.ranks[j]);
  }
  if (instance.machines > 1) {
    if (!instance.unit_weights() || !instance.trivial_releases()) {
      throw std::invalid_argument(
          "parallel rounding requires unit weights and trivial release dates");
    }
    return pair;
  }
  if (instance.trivial_releases()) return pair;

  // Replay the recorded probe sequence with rounded sizes, packed left with
  // no additional idle time, to locate the shifted end of the probe that was
  // running when each job arrived.
  auto [schedule, report] = simulate_bscaling_release(instance, b);
  (void)report;
  std::vector<ReplayEvent> events = merged_events(schedule);
  std::vector<double> shifted_end(events.size(), 0.0);
  double prev_end = 0.0;
  for (size_t i = 0; i < events.size(); ++i) {
    const ReplayEvent& ev = events[i];
    double start = std::max(prev_end, ev.start);
    double length = ev.length;
    if (!ev.is_phase) {
      int j = ev.job - 1;
      // Failed probes keep their budget; a completing probe now runs for the
      // rounded size, which still fits the same budget.
      length = probe_succeeds(pair.rounded.jobs[j].p, ev.budget)
                   ? pair.rounded.jobs[j].p
                   : ev.budget;
    }
    prev_end = start + length;
    shifted_end[i] = prev_end;
  }
  for (int j = 0; j < n; ++j) {
    double r = instance.jobs[j].r;
    if (r <= 0.0) continue;
    double end = 0.0;
    bool found = false;
    for (size_t i = 0; i < events.size(); ++i) {
      if (events[i].start < r) {
        end = shifted_end[i];
        found = true;
      } else {
        break;
      }
    }
    pair.rounded.jobs[j].r = found ? std::max(r, end) : r;
  }
  return pair;
}

Instance inflate(const Instance& rounded, double b, InflateMode mode) {
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
  const int n = rounded.size();
  std::vector<int> ranks(n);
  for (int j = 0; j < n; ++j) {
    double s = rounded.jobs[j].smith();
    int q = floor_log(s, b);
    if (!approx_eq(rounded.jobs[j].w * std::pow(b, q), rounded.jobs[j].p, 1e-9)) {
      throw std::invalid_argument("non-power-of-b input size");
    }
    ranks[j] = q;
  }
  Instance inflated = rounded;
  if (mode == InflateMode::single_machine) {
    for (int j = 0; j < n; ++j) inflated.jobs[j].p *= b / (b - 1.0);
    return inflated;
  }
  // Parallel mode: the cap rank is the largest rank among jobs that were
  // still aborted in the rounded run.
  auto [schedule, report] = simulate_bscaling_parallel(rounded,
                                                       rounded.machines, b);
  (void)report;
  std::vector<char> non_preempted(n, 0);
  for (const ProbeSegment& seg : schedule.segments) {
    if (seg.completed && seg.probe.infinite) non_preempted[seg.probe.job - 1] = 1;
  }
  int q_max = std::numeric_limits<int>::min();
  for (int j = 0; j < n; ++j) {
    if (!non_preempted[j]) q_max = std::max(q_max, ranks[j]);
  }
  if (q_max == std::numeric_limits<int>::min()) {
    int q_min = *std::min_element(ranks.begin(), ranks.end());
    q_max = q_min - 1;
  }
  for (int j = 0; j < n; ++j) {
    if (ranks[j] <= q_max) {
      inflated.jobs[j].p = std::pow(b, ranks[j] + 1) / (b - 1.0);
    } else {
      inflated.jobs[j].p = std::pow(b, q_max + 1) / (b - 1.0) + rounded.jobs[j].p;
    }
  }
  return inflated;
}

}  // namespace krs
