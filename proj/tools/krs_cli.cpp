// Command-line front end: instance simulation, ratio sweeps against exact or
// lower-bound baselines, lower-bound family tables, and eigenvalue/bound
// tables. Emits CSV or JSON for offline plotting.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "krs/adversary.hpp"
#include "krs/core.hpp"
#include "krs/extensions.hpp"
#include "krs/json_io.hpp"
#include "krs/killrestart.hpp"
#include "krs/preemptive.hpp"
#include "krs/spectral.hpp"

using nlohmann::json;

namespace {

int worker_count() {
  if (const char* env = std::getenv("KRS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct GeneratorSpec {
  int count = 0;
  int max_jobs = 10;
  std::uint64_t seed = 1;
  double release_density = 0.0;  // r ~ U[0, density * sum p]
  bool unit_weights = true;
  int machines = 1;
};

krs::Instance generate_instance(const GeneratorSpec& spec, int id) {
  std::mt19937_64 rng(krs::splitmix64(spec.seed + static_cast<std::uint64_t>(id)));
  auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  int n = 1 + static_cast<int>(uniform() * spec.max_jobs);
  n = std::min(n, spec.max_jobs);
  krs::Instance instance;
  instance.machines = spec.machines;
  double sum_p = 0.0;
  for (int j = 0; j < n; ++j) {
    krs::Job job;
    job.p = std::pow(10.0, -3.0 + 6.0 * uniform());  // log-uniform, 6 decades
    job.w = spec.unit_weights ? 1.0 : std::pow(10.0, -1.0 + 2.0 * uniform());
    sum_p += job.p;
    instance.jobs.push_back(job);
  }
  if (spec.release_density > 0.0) {
    for (krs::Job& job : instance.jobs) {
      job.r = uniform() * spec.release_density * sum_p;
    }
  }
  return krs::validate(std::move(instance));
}

struct StrategyRun {
  double cost = 0.0;
  std::string baseline_kind;
  double baseline = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
};

double mean_busy_lower_bound(const krs::Instance& instance) {
  auto [schedule, report] = krs::pwspt(instance);
  (void)report;
  std::vector<double> m = krs::mean_busy_times(schedule, instance);
  double total = 0.0;
  for (const krs::Job& job : instance.jobs) total += job.w * m[job.index - 1];
  return total;
}

StrategyRun run_strategy(const std::string& strategy, const krs::Instance& instance,
                         double b, std::uint64_t seed, int trials) {
  StrategyRun run;
  if (strategy == "bscale") {
    run.cost = krs::simulate_bscaling(instance, b).second.objective;
    run.bound = krs::det_guarantee(b);
  } else if (strategy == "bscale-rand") {
    run.cost = krs::expected_cost_mc(instance, b, {seed, trials}).mean;
    run.bound = krs::rand_guarantee(b);
  } else if (strategy == "bscale-rand-exact") {
    run.cost = krs::expected_cost_exact(instance, b);
    run.bound = krs::rand_guarantee(b);
  } else if (strategy == "wsetf") {
    run.cost = krs::wsetf(instance).second.objective;
    run.bound = 2.0;
  } else if (strategy == "pwspt") {
    run.cost = krs::pwspt(instance).second.objective;
  } else if (strategy == "rr") {
    run.cost = krs::rr_parallel(instance, instance.machines).second.objective;
    run.bound = 2.0;
  } else if (strategy == "bscale-release") {
    run.cost = krs::simulate_bscaling_release(instance, b).second.objective;
    run.bound = krs::release_guarantee(b);
  } else if (strategy == "bscale-parallel") {
    run.cost =
        krs::simulate_bscaling_parallel(instance, instance.machines, b)
            .second.objective;
    run.bound = krs::parallel_guarantee(b);
  } else {
    throw std::invalid_argument("unknown strategy name: " + strategy);
  }

  if (instance.trivial_releases() && instance.machines == 1) {
    run.baseline_kind = "exact-wspt";
    run.baseline = krs::wspt_opt(instance).objective;
  } else if (instance.trivial_releases() && instance.unit_weights()) {
    run.baseline_kind = "exact-spt-parallel";
    run.baseline = krs::spt_list_parallel_opt(instance).objective;
  } else {
    run.baseline_kind = "mean-busy-lb";
    run.baseline = mean_busy_lower_bound(instance);
  }
  return run;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::invalid_argument("empty grid");
  return values;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_grid(text)) values.push_back(static_cast<int>(v));
  return values;
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

int cmd_simulate(const std::string& strategy, const std::string& instance_path,
                 double b, std::uint64_t seed, int trials,
                 const std::string& output) {
  krs::Instance instance = krs::load_instance(instance_path);
  json result;
  result["strategy"] = strategy;
  result["b"] = b;
  if (strategy == "bscale" || strategy == "bscale-release" ||
      strategy == "bscale-parallel") {
    krs::BScaleResult sim;
    if (strategy == "bscale") {
      sim = krs::simulate_bscaling(instance, b);
    } else if (strategy == "bscale-release") {
      sim = krs::simulate_bscaling_release(instance, b);
    } else {
      sim = krs::simulate_bscaling_parallel(instance, instance.machines, b);
    }
    result.update(krs::report_to_json(sim.second));
    result["schedule"] = krs::schedule_to_json(sim.first);
  } else if (strategy == "bscale-rand") {
    krs::McEstimate estimate = krs::expected_cost_mc(instance, b, {seed, trials});
    result["objective"] = estimate.mean;
    result["std_error"] = estimate.std_error;
    result["exact"] = instance.trivial_releases() && instance.machines == 1
                          ? json(krs::expected_cost_exact(instance, b))
                          : json();
  } else if (strategy == "wsetf" || strategy == "pwspt" || strategy == "rr") {
    krs::RateResult sim = strategy == "wsetf" ? krs::wsetf(instance)
                          : strategy == "pwspt"
                              ? krs::pwspt(instance)
                              : krs::rr_parallel(instance, instance.machines);
    result.update(krs::report_to_json(sim.second));
  } else {
    throw std::invalid_argument("unknown strategy name: " + strategy);
  }
  write_output(output, result.dump(2) + "\n");
  return 0;
}

int cmd_ratio_sweep(const std::string& strategy, const GeneratorSpec& gen,
                    const std::vector<double>& b_grid, std::uint64_t mc_seed,
                    int mc_trials, const std::string& format,
                    const std::string& output) {
  struct Row {
    int instance_id;
    double b;
    StrategyRun run;
  };
  std::vector<Row> rows;
  for (int id = 0; id < gen.count; ++id) {
    for (double b : b_grid) rows.push_back({id, b, {}});
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_text;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= rows.size() || failed.load()) return;
      try {
        krs::Instance instance = generate_instance(gen, rows[i].instance_id);
        rows[i].run = run_strategy(strategy, instance, rows[i].b, mc_seed,
                                   mc_trials);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_text = e.what();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  int workers = std::max(1, std::min<int>(worker_count(),
                                          static_cast<int>(rows.size())));
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (failed.load()) throw std::runtime_error(error_text);

  bool violated = false;
  std::ostringstream body;
  if (format == "csv") {
    body << "instance,strategy,b,cost,baseline_kind,baseline,ratio,bound\n";
  }
  json jrows = json::array();
  for (const Row& row : rows) {
    double ratio = row.run.cost / row.run.baseline;
    if (!std::isnan(row.run.bound) && row.run.baseline_kind.rfind("exact", 0) == 0 &&
        ratio > row.run.bound + 1e-9) {
      violated = true;
    }
    if (format == "csv") {
      body << row.instance_id << ',' << strategy << ',' << row.b << ','
           << row.run.cost << ',' << row.run.baseline_kind << ','
           << row.run.baseline << ',' << ratio << ',' << row.run.bound << "\n";
    } else {
      jrows.push_back({{"instance", row.instance_id},
                       {"strategy", strategy},
                       {"b", row.b},
                       {"cost", row.run.cost},
                       {"baseline_kind", row.run.baseline_kind},
                       {"baseline", row.run.baseline},
                       {"ratio", ratio},
                       {"bound", row.run.bound}});
    }
  }
  write_output(output, format == "csv" ? body.str() : jrows.dump(2) + "\n");
  return violated ? 1 : 0;
}

int cmd_lowerbound(const std::string& kind, double b, int n, double eps,
                   const std::vector<int>& l_list, double t, double eps_class,
                   int big_k, const std::string& format,
                   const std::string& output) {
  std::ostringstream body;
  json jrows = json::array();
  if (format == "csv") body << "kind,parameter,ratio,target\n";
  auto emit = [&](const std::string& k, double parameter, double ratio,
                  double target) {
    if (format == "csv") {
      body << k << ',' << parameter << ',' << ratio << ',' << target << "\n";
    } else {
      jrows.push_back({{"kind", k},
                       {"parameter", parameter},
                       {"ratio", ratio},
                       {"target", target}});
    }
  };
  if (kind == "adversary") {
    krs::BScalingOracle oracle(n, b);
    krs::AdversaryOutcome outcome = krs::adversary_instance(oracle, n, eps);
    emit(kind, n, outcome.ratio, 3.0 - 2.0 / (n + 1));
  } else if (kind == "det-family") {
    for (int L : l_list) {
      try {
        krs::GroupedInstance family = krs::det_lb_family(b, L, t, eps_class);
        double ratio = krs::det_cost_grouped(family) / krs::grouped_opt(family);
        emit(kind, L, ratio, krs::det_guarantee(b));
      } catch (const std::exception& e) {
        std::cerr << "L=" << L << ": " << e.what() << "\n";
        emit(kind, L, std::numeric_limits<double>::quiet_NaN(),
             krs::det_guarantee(b));
      }
    }
  } else if (kind == "rand-family") {
    for (int L : l_list) {
      try {
        krs::GroupedInstance family = krs::rand_lb_family(b, big_k, L, t);
        double ratio =
            krs::expected_cost_grouped(family) / krs::grouped_opt(family);
        emit(kind, L, ratio, krs::rand_guarantee(b));
      } catch (const std::exception& e) {
        std::cerr << "L=" << L << ": " << e.what() << "\n";
        emit(kind, L, std::numeric_limits<double>::quiet_NaN(),
             krs::rand_guarantee(b));
      }
    }
  } else {
    throw std::invalid_argument("unknown lower-bound kind: " + kind);
  }
  write_output(output, format == "csv" ? body.str() : jrows.dump(2) + "\n");
  return 0;
}

int cmd_eigen(const std::vector<double>& b_grid, const std::vector<int>& l_list,
              const std::vector<int>& k_list, const std::string& format,
              const std::string& output) {
  std::ostringstream body;
  json result;
  if (format == "csv") body << "table,b,parameter,value,reference\n";
  auto emit = [&](const std::string& table, double b, double parameter,
                  double value, double reference) {
    if (format == "csv") {
      body << table << ',' << b << ',' << parameter << ',' << value << ','
           << reference << "\n";
    } else {
      result[table].push_back({{"b", b},
                               {"parameter", parameter},
                               {"value", value},
                               {"reference", reference}});
    }
  };
  for (double b : b_grid) {
    emit("det", b, 0, krs::det_guarantee(b), 0);
    emit("rand", b, 0, krs::rand_guarantee(b), 0);
    emit("release", b, 0, krs::release_guarantee(b), 0);
    emit("parallel", b, 0, krs::parallel_guarantee(b), 0);
  }
  const char* names[4] = {"det", "rand", "release", "parallel"};
  auto curves = krs::bound_curves();
  for (int i = 0; i < 4; ++i) {
    emit(std::string("min-") + names[i], curves[i].minimizer, 0,
         curves[i].minimum, 0);
  }
  for (double b : b_grid) {
    double limit = 2.0 * (std::sqrt(b) - 1.0) / (b - 1.0);
    for (int L : l_list) {
      Eigen::VectorXd diag(L), sub(L - 1);
      diag(0) = 0.0;
      for (int i = 1; i < L; ++i) diag(i) = -2.0 / (b - 1.0);
      sub(0) = 1.0 / std::sqrt(b - 1.0);
      for (int i = 1; i + 1 < L; ++i) sub(i) = std::sqrt(b) / (b - 1.0);
      emit("zmax", b, L, krs::lambda_max_tridiagonal(diag, sub), limit);
    }
    for (int K : k_list) {
      double lb = std::log(b);
      double s_limit =
          -1.0 - 1.0 / lb + (2.0 * b - 1.0) / (std::sqrt(b) * lb);
      emit("sk", b, K, krs::rand_tk(b, K).tail_sum, s_limit);
    }
  }
  write_output(output, format == "csv" ? body.str() : result.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kill-and-restart scheduling strategies and bounds"};
  app.require_subcommand(1);

  std::string strategy = "bscale";
  std::string instance_path;
  std::string output;
  std::string format = "csv";
  double b = 3.0;
  std::uint64_t seed = 1;
  int trials = 1000;

  CLI::App* simulate = app.add_subcommand("simulate", "run one strategy on one instance");
  simulate->add_option("--strategy", strategy,
                       "bscale|bscale-rand|wsetf|pwspt|rr|bscale-release|bscale-parallel");
  simulate->add_option("--instance", instance_path, "instance JSON path")->required();
  simulate->add_option("--b", b, "scaling base");
  simulate->add_option("--seed", seed, "Monte-Carlo seed");
  simulate->add_option("--trials", trials, "Monte-Carlo trials");
  simulate->add_option("--output,-o", output, "output path (default stdout)");

  GeneratorSpec gen;
  std::string b_grid_text = "3";
  CLI::App* sweep = app.add_subcommand("ratio-sweep", "strategy/baseline ratios over random instances");
  sweep->add_option("--strategy", strategy, "strategy name");
  sweep->add_option("--b-grid", b_grid_text, "comma-separated b values");
  sweep->add_option("--count", gen.count, "number of random instances")->required();
  sweep->add_option("--max-jobs", gen.max_jobs, "maximum jobs per instance");
  sweep->add_option("--gen-seed", gen.seed, "generator seed");
  sweep->add_option("--release-density", gen.release_density,
                    "releases ~ U[0, density * sum p]; 0 = trivial");
  sweep->add_flag("--weighted{false}", gen.unit_weights,
                  "draw log-uniform weights instead of unit weights");
  sweep->add_option("--machines", gen.machines, "machine count");
  sweep->add_option("--seed", seed, "Monte-Carlo seed");
  sweep->add_option("--trials", trials, "Monte-Carlo trials");
  sweep->add_option("--format", format, "csv|json");
  sweep->add_option("--output,-o", output, "output path (default stdout)");

  std::string lb_kind = "det-family";
  int lb_n = 10;
  double lb_eps = 0.5;
  std::string l_list_text = "20,40,60";
  double family_t = 1e15;
  double family_eps = 0.0;
  int family_k = 20;
  CLI::App* lowerbound = app.add_subcommand("lowerbound", "lower-bound constructions");
  lowerbound->add_option("--kind", lb_kind, "adversary|det-family|rand-family");
  lowerbound->add_option("--b", b, "scaling base");
  lowerbound->add_option("--n", lb_n, "adversary job count");
  lowerbound->add_option("--eps", lb_eps, "adversary eps in (2/(n+1), 1]");
  lowerbound->add_option("--L-list", l_list_text, "family dimensions");
  lowerbound->add_option("--t", family_t, "family count scale");
  lowerbound->add_option("--class-eps", family_eps, "family size offset");
  lowerbound->add_option("--K", family_k, "randomized family subdivisions");
  lowerbound->add_option("--format", format, "csv|json");
  lowerbound->add_option("--output,-o", output, "output path (default stdout)");

  std::string eigen_b_grid = "2,3,4,8.16";
  std::string eigen_l_list = "50,200";
  std::string eigen_k_list = "100,10000";
  CLI::App* eigen_cmd = app.add_subcommand("eigen", "bound curves, minimizers, eigenvalue tables");
  eigen_cmd->add_option("--b-grid", eigen_b_grid, "comma-separated b values");
  eigen_cmd->add_option("--L-list", eigen_l_list, "matrix dimensions");
  eigen_cmd->add_option("--K-list", eigen_k_list, "subdivision counts");
  eigen_cmd->add_option("--format", format, "csv|json");
  eigen_cmd->add_option("--output,-o", output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(strategy, instance_path, b, seed, trials, output);
    }
    if (sweep->parsed()) {
      return cmd_ratio_sweep(strategy, gen, parse_grid(b_grid_text), seed,
                             trials, format, output);
    }
    if (lowerbound->parsed()) {
      return cmd_lowerbound(lb_kind, b, lb_n, lb_eps,
                            parse_int_grid(l_list_text), family_t, family_eps,
                            family_k, format, output);
    }
    if (eigen_cmd->parsed()) {
      return cmd_eigen(parse_grid(eigen_b_grid), parse_int_grid(eigen_l_list),
                       parse_int_grid(eigen_k_list), format, output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
