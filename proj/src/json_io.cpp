#include "krs/json_io.hpp"

#include <cmath>
#include <fstream>

namespace krs {

using nlohmann::json;

namespace {

double parse_count(const json& value) {
  double count = 0.0;
  if (value.is_string()) {
    const std::string& s = value.get_ref<const std::string&>();
    if (s.empty()) throw std::invalid_argument("empty class count");
    for (char c : s) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("class count must be a decimal integer");
      }
      count = count * 10.0 + (c - '0');
      if (count >= 9007199254740992.0) {
        throw std::invalid_argument("class count exceeds exact double range");
      }
    }
  } else {
    count = value.get<double>();
  }
  return count;
}

}  // namespace

Instance instance_from_json(const json& j) {
  Instance instance;
  instance.machines = j.value("machines", 1);
  if (!j.contains("jobs") || !j["jobs"].is_array()) {
    throw std::invalid_argument("instance needs a jobs array");
  }
  for (const json& item : j["jobs"]) {
    Job job;
    job.p = item.at("p").get<double>();
    job.w = item.value("w", 1.0);
    job.r = item.value("r", 0.0);
    instance.jobs.push_back(job);
  }
  return validate(std::move(instance));
}

GroupedInstance grouped_from_json(const json& j) {
  GroupedInstance grouped;
  grouped.base = j.at("b").get<double>();
  for (const json& item : j.at("classes")) {
    GroupedClass c;
    c.exponent = item.at("e").get<double>();
    c.count = parse_count(item.at("n"));
    c.epsilon = item.value("eps", 0.0);
    c.weight = item.value("w", 1.0);
    grouped.classes.push_back(c);
  }
  return normalize_grouped(std::move(grouped));
}

json instance_to_json(const Instance& instance) {
  json jobs = json::array();
  for (const Job& job : instance.jobs) {
    jobs.push_back({{"p", job.p}, {"w", job.w}, {"r", job.r}});
  }
  return {{"machines", instance.machines}, {"jobs", jobs}};
}

json grouped_to_json(const GroupedInstance& grouped) {
  json classes = json::array();
  for (const GroupedClass& c : grouped.classes) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.0f", c.count);
    classes.push_back({{"e", c.exponent},
                       {"n", std::string(buffer)},
                       {"eps", c.epsilon},
                       {"w", c.weight}});
  }
  return {{"b", grouped.base}, {"classes", classes}};
}

json report_to_json(const CompletionReport& report) {
  json completions = json::array();
  for (size_t j = 0; j < report.completions.size(); ++j) {
    completions.push_back(
        {{"job", static_cast<int>(j) + 1}, {"C", report.completions[j]}});
  }
  return {{"objective", report.objective}, {"completions", completions}};
}

json schedule_to_json(const ProbeSchedule& schedule) {
  json segments = json::array();
  for (const ProbeSegment& seg : schedule.segments) {
    segments.push_back({{"machine", seg.machine},
                        {"start", seg.probe.start},
                        {"job", seg.probe.job},
                        {"budget", seg.probe.infinite ? -1.0 : seg.probe.budget},
                        {"duration", seg.duration},
                        {"completed", seg.completed}});
  }
  json phases = json::array();
  for (const AnalyticPhase& phase : schedule.phases) {
    phases.push_back({{"start", phase.start},
                      {"end", phase.end},
                      {"jobs", phase.jobs},
                      {"rank", phase.rank_reached}});
  }
  return {{"machines", schedule.machines},
          {"prefix_time", schedule.prefix_time},
          {"prefix_elapsed", schedule.prefix_elapsed},
          {"segments", segments},
          {"phases", phases}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

Instance load_instance(const std::string& path) {
  return instance_from_json(load_json(path));
}

}  // namespace krs
