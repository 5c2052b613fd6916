// Copyright 2026 The memprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scoring joined runs and aggregating them per task, per category and per
// parameter value.

#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "memprobe/metrics.hpp"
#include "memprobe/runner.hpp"

namespace memprobe {

inline constexpr std::string_view kWeightingNote =
    "task mean = unweighted mean of case scores; category mean = unweighted mean of its task "
    "means; overall = unweighted mean of category means; missing records score 0";

/// A run record joined with its case and scored. Carries enough of the case
/// to aggregate without the snapshot.
struct ScoredRecord {
  std::string case_id;
  Task task = Task::StringSearchWord;
  Json params;
  std::uint64_t master_seed = 0;
  std::string model_name;
  Score score;
  bool missing = false;
  std::optional<std::string> error;
  std::optional<std::string> raw_response;
};

inline Json scored_to_json(const ScoredRecord& s) {
  Json j{{"case_id", s.case_id},
         {"task", task_name(s.task)},
         {"category", category_name(category_of(s.task))},
         {"params", s.params},
         {"master_seed", s.master_seed},
         {"model_name", s.model_name},
         {"score", score_to_json(s.score)},
         {"missing", s.missing}};
  if (s.error) j["error"] = *s.error;
  if (s.raw_response) j["raw_response"] = *s.raw_response;
  return j;
}

inline ScoredRecord scored_from_json(const Json& j) {
  ScoredRecord s;
  s.case_id = j.at("case_id").get<std::string>();
  auto t = parse_task(j.at("task").get<std::string>());
  if (!t) throw ResponseMalformed("unknown task " + j.at("task").dump());
  s.task = *t;
  s.params = j.value("params", Json::object());
  s.master_seed = j.value("master_seed", std::uint64_t{0});
  s.model_name = j.value("model_name", std::string());
  s.score = score_from_json(j.at("score"));
  s.missing = j.value("missing", false);
  if (j.contains("error")) s.error = j["error"].get<std::string>();
  if (j.contains("raw_response")) s.raw_response = j["raw_response"].get<std::string>();
  return s;
}

inline void write_scored(const std::vector<ScoredRecord>& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scores: " + path);
  for (const auto& s : v) out << scored_to_json(s).dump() << '\n';
}

inline std::vector<ScoredRecord> read_scored(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scores: " + path);
  std::vector<ScoredRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(scored_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  return out;
}

/// Scores every case against its record. Cases without a record score 0 and
/// are flagged; a record naming an unknown case throws CaseRecordMismatch.
inline std::vector<ScoredRecord> evaluate(const std::vector<TestCase>& cases,
                                          const std::vector<RunRecord>& records) {
  std::unordered_map<std::string, const RunRecord*> by_id;
  for (const auto& r : records) {
    if (!by_id.emplace(r.case_id, &r).second)
      throw CaseRecordMismatch("duplicate record for case " + r.case_id);
  }
  std::unordered_map<std::string, bool> known;
  for (const auto& c : cases) known[c.id] = true;
  for (const auto& r : records)
    if (!known.count(r.case_id)) throw CaseRecordMismatch("record for unknown case " + r.case_id);

  std::string model = records.empty() ? std::string() : records.front().model_name;
  std::vector<ScoredRecord> out;
  out.reserve(cases.size());
  for (const auto& c : cases) {
    ScoredRecord s;
    s.case_id = c.id;
    s.task = c.task;
    s.params = c.params;
    s.master_seed = c.seed.master;
    s.model_name = model;
    auto it = by_id.find(c.id);
    if (it == by_id.end()) {
      s.missing = true;
      s.score = Score{0.0, c.metric, "missing record"};
    } else if (it->second->error) {
      s.error = it->second->error;
      s.score = Score{0.0, c.metric, "request failed"};
    } else {
      s.raw_response = it->second->raw_response;
      s.score = score_case(c, *it->second->raw_response);
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct MeanCount {
  double mean = 0.0;
  std::size_t count = 0;
};

struct Breakdown {
  Task task;
  std::string parameter;
  std::string value;
  MeanCount stat;
};

struct Report {
  std::string model_name;
  std::uint64_t master_seed = 0;
  std::vector<std::pair<Task, MeanCount>> per_task;
  std::vector<std::pair<Category, MeanCount>> per_category;
  MeanCount overall;
  std::vector<Breakdown> breakdowns;
  std::size_t missing_records = 0;
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline std::string value_label(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace detail

inline Report aggregate(const std::vector<ScoredRecord>& scored) {
  Report rep;
  if (!scored.empty()) {
    rep.model_name = scored.front().model_name;
    rep.master_seed = scored.front().master_seed;
  }
  std::map<Task, std::vector<double>> by_task;
  std::map<Task, std::map<std::string, std::map<Json, std::vector<double>>>> by_param;
  for (const auto& s : scored) {
    by_task[s.task].push_back(s.score.value);
    if (s.missing) ++rep.missing_records;
    for (auto it = s.params.begin(); it != s.params.end(); ++it)
      by_param[s.task][it.key()][it.value()].push_back(s.score.value);
  }

  std::map<Category, std::vector<double>> task_means;
  std::map<Category, std::size_t> cat_counts;
  for (const auto& [task, scores] : by_task) {
    const MeanCount mc{detail::mean_of(scores), scores.size()};
    rep.per_task.emplace_back(task, mc);
    task_means[category_of(task)].push_back(mc.mean);
    cat_counts[category_of(task)] += mc.count;
  }
  std::vector<double> cat_means;
  for (const auto& [cat, means] : task_means) {
    rep.per_category.emplace_back(cat, MeanCount{detail::mean_of(means), cat_counts[cat]});
    cat_means.push_back(rep.per_category.back().second.mean);
  }
  rep.overall = {detail::mean_of(cat_means), scored.size()};

  for (const auto& [task, params] : by_param) {
    for (const auto& [name, values] : params) {
      if (values.size() < 2) continue;
      for (const auto& [value, scores] : values)
        rep.breakdowns.push_back(
            {task, name, detail::value_label(value), {detail::mean_of(scores), scores.size()}});
    }
  }
  return rep;
}

inline Json report_to_json(const Report& r) {
  Json j{{"schema_version", kSchemaVersion},
         {"model_name", r.model_name},
         {"master_seed", r.master_seed},
         {"weighting", kWeightingNote},
         {"missing_records", r.missing_records},
         {"overall", {{"metric_mean", r.overall.mean}, {"case_count", r.overall.count}}}};
  Json cats = Json::array();
  for (const auto& [c, mc] : r.per_category)
    cats.push_back({{"name", category_name(c)}, {"metric_mean", mc.mean}, {"case_count", mc.count}});
  Json tasks = Json::array();
  for (const auto& [t, mc] : r.per_task)
    tasks.push_back({{"name", task_name(t)},
                     {"category", category_name(category_of(t))},
                     {"metric", metric_name(metric_of(t))},
                     {"metric_mean", mc.mean},
                     {"case_count", mc.count}});
  Json bds = Json::array();
  for (const auto& b : r.breakdowns)
    bds.push_back({{"task", task_name(b.task)},
                   {"parameter", b.parameter},
                   {"value", b.value},
                   {"metric_mean", b.stat.mean},
                   {"case_count", b.stat.count}});
  j["categories"] = cats;
  j["tasks"] = tasks;
  j["breakdowns"] = bds;
  return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Header `level,name,metric_mean,case_count`, then the overall row (named
/// "model=<name> seed=<master seed>"), categories, tasks and parameter
/// breakdowns ("task/parameter=value").
inline void write_report_csv(const Report& r, std::ostream& out) {
  using detail::csv_field;
  using detail::csv_number;
  out << "level,name,metric_mean,case_count\n";
  out << "overall,"
      << csv_field("model=" + r.model_name + " seed=" + std::to_string(r.master_seed)) << ','
      << csv_number(r.overall.mean) << ',' << r.overall.count << '\n';
  for (const auto& [c, mc] : r.per_category)
    out << "category," << csv_field(std::string(category_name(c))) << ',' << csv_number(mc.mean)
        << ',' << mc.count << '\n';
  for (const auto& [t, mc] : r.per_task)
    out << "task," << csv_field(std::string(task_name(t))) << ',' << csv_number(mc.mean) << ','
        << mc.count << '\n';
  for (const auto& b : r.breakdowns)
    out << "breakdown,"
        << csv_field(std::string(task_name(b.task)) + "/" + b.parameter + "=" + b.value) << ','
        << csv_number(b.stat.mean) << ',' << b.stat.count << '\n';
}

}  // namespace memprobe
