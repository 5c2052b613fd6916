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

// memprobe: generate suites, run them against a model, score and report.
//
// Exit codes: 0 success, 1 operational error, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "memprobe/report.hpp"
#include "memprobe/runner.hpp"
#include "memprobe/selftest.hpp"
#include "memprobe/snapshot.hpp"

namespace {

using namespace memprobe;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  std::uint64_t seed = 0;
  std::string out;
  std::uint64_t context_tokens = 4000;
  std::string category, task, prompt_variant, config, vocab;
  std::int64_t steps = 0;
  bool gibberish = false;
  bool iterate_first = false;
};

SnapshotConfig build_config(const GenerateArgs& a, const CLI::App& cmd) {
  auto given = [&](const char* flag) { return cmd.get_option(flag)->count() > 0; };
  SnapshotConfig cfg = default_config();
  if (!a.config.empty()) apply_config_json(cfg, load_json_file(a.config));

  if (given("--seed")) cfg.master_seed = a.seed;
  if (given("--context-tokens")) {
    if (a.context_tokens == 0) throw UsageError("--context-tokens must be positive");
    cfg.budget.target_tokens = a.context_tokens;
  }
  if (given("--category")) {
    auto c = parse_category(a.category);
    if (!c) throw UsageError("unknown category '" + a.category + "'");
    cfg.category = c;
  }
  if (given("--task")) {
    auto t = parse_task(a.task);
    if (!t) throw UsageError("unknown task '" + a.task + "'");
    cfg.task = t;
  }
  if (given("--steps")) {
    if (a.steps < 1) throw UsageError("--steps must be at least 1");
    cfg.steps = a.steps;
  }
  if (given("--gibberish")) cfg.gibberish = true;
  if (given("--prompt-variant")) cfg.prompt_variant = a.prompt_variant;
  if (given("--iterate-first")) cfg.iterate_from = IterateFrom::First;
  if (given("--vocab")) cfg.vocabulary_path = a.vocab;
  if (cfg.prompt_variant != "v1" && cfg.prompt_variant != "v2")
    throw UsageError("unknown prompt variant '" + cfg.prompt_variant + "'");
  if (planned_case_count(cfg) == 0) throw UsageError("the selected grid is empty");
  return cfg;
}

int cmd_generate(const GenerateArgs& a, const CLI::App& cmd) {
  const auto cfg = build_config(a, cmd);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<TestCase> cases;
  try {
    cases = expand_snapshot(cfg);
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  } catch (const BudgetTooSmall& e) {
    throw UsageError(e.what());
  }
  write_snapshot(cases, a.out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "wrote " << cases.size() << " cases to " << a.out << " in "
            << text::format_number(std::round(secs * 100) / 100) << " s\n";
  return 0;
}

struct RunArgs {
  std::string snapshot, endpoint, mock, script, model, out;
  std::string api_key_env = "MODEL_API_KEY";
  std::size_t parallelism = 4;
  int max_retries = 3;
  double timeout = 300.0;
  double backoff = 1.0;
};

int cmd_run(const RunArgs& a) {
  if (a.endpoint.empty() == a.mock.empty())
    throw UsageError("give exactly one of --endpoint or --mock");
  if (a.parallelism == 0) throw UsageError("--parallelism must be at least 1");
  const auto cases = read_snapshot(a.snapshot);
  std::vector<RunRecord> records;
  if (!a.mock.empty()) {
    auto kind = parse_mock_kind(a.mock);
    if (!kind) throw UsageError("unknown mock '" + a.mock + "'");
    MockModel m{*kind, {}};
    if (*kind == MockModel::Kind::Scripted) {
      if (a.script.empty()) throw UsageError("--mock scripted needs --script");
      for (auto& [id, resp] : load_json_file(a.script).items()) m.script[id] = resp.get<std::string>();
    }
    records = run_suite(m, cases, a.parallelism);
  } else {
    if (a.model.empty()) throw UsageError("--endpoint needs --model");
    ModelConfig cfg;
    cfg.endpoint_url = a.endpoint;
    cfg.model_name = a.model;
    cfg.api_key_env = a.api_key_env;
    cfg.parallelism = a.parallelism;
    cfg.max_retries = a.max_retries;
    cfg.request_timeout_s = a.timeout;
    cfg.backoff_initial_s = a.backoff;
    records = run_suite(cfg, cases);
  }
  write_records(records, a.out);
  std::size_t errors = 0;
  for (const auto& r : records) errors += r.error.has_value();
  std::cerr << "wrote " << records.size() << " records to " << a.out << " (" << errors
            << " errors)\n";
  return 0;
}

int cmd_eval(const std::string& snapshot, const std::string& results, const std::string& out) {
  const auto scored = evaluate(read_snapshot(snapshot), read_records(results));
  write_scored(scored, out);
  std::cerr << "scored " << scored.size() << " cases into " << out << "\n";
  return 0;
}

int cmd_report(const std::string& scores, const std::string& format, const std::string& out) {
  const auto rep = aggregate(read_scored(scores));
  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::binary);
    if (!file) throw IoError("cannot write report: " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  if (format == "csv")
    write_report_csv(rep, os);
  else
    os << report_to_json(rep).dump(2) << '\n';
  return 0;
}

int cmd_selftest(const std::string& snapshot, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckResult> results;
  if (snapshot.empty()) {
    const auto cfg = default_config(seed);
    const auto cases = expand_snapshot(cfg);
    results.push_back(check_counts(cfg, cases));
    results.push_back(check_oracle_sweep(cases));
  } else {
    results.push_back(check_oracle_sweep(read_snapshot(snapshot)));
  }
  for (auto& r : check_metric_hand_cases()) results.push_back(std::move(r));
  for (auto& r : check_worked_examples()) results.push_back(std::move(r));

  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (ok ? "all checks passed" : "some checks failed") << " in "
            << text::format_number(std::round(secs * 100) / 100) << " s\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded synthetic memory tests for language models"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a test-case snapshot (JSONL)");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out", gen.out, "Output snapshot path")->required();
  g->add_option("--context-tokens", gen.context_tokens, "Context budget in estimated tokens");
  g->add_option("--category", gen.category, "Only this category");
  g->add_option("--task", gen.task, "Only this task");
  g->add_flag("--gibberish", gen.gibberish, "Use random letter strings instead of words");
  g->add_option("--prompt-variant", gen.prompt_variant, "Instruction phrasing: v1 or v2");
  g->add_option("--steps", gen.steps, "Step count for step-sized tasks");
  g->add_option("--config", gen.config, "JSON config file (flags take precedence)");
  g->add_option("--vocab", gen.vocab, "Vocabulary file, one word per line");
  g->add_flag("--iterate-first", gen.iterate_first, "Iterate asks for first words");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Query a model for every case of a snapshot");
  r->add_option("--snapshot", run.snapshot, "Snapshot path")->required();
  r->add_option("--endpoint", run.endpoint, "Chat-completions base URL, e.g. http://host:8000/v1");
  r->add_option("--mock", run.mock, "Built-in model: oracle, empty, echo or scripted");
  r->add_option("--script", run.script, "JSON object of case id to response (scripted mock)");
  r->add_option("--model", run.model, "Model name sent to the endpoint");
  r->add_option("--api-key-env", run.api_key_env, "Environment variable holding the API key");
  r->add_option("--parallelism", run.parallelism, "Requests in flight");
  r->add_option("--max-retries", run.max_retries, "Retries on transport errors and 5xx");
  r->add_option("--timeout", run.timeout, "Request timeout in seconds");
  r->add_option("--backoff", run.backoff, "Initial retry backoff in seconds");
  r->add_option("--out", run.out, "Results path")->required();

  std::string ev_snapshot, ev_results, ev_out;
  auto* e = app.add_subcommand("eval", "Score run records against a snapshot");
  e->add_option("--snapshot", ev_snapshot, "Snapshot path")->required();
  e->add_option("--results", ev_results, "Results path")->required();
  e->add_option("--out", ev_out, "Scores path")->required();

  std::string rp_scores, rp_format = "json", rp_out;
  auto* p = app.add_subcommand("report", "Aggregate scores per task and category");
  p->add_option("--scores", rp_scores, "Scores path")->required();
  p->add_option("--format", rp_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  p->add_option("--out", rp_out, "Output path (default stdout)");

  std::string st_snapshot;
  std::uint64_t st_seed = 0;
  auto* s = app.add_subcommand("selftest", "Run oracle, metric and count checks");
  s->add_option("--snapshot", st_snapshot, "Check this snapshot instead of a fresh one");
  s->add_option("--seed", st_seed, "Master seed for the fresh suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return cmd_generate(gen, *g);
    if (*r) return cmd_run(run);
    if (*e) return cmd_eval(ev_snapshot, ev_results, ev_out);
    if (*p) return cmd_report(rp_scores, rp_format, rp_out);
    if (*s) return cmd_selftest(st_snapshot, st_seed);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n" << app.help();
    return 2;
  } catch (const InvalidParams& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
