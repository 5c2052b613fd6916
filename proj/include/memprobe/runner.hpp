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

// Model execution: an OpenAI-compatible chat-completions client, built-in
// mock models, and a bounded-parallel suite runner.
//
// Request body:
//   {"model": ..., "messages": [{"role": "system", ...}, {"role": "user", ...}],
//    "temperature": 0, "top_p": 1, "max_tokens": 4096}
// The response text is read from choices[0].message.content.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "memprobe/metrics.hpp"
#include "memprobe/model.hpp"

namespace memprobe {

inline constexpr std::string_view kSystemPreamble =
    "You are a careful assistant. Answer using only the provided context.";

struct ModelConfig {
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env = "MODEL_API_KEY";
  double temperature = 0.0;
  double top_p = 1.0;
  std::int64_t max_output_tokens = 4096;
  double request_timeout_s = 300.0;
  int max_retries = 3;
  std::size_t parallelism = 4;
  double backoff_initial_s = 1.0;
};

struct RunRecord {
  std::string case_id;
  std::string model_name;
  std::optional<std::string> raw_response;
  std::optional<std::string> error;
  double latency_ms = 0.0;
  int attempt_count = 0;
  std::optional<Score> score;
};

inline Json record_to_json(const RunRecord& r) {
  Json j{{"case_id", r.case_id}, {"model_name", r.model_name}};
  if (r.raw_response) j["raw_response"] = *r.raw_response;
  if (r.error) j["error"] = *r.error;
  j["latency_ms"] = r.latency_ms;
  j["attempt_count"] = r.attempt_count;
  if (r.score) j["score"] = score_to_json(*r.score);
  return j;
}

inline RunRecord record_from_json(const Json& j) {
  RunRecord r;
  r.case_id = j.at("case_id").get<std::string>();
  r.model_name = j.value("model_name", std::string());
  if (j.contains("raw_response")) r.raw_response = j["raw_response"].get<std::string>();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
  if (r.raw_response.has_value() == r.error.has_value())
    throw ResponseMalformed("record " + r.case_id + " needs exactly one of raw_response, error");
  r.latency_ms = j.value("latency_ms", 0.0);
  r.attempt_count = j.value("attempt_count", 0);
  if (j.contains("score")) r.score = score_from_json(j["score"]);
  return r;
}

inline void write_records(const std::vector<RunRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

inline void write_records(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write results: " + path);
  write_records(records, out);
}

inline std::vector<RunRecord> read_records(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  return out;
}

inline std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open results: " + path);
  return read_records(in);
}

// ---------------------------------------------------------------------------
// Mock models

struct MockModel {
  enum class Kind { Oracle, Empty, Echo, Scripted };
  Kind kind = Kind::Oracle;
  std::map<std::string, std::string> script;

  std::string name() const {
    switch (kind) {
      case Kind::Oracle: return "mock-oracle";
      case Kind::Empty: return "mock-empty";
      case Kind::Echo: return "mock-echo";
      case Kind::Scripted: return "mock-scripted";
    }
    return "mock";
  }

  std::string respond(const TestCase& c) const {
    switch (kind) {
      case Kind::Oracle: return render(c.reference);
      case Kind::Empty: return "";
      case Kind::Echo: return c.instruction;
      case Kind::Scripted: {
        auto it = script.find(c.id);
        return it == script.end() ? "" : it->second;
      }
    }
    return "";
  }
};

inline std::optional<MockModel::Kind> parse_mock_kind(std::string_view s) {
  if (s == "oracle") return MockModel::Kind::Oracle;
  if (s == "empty") return MockModel::Kind::Empty;
  if (s == "echo") return MockModel::Kind::Echo;
  if (s == "scripted") return MockModel::Kind::Scripted;
  return std::nullopt;
}

inline RunRecord query_mock(const MockModel& m, const TestCase& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord r;
  r.case_id = c.id;
  r.model_name = m.name();
  r.raw_response = m.respond(c);
  r.attempt_count = 1;
  r.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// HTTP client

inline Json chat_request_body(const ModelConfig& cfg, const TestCase& c) {
  return Json{{"model", cfg.model_name},
              {"messages",
               Json::array({Json{{"role", "system"}, {"content", kSystemPreamble}},
                            Json{{"role", "user"}, {"content", c.context + "\n\n" + c.instruction}}})},
              {"temperature", cfg.temperature},
              {"top_p", cfg.top_p},
              {"max_tokens", cfg.max_output_tokens}};
}

/// Splits "http://host:port/base" into ("http://host:port", "/base").
inline std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw TransportError("endpoint needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, ""};
  std::string path = url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, slash), path};
}

/// Bearer token from the configured environment variable; an empty variable
/// name means the endpoint needs no authentication.
inline std::optional<std::string> api_key(const ModelConfig& cfg) {
  if (cfg.api_key_env.empty()) return std::nullopt;
  const char* v = std::getenv(cfg.api_key_env.c_str());
  if (!v || !*v) throw AuthMissing("environment variable " + cfg.api_key_env + " is not set");
  return std::string(v);
}

/// Delay before retry `attempt` (1-based): initial * 2^(attempt-1), jittered
/// by up to 20% either way from a stream keyed on the case id.
inline double backoff_seconds(const ModelConfig& cfg, const std::string& case_id, int attempt) {
  Rng rng(detail::splitmix64(detail::fnv1a(case_id) + static_cast<std::uint64_t>(attempt)));
  const double base = cfg.backoff_initial_s * std::pow(2.0, attempt - 1);
  return base * (0.8 + 0.4 * rng.unit());
}

/// Parses choices[0].message.content.
inline std::string response_text(const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ResponseMalformed(std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ResponseMalformed(std::string("missing choices[0].message.content: ") + e.what());
  }
}

/// Sends one case, retrying transport failures, 429 and 5xx. Failures after
/// the last retry are recorded in the record's error field. Throws
/// AuthMissing when the key variable is unset.
inline RunRecord query_model(const ModelConfig& cfg, const TestCase& c) {
  const auto key = api_key(cfg);
  const auto [host, base] = split_endpoint(cfg.endpoint_url);
  const auto body = chat_request_body(cfg, c).dump();

  RunRecord r;
  r.case_id = c.id;
  r.model_name = cfg.model_name;
  const auto t0 = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 1; attempt <= cfg.max_retries + 1; ++attempt) {
    r.attempt_count = attempt;
    bool retryable = false;
    try {
      httplib::Client client(host);
      if (!client.is_valid()) throw TransportError("unsupported endpoint " + host);
      const auto secs = static_cast<time_t>(cfg.request_timeout_s);
      const auto usecs = static_cast<time_t>((cfg.request_timeout_s - static_cast<double>(secs)) * 1e6);
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      client.set_write_timeout(secs, usecs);
      httplib::Headers headers;
      if (key) headers.emplace("Authorization", "Bearer " + *key);
      auto res = client.Post(base + "/chat/completions", headers, body, "application/json");
      if (!res) {
        retryable = true;
        throw TransportError("transport error: " + httplib::to_string(res.error()));
      }
      if (res->status == 429 || res->status >= 500) {
        retryable = true;
        throw TransportError("HTTP " + std::to_string(res->status));
      }
      if (res->status < 200 || res->status >= 300)
        throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
      r.raw_response = response_text(res->body);
      r.error.reset();
      break;
    } catch (const Error& e) {
      last_error = e.what();
    }
    if (!retryable || attempt == cfg.max_retries + 1) break;
    std::this_thread::sleep_for(
        std::chrono::duration<double>(backoff_seconds(cfg, c.id, attempt)));
  }
  if (!r.raw_response) r.error = last_error;
  r.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// Suite execution

using CaseQuery = std::function<RunRecord(const TestCase&)>;

/// Runs `query` over every case with at most `parallelism` calls in flight.
/// Records come back in case order; a throwing query becomes an error record.
inline std::vector<RunRecord> run_suite(const std::vector<TestCase>& cases, const CaseQuery& query,
                                        std::size_t parallelism, const std::string& model_name) {
  std::vector<RunRecord> records(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        records[i] = query(cases[i]);
      } catch (const std::exception& e) {
        RunRecord r;
        r.case_id = cases[i].id;
        r.model_name = model_name;
        r.error = e.what();
        records[i] = std::move(r);
      }
    }
  };
  const auto n = std::max<std::size_t>(1, std::min(parallelism, cases.size()));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

inline std::vector<RunRecord> run_suite(const ModelConfig& cfg, const std::vector<TestCase>& cases) {
  api_key(cfg);  // fail fast before any request
  return run_suite(cases, [&](const TestCase& c) { return query_model(cfg, c); }, cfg.parallelism,
                   cfg.model_name);
}

inline std::vector<RunRecord> run_suite(const MockModel& m, const std::vector<TestCase>& cases,
                                        std::size_t parallelism = 1) {
  return run_suite(cases, [&](const TestCase& c) { return query_mock(m, c); }, parallelism,
                   m.name());
}

}  // namespace memprobe
