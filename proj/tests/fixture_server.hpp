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

// A local chat-completions endpoint for runner tests. It answers with the
// instruction part of the user message, counts requests in flight and can
// fail a number of requests with 500 before succeeding.

#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "memprobe/model.hpp"

namespace memprobe::testing {

class FixtureServer {
 public:
  explicit FixtureServer(std::chrono::milliseconds delay = std::chrono::milliseconds(20))
      : delay_(delay) {
    server_.new_task_queue = [] { return new httplib::ThreadPool(16); };
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

  void fail_first(int n) { failures_left_ = n; }
  void reject_with(int status) { reject_status_ = status; }

  int max_in_flight() const { return max_in_flight_; }
  int requests() const { return requests_; }

  std::string last_authorization() {
    std::lock_guard<std::mutex> lock(mu_);
    return last_auth_;
  }

  Json last_body() {
    std::lock_guard<std::mutex> lock(mu_);
    return last_body_;
  }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    const int now = ++in_flight_;
    for (int seen = max_in_flight_; now > seen && !max_in_flight_.compare_exchange_weak(seen, now);) {
    }
    ++requests_;
    std::this_thread::sleep_for(delay_);
    Json body = Json::parse(req.body);
    {
      std::lock_guard<std::mutex> lock(mu_);
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = body;
    }
    if (reject_status_) {
      res.status = reject_status_;
      res.set_content("{\"error\": \"rejected\"}", "application/json");
    } else if (failures_left_-- > 0) {
      res.status = 500;
      res.set_content("{\"error\": \"try again\"}", "application/json");
    } else {
      const auto user = body["messages"][1]["content"].get<std::string>();
      const auto cut = user.rfind("\n\n");
      Json reply{{"choices", Json::array({Json{{"index", 0},
                                               {"message",
                                                {{"role", "assistant"},
                                                 {"content", user.substr(cut + 2)}}}}})}};
      res.set_content(reply.dump(), "application/json");
    }
    --in_flight_;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::chrono::milliseconds delay_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::atomic<int> requests_{0};
  std::atomic<int> failures_left_{0};
  std::atomic<int> reject_status_{0};
  std::mutex mu_;
  std::string last_auth_;
  Json last_body_;
};

}  // namespace memprobe::testing
