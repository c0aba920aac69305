// Copyright (c) 2026, The alphakit Authors. All rights reserved.
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

#include "alphakit/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace alphakit {
namespace {

std::mutex g_log_mutex;
std::atomic<bool> g_quiet{false};

}  // namespace

void set_quiet(bool quiet) { g_quiet = quiet; }

void log_message(LogLevel level, std::string_view message) {
  if (g_quiet && level != LogLevel::kError) return;
  const char* tag = level == LogLevel::kInfo      ? "info"
                    : level == LogLevel::kWarning ? "warning"
                                                  : "error";
  std::lock_guard lock(g_log_mutex);
  std::cerr << "alphakit: " << tag << ": " << message << '\n';
}

}  // namespace alphakit
