// Copyright 2026 The Tempocast Authors. All Rights Reserved.
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

#include "tempocast/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tempocast::log {
namespace {

std::atomic<Level> g_level{Level::kWarning};
std::mutex g_mutex;

const char* tag(Level level) {
  switch (level) {
    case Level::kDebug:
      return "debug";
    case Level::kInfo:
      return "info";
    case Level::kWarning:
      return "warning";
    case Level::kError:
      return "error";
    case Level::kOff:
      break;
  }
  return "";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }

Level level() { return g_level.load(); }

void write(Level lvl, std::string_view message) {
  if (lvl < g_level.load() || lvl == Level::kOff) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[tempocast " << tag(lvl) << "] " << message << '\n';
}

}  // namespace tempocast::log
