// Copyright 2026 The qalloc Authors
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

#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace qalloc {

// Variables, function names and qidxs are compared by name. Identity is
// purely syntactic, so plain strings are enough.
using VarName = std::string;
using FunName = std::string;
using Qidx = std::string;

// Names starting with this prefix are reserved for compiler-generated
// identifiers. The source parser rejects them, so fresh names can never
// collide with user-written ones.
inline constexpr char kReservedPrefix = '%';

inline bool is_reserved_name(const std::string& name) {
  return !name.empty() && name.front() == kReservedPrefix;
}

// Generator for reserved-prefix fresh names. One instance is created per
// allocation or simulation run; the counter is atomic so a single instance
// may also be shared across worker threads.
class FreshNames {
 public:
  VarName var() { return make("%v"); }
  VarName wire() { return make("%w"); }
  VarName rename() { return make("%r"); }
  Qidx qidx() { return make("%q"); }

 private:
  std::string make(const char* prefix) {
    // Zero-padded so lexicographic order equals creation order; the
    // allocator picks free qubits by smallest name.
    std::string digits = std::to_string(next_.fetch_add(1, std::memory_order_relaxed));
    if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
    return prefix + digits;
  }
  std::atomic<std::uint64_t> next_{0};
};

}  // namespace qalloc
