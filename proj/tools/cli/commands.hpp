// Copyright 2026 The rrgivens Authors.
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

#ifndef RRGIVENS_TOOLS_CLI_COMMANDS_HPP_
#define RRGIVENS_TOOLS_CLI_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rrgivens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class VerifyMode { kReal, kUnitary, kRestricted };

struct VerifyOptions {
  std::size_t n = 6;
  std::optional<std::size_t> m;
  std::size_t trials = 10;
  std::uint64_t seed = 42;
  VerifyMode mode = VerifyMode::kReal;
  std::size_t workers = 0;  // 0 selects the hardware concurrency
};

struct CheckOutcome {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct VerifyReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t parameters = 0;
  std::vector<CheckOutcome> checks;

  bool ok() const;
};

VerifyReport run_verify(const VerifyOptions& opts);

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> workers;
  std::size_t reps = 10;
  bool single_precision = false;
  bool include_backward = true;
  std::uint64_t seed = 42;
};

struct BenchRecord {
  std::size_t n = 0;
  std::string variant;
  std::size_t workers = 0;
  std::string precision;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  std::size_t reps = 0;
};

std::vector<BenchRecord> run_bench(const BenchOptions& opts);
void write_csv(std::ostream& os, const std::vector<BenchRecord>& records);

// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rrgivens::cli

#endif  // RRGIVENS_TOOLS_CLI_COMMANDS_HPP_
