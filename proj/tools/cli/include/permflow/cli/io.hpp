// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "permflow/fixedpoint.hpp"
#include "permflow/linalg.hpp"
#include "permflow/sampling.hpp"

namespace permflow::cli {

// Matrix documents: {"rows": r, "cols": c, "data": [[re, im], ...]} in
// row-major order. Numbers are written in shortest round-trip form.
std::string matrix_to_text(const ComplexMatrix& m);
ComplexMatrix matrix_from_text(std::string_view text);
ComplexMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m);

// {"input_bits": 64, "input_fraction_bits": 62, "tree_widths": [...],
//  "accumulator_bits": 192, "accumulator_integer_bits": 6}; absent keys keep
// their defaults, unknown keys are rejected.
FixedPointConfig fixed_config_from_text(std::string_view text);
std::string fixed_config_to_text(const FixedPointConfig& config);

inline constexpr std::string_view kBenchHeader = "n,m,eta,seconds_per_sample,samples";
inline constexpr std::string_view kAccuracyHeader = "engine,n,trials,median_rel_error,max_rel_error";

std::string bench_to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> bench_from_csv(std::string_view text);

// "1,0,2" per line; with_meta appends " <seed> <elapsed seconds>".
std::string samples_to_text(const std::vector<SampleRecord>& samples, bool with_meta);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<unsigned> parse_unsigned_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace permflow::cli
