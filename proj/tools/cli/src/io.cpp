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

#include "permflow/cli/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "permflow/error.hpp"

namespace permflow::cli {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_error(std::string(what) + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    parse_error(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

unsigned get_unsigned(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) parse_error(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<unsigned>();
}

}  // namespace

std::string matrix_to_text(const ComplexMatrix& m) {
  std::ostringstream os;
  os << "{\n  \"rows\": " << m.rows() << ",\n  \"cols\": " << m.cols() << ",\n  \"data\": [";
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    os << (k == 0 ? "" : ",") << (k % m.cols() == 0 ? "\n    " : " ") << "[" << format_double(z.real()) << ", "
       << format_double(z.imag()) << "]";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

ComplexMatrix matrix_from_text(std::string_view text) {
  const json doc = parse_json(text, "matrix document");
  if (!doc.is_object()) parse_error("matrix document must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "rows" && key != "cols" && key != "data") parse_error("unknown matrix field '" + key + "'");
  }
  if (!doc.contains("rows") || !doc.contains("cols") || !doc.contains("data")) {
    parse_error("matrix document needs rows, cols and data");
  }
  const unsigned rows = get_unsigned(doc, "rows");
  const unsigned cols = get_unsigned(doc, "cols");
  const json& data = doc.at("data");
  if (!data.is_array()) parse_error("matrix data must be an array");
  if (data.size() != static_cast<std::size_t>(rows) * cols) {
    parse_error("matrix data has " + std::to_string(data.size()) + " entries, expected " +
                std::to_string(static_cast<std::size_t>(rows) * cols));
  }
  std::vector<Complex> values;
  values.reserve(data.size());
  for (const json& entry : data) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
      parse_error("matrix entries must be [real, imaginary] number pairs");
    }
    values.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  return ComplexMatrix(rows, cols, std::move(values));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) parse_error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) parse_error("failed writing '" + path.string() + "'");
}

ComplexMatrix read_matrix(const std::filesystem::path& path) { return matrix_from_text(read_file(path)); }

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m) { write_file(path, matrix_to_text(m)); }

FixedPointConfig fixed_config_from_text(std::string_view text) {
  const json doc = parse_json(text, "fixed-point config");
  if (!doc.is_object()) parse_error("fixed-point config must be an object");
  FixedPointConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "input_bits") {
      config.input_bits = get_unsigned(doc, "input_bits");
    } else if (key == "input_fraction_bits") {
      config.input_fraction_bits = get_unsigned(doc, "input_fraction_bits");
    } else if (key == "accumulator_bits") {
      config.accumulator_bits = get_unsigned(doc, "accumulator_bits");
    } else if (key == "accumulator_integer_bits") {
      config.accumulator_integer_bits = get_unsigned(doc, "accumulator_integer_bits");
    } else if (key == "tree_widths") {
      if (!value.is_array()) parse_error("tree_widths must be an array");
      config.tree_widths.clear();
      for (const json& w : value) {
        if (!w.is_number_unsigned()) parse_error("tree widths must be non-negative integers");
        config.tree_widths.push_back(w.get<unsigned>());
      }
    } else {
      parse_error("unknown fixed-point config field '" + key + "'");
    }
  }
  config.validate();
  return config;
}

std::string fixed_config_to_text(const FixedPointConfig& config) {
  json doc;
  doc["input_bits"] = config.input_bits;
  doc["input_fraction_bits"] = config.input_fraction_bits;
  doc["tree_widths"] = config.tree_widths;
  doc["accumulator_bits"] = config.accumulator_bits;
  doc["accumulator_integer_bits"] = config.accumulator_integer_bits;
  return doc.dump(2) + "\n";
}

std::string bench_to_csv(const std::vector<BenchRecord>& records) {
  std::string out(kBenchHeader);
  out += '\n';
  for (const BenchRecord& r : records) {
    out += std::to_string(r.n) + "," + std::to_string(r.m) + "," + format_double(r.loss) + "," +
           format_double(r.seconds_per_sample) + "," + std::to_string(r.samples) + "\n";
  }
  return out;
}

std::vector<BenchRecord> bench_from_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  bool header = true;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      if (line != kBenchHeader) parse_error("bench CSV must start with header '" + std::string(kBenchHeader) + "'");
      header = false;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 5) parse_error("bench CSV line " + std::to_string(line_no) + ": expected 5 fields");
    BenchRecord r;
    r.n = parse_number<unsigned>(fields[0], "photon count");
    r.m = parse_number<unsigned>(fields[1], "mode count");
    r.loss = parse_number<double>(fields[2], "transmission");
    r.seconds_per_sample = parse_number<double>(fields[3], "seconds per sample");
    r.samples = parse_number<std::uint64_t>(fields[4], "sample count");
    records.push_back(r);
  }
  if (header) parse_error("bench CSV is empty");
  return records;
}

std::string samples_to_text(const std::vector<SampleRecord>& samples, bool with_meta) {
  std::string out;
  for (const SampleRecord& s : samples) {
    out += s.output_state.to_string();
    if (with_meta) out += " " + std::to_string(s.seed) + " " + format_double(s.elapsed);
    out += '\n';
  }
  return out;
}

std::vector<unsigned> parse_unsigned_list(std::string_view text) {
  std::vector<unsigned> out;
  for (std::string_view part : split(text, ',')) out.push_back(parse_number<unsigned>(part, "integer"));
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (std::string_view part : split(text, ',')) out.push_back(parse_number<double>(part, "number"));
  return out;
}

}  // namespace permflow::cli
