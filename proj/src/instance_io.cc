// Copyright 2026 The Authors.
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

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "crs/errors.h"
#include "crs/instance.h"

namespace crs {
namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw CrsError(ErrorCode::kParseError, fmt::format("line {}: {}", line, what));
}

bool parse_int(const std::string& token, int& out) {
  std::size_t used = 0;
  try {
    const long value = std::stol(token, &used);
    if (used != token.size() || value < 0 || value > 1'000'000'000) return false;
    out = static_cast<int>(value);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

Instance read_instance(std::istream& in) {
  std::string raw;
  int line_no = 0;
  int vertex_count = -1;
  std::vector<EdgeInput> edges;
  std::vector<int> edge_lines;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;

    if (tokens[0] == "n") {
      if (vertex_count >= 0) parse_fail(line_no, "duplicate 'n' directive");
      if (tokens.size() != 2 || !parse_int(tokens[1], vertex_count)) {
        parse_fail(line_no, "expected 'n <vertex_count>'");
      }
    } else if (tokens[0] == "e") {
      if (vertex_count < 0) parse_fail(line_no, "'e' before 'n'");
      int u = 0;
      int v = 0;
      if (tokens.size() != 4 || !parse_int(tokens[1], u) || !parse_int(tokens[2], v)) {
        parse_fail(line_no, "expected 'e <u> <v> <x>'");
      }
      const auto x = parse_weight(tokens[3]);
      if (!x) parse_fail(line_no, fmt::format("bad marginal '{}'", tokens[3]));
      edges.push_back({u, v, *x});
      edge_lines.push_back(line_no);
    } else {
      parse_fail(line_no, fmt::format("unknown directive '{}'", tokens[0]));
    }
  }
  if (vertex_count < 0) parse_fail(line_no, "missing 'n' directive");
  try {
    return build_instance(vertex_count, std::span<const EdgeInput>(edges));
  } catch (const CrsError& err) {
    // Point the validation failure at its source line.
    std::size_t idx = 0;
    if (std::sscanf(err.what(), "edge %zu", &idx) == 1 && idx < edge_lines.size()) {
      throw CrsError(err.code(), fmt::format("line {}: {}", edge_lines[idx], err.what()));
    }
    throw;
  }
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CrsError(ErrorCode::kIoError, fmt::format("cannot open '{}'", path));
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance) {
  out << "n " << instance.vertex_count() << '\n';
  for (const EdgeRecord& e : instance.edges()) {
    out << "e " << e.u << ' ' << e.v << ' ' << format_weight(e.x) << '\n';
  }
}

std::string instance_to_string(const Instance& instance) {
  std::ostringstream out;
  write_instance(out, instance);
  return out.str();
}

}  // namespace crs
