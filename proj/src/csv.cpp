//
// Copyright 2026 The sdcrisk Authors
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
//

#include "sdcrisk/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdcrisk {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

long long parse_int(const std::string& text, const std::string& what, size_t line_no) {
  size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) {
    throw std::invalid_argument("csv: line " + std::to_string(line_no) + ": " + what +
                                " '" + text + "' is not an integer");
  }
  return value;
}

double parse_real(const std::string& text, const std::string& what, size_t line_no) {
  size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) {
    throw std::invalid_argument("csv: line " + std::to_string(line_no) + ": " + what +
                                " '" + text + "' is not a number");
  }
  return value;
}

// Header positions of the wanted columns, by exact name.
std::vector<size_t> header_positions(const std::vector<std::string>& header,
                                     const std::vector<std::string>& wanted) {
  std::vector<size_t> positions;
  positions.reserve(wanted.size());
  for (const std::string& name : wanted) {
    size_t found = header.size();
    for (size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) {
        if (found != header.size()) {
          throw std::invalid_argument("csv: duplicate column '" + name + "'");
        }
        found = j;
      }
    }
    if (found == header.size()) {
      throw std::invalid_argument("csv: missing column '" + name + "'");
    }
    positions.push_back(found);
  }
  return positions;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("csv: cannot open '" + path + "' for reading");
  }
  return in;
}

}  // namespace

void write_freq_csv(std::ostream& os, const FreqTable& f) {
  const TableSchema& schema = f.schema();
  for (int a = 0; a < schema.m(); ++a) {
    os << schema.attribute(a).name << ',';
  }
  os << "count\n";
  for (const auto& [key, count] : f.cells()) {
    for (int a = 0; a < schema.m(); ++a) {
      os << key[a] << ',';
    }
    os << count << '\n';
  }
}

void write_freq_csv(const std::string& path, const FreqTable& f) {
  std::ostringstream out;
  write_freq_csv(out, f);
  write_file_atomic(path, out.str());
}

FreqTable read_freq_csv(std::istream& is, const TableSchema& schema) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::invalid_argument("csv: empty frequency table file");
  }
  std::vector<std::string> wanted;
  for (const Attribute& attr : schema.attributes()) wanted.push_back(attr.name);
  wanted.push_back("count");
  std::vector<size_t> pos = header_positions(split_line(line), wanted);

  FreqTable f(schema);
  size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_line(line);
    for (size_t p : pos) {
      if (p >= fields.size()) {
        throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                    ": too few fields");
      }
    }
    CellKey key;
    key.coords.reserve(static_cast<size_t>(schema.m()));
    for (int a = 0; a < schema.m(); ++a) {
      key.coords.push_back(static_cast<int>(parse_int(
          fields[pos[static_cast<size_t>(a)]], schema.attribute(a).name, line_no)));
    }
    long long count = parse_int(fields[pos.back()], "count", line_no);
    if (count < 0) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                  ": negative count");
    }
    if (count == 0) continue;
    if (f.count(key) != 0) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                  ": duplicate cell " + to_string(key));
    }
    if (!schema.valid(key)) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) + ": cell " +
                                  to_string(key) + " out of schema range");
    }
    f.add(key, count);
  }
  return f;
}

FreqTable read_freq_csv(const std::string& path, const TableSchema& schema) {
  std::ifstream in = open_input(path);
  return read_freq_csv(in, schema);
}

Microdata read_microdata_csv(std::istream& is, const TableSchema& schema) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::invalid_argument("csv: empty microdata file");
  }
  std::vector<std::string> header = split_line(line);
  std::vector<std::string> wanted;
  for (const Attribute& attr : schema.attributes()) wanted.push_back(attr.name);
  std::vector<size_t> schema_pos = header_positions(header, wanted);

  std::vector<bool> is_schema_col(header.size(), false);
  for (size_t p : schema_pos) is_schema_col[p] = true;
  std::vector<size_t> aux_pos;
  for (size_t j = 0; j < header.size(); ++j) {
    if (!is_schema_col[j]) aux_pos.push_back(j);
  }

  Microdata rows(schema);
  std::vector<std::vector<int>> aux_values(aux_pos.size());
  size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    std::vector<int> levels;
    levels.reserve(schema_pos.size());
    for (size_t a = 0; a < schema_pos.size(); ++a) {
      levels.push_back(static_cast<int>(
          parse_int(fields[schema_pos[a]], schema.attribute(static_cast<int>(a)).name,
                    line_no)));
    }
    rows.add_record(std::move(levels));
    for (size_t j = 0; j < aux_pos.size(); ++j) {
      aux_values[j].push_back(static_cast<int>(
          parse_int(fields[aux_pos[j]], header[aux_pos[j]], line_no)));
    }
  }
  for (size_t j = 0; j < aux_pos.size(); ++j) {
    rows.set_aux(header[aux_pos[j]], std::move(aux_values[j]));
  }
  return rows;
}

Microdata read_microdata_csv(const std::string& path, const TableSchema& schema) {
  std::ifstream in = open_input(path);
  return read_microdata_csv(in, schema);
}

std::map<std::vector<int>, double> read_margins_csv(std::istream& is,
                                                    const std::vector<std::string>& strata_attrs) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::invalid_argument("csv: empty margins file");
  }
  std::vector<std::string> wanted = strata_attrs;
  wanted.push_back("population_count");
  std::vector<size_t> pos = header_positions(split_line(line), wanted);

  std::map<std::vector<int>, double> margins;
  size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_line(line);
    for (size_t p : pos) {
      if (p >= fields.size()) {
        throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                    ": too few fields");
      }
    }
    std::vector<int> stratum;
    stratum.reserve(strata_attrs.size());
    for (size_t a = 0; a < strata_attrs.size(); ++a) {
      stratum.push_back(static_cast<int>(parse_int(fields[pos[a]], strata_attrs[a], line_no)));
    }
    double count = parse_real(fields[pos.back()], "population_count", line_no);
    if (!margins.emplace(std::move(stratum), count).second) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                  ": duplicate stratum");
    }
  }
  return margins;
}

std::map<std::vector<int>, double> read_margins_csv(const std::string& path,
                                                    const std::vector<std::string>& strata_attrs) {
  std::ifstream in = open_input(path);
  return read_margins_csv(in, strata_attrs);
}

void write_file_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("csv: cannot open '" + tmp + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
      throw std::runtime_error("csv: write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("csv: rename to '" + path + "' failed: " +
                             std::strerror(errno));
  }
}

}  // namespace sdcrisk
