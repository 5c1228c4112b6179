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

#ifndef SDCRISK_TABLE_HPP_
#define SDCRISK_TABLE_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sdcrisk {

// One attribute of a released table: coded with dense 0-based integer levels.
struct Attribute {
  std::string name;
  int levels = 0;
  bool ordinal = false;
};

// An m-dimensional cell index. Coordinates may lie outside the schema range
// for virtual boundary cells; TableSchema::valid() checks containment.
struct CellKey {
  std::vector<int> coords;

  int size() const { return static_cast<int>(coords.size()); }
  int operator[](int i) const { return coords[static_cast<size_t>(i)]; }
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

std::string to_string(const CellKey& key);

// Immutable description of an m-way table: attribute names, level counts,
// ordinality, and the total cell count K (product of the level counts).
class TableSchema {
 public:
  TableSchema() = default;
  explicit TableSchema(std::vector<Attribute> attributes);

  int m() const { return static_cast<int>(attributes_.size()); }
  long long cell_count() const { return cell_count_; }
  const Attribute& attribute(int i) const { return attributes_[static_cast<size_t>(i)]; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  // Index of the named attribute, or -1 when absent.
  int index_of(const std::string& name) const;
  // Indices for a list of names; throws on an unknown name.
  std::vector<int> indices_of(const std::vector<std::string>& names) const;

  bool valid(const CellKey& key) const;
  // Sub-schema keeping the given attribute indices, in the given order.
  TableSchema project(const std::vector<int>& attrs) const;

  friend bool operator==(const TableSchema&, const TableSchema&);

 private:
  std::vector<Attribute> attributes_;
  long long cell_count_ = 0;
};

// Sparse nonnegative counts over a schema. Absent keys mean zero; stored
// counts are always >= 1. Immutable once shared between workers.
class FreqTable {
 public:
  FreqTable() = default;
  explicit FreqTable(TableSchema schema) : schema_(std::move(schema)) {}

  const TableSchema& schema() const { return schema_; }
  long long count(const CellKey& key) const;
  long long total() const { return total_; }
  // Nonzero cells in lexicographic key order.
  const std::map<CellKey, long long>& cells() const { return counts_; }

  // Adds delta to a cell. The key must be valid under the schema and the
  // resulting count nonnegative.
  void add(const CellKey& key, long long delta);

 private:
  TableSchema schema_;
  std::map<CellKey, long long> counts_;
  long long total_ = 0;
};

// Integer-coded survey records over a schema, with optional auxiliary
// per-record attributes (used for post-stratification) keyed by name.
class Microdata {
 public:
  Microdata() = default;
  explicit Microdata(TableSchema schema) : schema_(std::move(schema)) {}

  const TableSchema& schema() const { return schema_; }
  size_t record_count() const { return records_.size(); }
  const std::vector<int>& record(size_t i) const { return records_[i]; }
  const std::vector<std::vector<int>>& records() const { return records_; }

  void add_record(std::vector<int> levels);
  void set_aux(const std::string& name, std::vector<int> values);
  bool has_aux(const std::string& name) const { return aux_.count(name) > 0; }
  const std::map<std::string, std::vector<int>>& aux() const { return aux_; }

  // Per-record values of a named column: a schema attribute or an auxiliary
  // attribute. Throws when the name is unknown.
  std::vector<int> column(const std::string& name) const;

 private:
  TableSchema schema_;
  std::vector<std::vector<int>> records_;
  std::map<std::string, std::vector<int>> aux_;
};

// Counts records per cell. Rejects out-of-range levels, naming the record
// index and attribute.
FreqTable ingest_microdata(const Microdata& rows);

// Keys with count exactly 1, in lexicographic order.
std::vector<CellKey> sample_uniques(const FreqTable& f);

// Collapses the table onto the given attribute indices; the sub-table total
// equals the input total.
FreqTable margin(const FreqTable& f, const std::vector<int>& attrs);

}  // namespace sdcrisk

#endif  // SDCRISK_TABLE_HPP_
