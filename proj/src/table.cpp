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

#include "sdcrisk/table.hpp"

#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sdcrisk {

std::string to_string(const CellKey& key) {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < key.size(); ++i) {
    if (i > 0) out << ",";
    out << key[i];
  }
  out << ")";
  return out.str();
}

TableSchema::TableSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  if (attributes_.empty()) {
    throw std::invalid_argument("schema: at least one attribute required");
  }
  std::set<std::string> names;
  cell_count_ = 1;
  for (const auto& a : attributes_) {
    if (a.levels < 1) {
      throw std::invalid_argument("schema: attribute '" + a.name +
                                  "' must have at least one level");
    }
    if (!names.insert(a.name).second) {
      throw std::invalid_argument("schema: duplicate attribute name '" + a.name + "'");
    }
    if (cell_count_ > std::numeric_limits<long long>::max() / a.levels) {
      throw std::invalid_argument("schema: cell count overflows");
    }
    cell_count_ *= a.levels;
  }
}

int TableSchema::index_of(const std::string& name) const {
  for (int i = 0; i < m(); ++i) {
    if (attributes_[static_cast<size_t>(i)].name == name) return i;
  }
  return -1;
}

std::vector<int> TableSchema::indices_of(const std::vector<std::string>& names) const {
  std::vector<int> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    int idx = index_of(name);
    if (idx < 0) {
      throw std::invalid_argument("schema: unknown attribute '" + name + "'");
    }
    out.push_back(idx);
  }
  return out;
}

bool TableSchema::valid(const CellKey& key) const {
  if (key.size() != m()) return false;
  for (int i = 0; i < m(); ++i) {
    if (key[i] < 0 || key[i] >= attributes_[static_cast<size_t>(i)].levels) return false;
  }
  return true;
}

TableSchema TableSchema::project(const std::vector<int>& attrs) const {
  if (attrs.empty()) {
    throw std::invalid_argument("schema: projection needs at least one attribute");
  }
  std::vector<Attribute> sub;
  sub.reserve(attrs.size());
  for (int i : attrs) {
    if (i < 0 || i >= m()) {
      throw std::invalid_argument("schema: attribute index out of range");
    }
    sub.push_back(attributes_[static_cast<size_t>(i)]);
  }
  return TableSchema(std::move(sub));
}

bool operator==(const TableSchema& a, const TableSchema& b) {
  if (a.m() != b.m()) return false;
  for (int i = 0; i < a.m(); ++i) {
    const Attribute& x = a.attribute(i);
    const Attribute& y = b.attribute(i);
    if (x.name != y.name || x.levels != y.levels || x.ordinal != y.ordinal) return false;
  }
  return true;
}

long long FreqTable::count(const CellKey& key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

void FreqTable::add(const CellKey& key, long long delta) {
  if (!schema_.valid(key)) {
    throw std::invalid_argument("schema: cell " + to_string(key) +
                                " invalid under schema");
  }
  if (delta == 0) return;
  long long& slot = counts_[key];
  slot += delta;
  if (slot < 0) {
    counts_.erase(key);
    throw std::invalid_argument("schema: cell " + to_string(key) +
                                " count would become negative");
  }
  if (slot == 0) counts_.erase(key);
  total_ += delta;
}

void Microdata::add_record(std::vector<int> levels) {
  if (static_cast<int>(levels.size()) != schema_.m()) {
    throw std::invalid_argument("schema: record has " + std::to_string(levels.size()) +
                                " values, schema has " + std::to_string(schema_.m()) +
                                " attributes");
  }
  records_.push_back(std::move(levels));
}

void Microdata::set_aux(const std::string& name, std::vector<int> values) {
  if (schema_.index_of(name) >= 0) {
    throw std::invalid_argument("schema: auxiliary attribute '" + name +
                                "' clashes with a schema attribute");
  }
  if (values.size() != records_.size()) {
    throw std::invalid_argument("schema: auxiliary attribute '" + name + "' has " +
                                std::to_string(values.size()) + " values for " +
                                std::to_string(records_.size()) + " records");
  }
  aux_[name] = std::move(values);
}

std::vector<int> Microdata::column(const std::string& name) const {
  int idx = schema_.index_of(name);
  if (idx >= 0) {
    std::vector<int> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r[static_cast<size_t>(idx)]);
    return out;
  }
  auto it = aux_.find(name);
  if (it == aux_.end()) {
    throw std::invalid_argument("schema: unknown column '" + name + "'");
  }
  if (it->second.size() != records_.size()) {
    throw std::invalid_argument("schema: auxiliary attribute '" + name +
                                "' not defined for every record");
  }
  return it->second;
}

FreqTable ingest_microdata(const Microdata& rows) {
  const TableSchema& schema = rows.schema();
  FreqTable table(schema);
  for (size_t i = 0; i < rows.record_count(); ++i) {
    const std::vector<int>& rec = rows.record(i);
    for (int a = 0; a < schema.m(); ++a) {
      int v = rec[static_cast<size_t>(a)];
      if (v < 0 || v >= schema.attribute(a).levels) {
        throw std::invalid_argument(
            "schema: record " + std::to_string(i) + " attribute '" +
            schema.attribute(a).name + "': level " + std::to_string(v) +
            " out of range [0," + std::to_string(schema.attribute(a).levels - 1) + "]");
      }
    }
    table.add(CellKey{rec}, 1);
  }
  return table;
}

std::vector<CellKey> sample_uniques(const FreqTable& f) {
  std::vector<CellKey> out;
  for (const auto& [key, count] : f.cells()) {
    if (count == 1) out.push_back(key);
  }
  return out;
}

FreqTable margin(const FreqTable& f, const std::vector<int>& attrs) {
  if (attrs.empty()) {
    throw std::invalid_argument("schema: margin needs a nonempty attribute set");
  }
  TableSchema sub = f.schema().project(attrs);
  FreqTable out(sub);
  for (const auto& [key, count] : f.cells()) {
    CellKey projected;
    projected.coords.reserve(attrs.size());
    for (int i : attrs) projected.coords.push_back(key[i]);
    out.add(projected, count);
  }
  return out;
}

}  // namespace sdcrisk
