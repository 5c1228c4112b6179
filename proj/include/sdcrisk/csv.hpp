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

#ifndef SDCRISK_CSV_HPP_
#define SDCRISK_CSV_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sdcrisk/table.hpp"

namespace sdcrisk {

// Frequency table files: one coordinate column per schema attribute, in
// schema order and under the attribute names, then a `count` column. Rows
// are the nonzero cells in lexicographic order; zero cells are omitted.
void write_freq_csv(std::ostream& os, const FreqTable& f);
void write_freq_csv(const std::string& path, const FreqTable& f);
FreqTable read_freq_csv(std::istream& is, const TableSchema& schema);
FreqTable read_freq_csv(const std::string& path, const TableSchema& schema);

// Microdata files: a header of column names, one integer-coded record per
// row. Schema attributes are matched by name in any column order; columns
// not in the schema load as auxiliary attributes. Every schema attribute
// must be present.
Microdata read_microdata_csv(std::istream& is, const TableSchema& schema);
Microdata read_microdata_csv(const std::string& path, const TableSchema& schema);

// Population margin files for post-stratification: one column per stratum
// attribute (matched by name, any order) plus `population_count`. Keys are
// the stratum levels in strata_attrs order.
std::map<std::vector<int>, double> read_margins_csv(std::istream& is,
                                                    const std::vector<std::string>& strata_attrs);
std::map<std::vector<int>, double> read_margins_csv(const std::string& path,
                                                    const std::vector<std::string>& strata_attrs);

// Writes text to path atomically: a sibling temporary file is renamed over
// the target, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace sdcrisk

#endif  // SDCRISK_CSV_HPP_
