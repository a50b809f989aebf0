// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gaborodo {

/// Column-oriented numeric CSV with a single header row. All project file
/// formats use '\n' line endings, '.' decimal separator, UTF-8.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;

  size_t n_rows() const { return cols.empty() ? 0 : cols[0].size(); }
  int column(const std::string& name) const;  // -1 if absent
  const std::vector<double>& col(const std::string& name) const;
  bool has(const std::string& name) const { return column(name) >= 0; }
};

CsvTable read_csv(const std::filesystem::path& path);

/// Write columns with per-column printf formats (e.g. "%.6f").
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& cols,
               const std::vector<std::string>& formats);

}  // namespace gaborodo
