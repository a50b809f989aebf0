// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gaborodo {

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

const std::vector<double>& CsvTable::col(const std::string& name) const {
  int i = column(name);
  if (i < 0) throw std::runtime_error("csv: missing column '" + name + "'");
  return cols[static_cast<size_t>(i)];
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path.string());
  t.header = split_line(line);
  t.cols.resize(t.header.size());
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != t.header.size())
      throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(t.header.size()) + " in " + path.string());
    for (size_t i = 0; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      double v = 0.0;
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || p != f.data() + f.size())
        throw std::runtime_error("csv: bad number '" + f + "' at row " + std::to_string(row) +
                                 " in " + path.string());
      t.cols[i].push_back(v);
    }
  }
  return t;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& cols,
               const std::vector<std::string>& formats) {
  if (header.size() != cols.size() || header.size() != formats.size())
    throw std::invalid_argument("csv: header/cols/formats size mismatch");
  size_t n = cols.empty() ? 0 : cols[0]->size();
  for (const auto* c : cols)
    if (c->size() != n) throw std::invalid_argument("csv: ragged columns");

  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw std::runtime_error("csv: cannot write " + path.string());
  std::string head;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) head += ',';
    head += header[i];
  }
  head += '\n';
  std::fwrite(head.data(), 1, head.size(), f);
  char buf[64];
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < cols.size(); ++c) {
      int len = std::snprintf(buf, sizeof(buf), formats[c].c_str(), (*cols[c])[r]);
      if (c) std::fputc(',', f);
      std::fwrite(buf, 1, static_cast<size_t>(len), f);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace gaborodo
