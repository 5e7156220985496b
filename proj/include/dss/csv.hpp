#pragma once

#include <string>
#include <vector>

namespace dss {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const;  // -1 when absent
};

// RFC 4180: quoted fields, escaped quotes, CRLF or LF line ends, mandatory header.
CsvTable read_csv(const std::string& path);

double parse_number(const std::string& cell, std::size_t row, std::size_t col);

// %.17g keeps doubles round-trippable and output byte-stable across reruns.
std::string format_double(double v);

void write_csv(const std::string& path, const CsvTable& table);

}  // namespace dss
