// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ergofit {

// Decimal text with 17 significant digits; round-trips 64-bit floats exactly.
std::string format_double(double v);

// Shortest decimal text that round-trips exactly (used in law ids and specs).
std::string format_double_short(double v);

double parse_double(const std::string& s);

// Minimal CSV helpers for the file formats this project defines. Values are
// comma separated, no quoting (none of our columns need it).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ergofit
