#pragma once

#include <filesystem>

#include "cef/io.hpp"
#include "cef/tables.hpp"

namespace cef::test {

inline std::filesystem::path data_dir() { return CEF_DATA_DIR; }

inline FreqTensor table1() {
  return normalize(read_count_csv(data_dir() / "table1.csv"));
}

inline FreqTensor table2() {
  return normalize(read_count_csv(data_dir() / "table2.csv"));
}

inline FreqTensor table4() {
  return normalize(read_count_json(data_dir() / "table4.json"));
}

inline FreqTensor uniform_tz() {
  return FreqTensor(axes_tz(), {0.25, 0.25, 0.25, 0.25});
}

inline FreqTensor uniform_atz() {
  return FreqTensor(axes_atz(), std::vector<double>(8, 0.125));
}

}  // namespace cef::test
