#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cef/curve.hpp"
#include "cef/sensitivity.hpp"
#include "cef/tables.hpp"

namespace cef {

// 17-significant-digit, locale-independent formatting; all writers use it so
// equal runs produce byte-identical files.
std::string format_double(double v);

// CSV contingency tables: header names the axes plus a final `count` column
// (e.g. "a,t,z,count" or "t,z,count"), one row per cell, levels written as the
// level labels.  Every cell must appear exactly once.
CountTable read_count_csv(const std::filesystem::path& path);

// JSON contingency tables: {"axes": [...], "levels": {axis: [pos, neg]},
// "counts": [... canonical order ...], "n": optional total cross-check}.
CountTable read_count_json(const std::filesystem::path& path);

// Dispatch by extension (.csv / .json).
CountTable read_count_table(const std::filesystem::path& path);

// Density curves as "x,density" CSV records.
void write_curve_csv(const std::filesystem::path& path, const DensityCurve& curve);
DensityCurve read_curve_csv(const std::filesystem::path& path);

// Sweep results as one CSV table; fixed column order with per-cell errors in
// the final column.
void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepCellResult> rows);
std::vector<SweepCellResult> read_sweep_csv(const std::filesystem::path& path);

}  // namespace cef
