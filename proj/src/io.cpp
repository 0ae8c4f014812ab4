#include "cef/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cef/errors.hpp"

namespace cef {

namespace {

using nlohmann::json;

Axis axis_from_name(const std::string& name) {
  if (name == "a") return Axis::A;
  if (name == "t") return Axis::T;
  if (name == "z") return Axis::Z;
  throw InputError("unknown axis name '" + name + "' (expected a, t or z)");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::uint64_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (...) {
    throw InputError("invalid count '" + s + "'");
  }
  if (pos != s.size() || s.find('-') != std::string::npos) {
    throw InputError("counts must be non-negative integers, got '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw InputError("invalid number '" + s + "'");
  }
  if (pos != s.size()) throw InputError("invalid number '" + s + "'");
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw InputError("cannot write file: " + path.string());
  return out;
}

const std::array<std::string, 12>& sweep_columns() {
  static const std::array<std::string, 12> cols = {
      "alpha",     "delta",      "pte_mode",    "pte_sd",      "p_neg",
      "qzt_mode",  "qzt_sd",     "qztbar_mode", "qztbar_sd",   "accept_rate",
      "pte_mode_marginal", "errors"};
  return cols;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CountTable read_count_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV: " + path.string());
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.back() != "count") {
    throw InputError("CSV header must list axes followed by 'count'");
  }
  std::vector<BinaryAxis> axes;
  for (std::size_t i = 0; i + 1 < header.size(); ++i) {
    axes.push_back(BinaryAxis::standard(axis_from_name(header[i])));
  }
  const std::size_t n_cells = std::size_t{1} << axes.size();
  std::vector<std::uint64_t> counts(n_cells, 0);
  std::vector<bool> seen(n_cells, false);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw InputError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      int level;
      if (fields[i] == axes[i].positive) level = kPositive;
      else if (fields[i] == axes[i].negative) level = kNegative;
      else throw InputError("unknown level '" + fields[i] + "' for axis " +
                            axis_name(axes[i].id));
      idx = (idx << 1) | static_cast<std::size_t>(level);
    }
    if (seen[idx]) throw InputError("duplicate cell in CSV: " + line);
    seen[idx] = true;
    counts[idx] = parse_count(fields.back());
  }
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (!seen[i]) throw InputError("missing cell(s) in CSV: " + path.string());
  }
  return CountTable(std::move(axes), std::move(counts));
}

CountTable read_count_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw InputError("invalid JSON in " + path.string() + ": " + e.what());
  }
  if (!doc.contains("axes") || !doc["axes"].is_array()) {
    throw InputError("JSON table needs an 'axes' array");
  }
  std::vector<BinaryAxis> axes;
  for (const auto& a : doc["axes"]) {
    axes.push_back(BinaryAxis::standard(axis_from_name(a.get<std::string>())));
  }
  if (doc.contains("levels")) {
    for (auto& axis : axes) {
      const std::string key = axis_name(axis.id);
      if (doc["levels"].contains(key)) {
        const auto& lv = doc["levels"][key];
        if (!lv.is_array() || lv.size() != 2) {
          throw InputError("levels for axis " + key + " must be [positive, negative]");
        }
        axis.positive = lv[0].get<std::string>();
        axis.negative = lv[1].get<std::string>();
      }
    }
  }
  if (!doc.contains("counts") || !doc["counts"].is_array()) {
    throw InputError("JSON table needs a 'counts' array");
  }
  std::vector<std::uint64_t> counts;
  for (const auto& c : doc["counts"]) {
    if (!c.is_number_unsigned()) {
      throw InputError("counts must be non-negative integers");
    }
    counts.push_back(c.get<std::uint64_t>());
  }
  CountTable table(std::move(axes), std::move(counts));
  if (doc.contains("n")) {
    const auto n = doc["n"].get<std::uint64_t>();
    if (n != table.total()) {
      throw InputError("declared n=" + std::to_string(n) + " does not match cell sum " +
                       std::to_string(table.total()));
    }
  }
  return table;
}

CountTable read_count_table(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_count_csv(path);
  if (ext == ".json") return read_count_json(path);
  throw InputError("unsupported table format: " + path.string());
}

void write_curve_csv(const std::filesystem::path& path, const DensityCurve& curve) {
  std::ofstream out = open_output(path);
  out << "x,density\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << format_double(curve.x(i)) << "," << format_double(curve.density()[i]) << "\n";
  }
}

DensityCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"x", "density"}) {
    throw InputError("curve CSV must start with 'x,density'");
  }
  std::vector<double> xs, ds;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw InputError("curve CSV rows need 2 fields");
    xs.push_back(parse_double(fields[0]));
    ds.push_back(parse_double(fields[1]));
  }
  if (xs.size() < 2) throw InputError("curve CSV has fewer than 2 points");
  return DensityCurve(xs.front(), xs.back(), std::move(ds));
}

void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepCellResult> rows) {
  std::ofstream out = open_output(path);
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << "\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << "," << format_double(r.delta) << ",";
    if (r.ok()) {
      out << format_double(r.pte_mode) << "," << format_double(r.pte_sd) << ","
          << format_double(r.p_neg) << "," << format_double(r.qzt_mode) << ","
          << format_double(r.qzt_sd) << "," << format_double(r.qztbar_mode) << ","
          << format_double(r.qztbar_sd) << "," << format_double(r.accept_rate) << ","
          << format_double(r.pte_mode_marginal) << ",";
    } else {
      out << ",,,,,,,,,";
    }
    out << csv_escape(r.error) << "\n";
  }
}

std::vector<SweepCellResult> read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty sweep CSV");
  const auto header = split_csv_line(line);
  const auto& cols = sweep_columns();
  if (header.size() != cols.size()) {
    throw InputError("sweep CSV has unexpected column count");
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (header[i] != cols[i]) throw InputError("sweep CSV column mismatch: " + header[i]);
  }
  std::vector<SweepCellResult> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != cols.size()) throw InputError("sweep CSV row has wrong field count");
    SweepCellResult r;
    r.alpha = parse_double(f[0]);
    r.delta = parse_double(f[1]);
    r.error = f[11];
    if (r.ok()) {
      r.pte_mode = parse_double(f[2]);
      r.pte_sd = parse_double(f[3]);
      r.p_neg = parse_double(f[4]);
      r.qzt_mode = parse_double(f[5]);
      r.qzt_sd = parse_double(f[6]);
      r.qztbar_mode = parse_double(f[7]);
      r.qztbar_sd = parse_double(f[8]);
      r.accept_rate = parse_double(f[9]);
      r.pte_mode_marginal = parse_double(f[10]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace cef
