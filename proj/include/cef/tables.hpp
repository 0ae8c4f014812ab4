#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cef {

// The three binary variables of the data model.  Canonical ordering is
// a < t < z; every cell array in this library is laid out lexicographically
// over the present axes with the positive level (code +1) first.
enum class Axis : int { A = 0, T = 1, Z = 2 };

const char* axis_name(Axis axis);  // "a", "t", "z"

// Level index 0 is the positive level (A/T/Z, code +1),
// level index 1 the complement (code -1).
inline constexpr int kPositive = 0;
inline constexpr int kNegative = 1;

inline constexpr int level_code(int level) { return 1 - 2 * level; }

struct BinaryAxis {
  Axis id;
  std::string positive;  // label of the +1 level
  std::string negative;  // label of the -1 level

  static BinaryAxis standard(Axis axis);  // A/notA, T/notT, Z/notZ
};

// One cell coordinate: a level of a named axis.
struct AxisLevel {
  Axis axis;
  int level;  // kPositive or kNegative
};

// Raw contingency counts over 2 or 3 binary axes.
class CountTable {
 public:
  CountTable(std::vector<BinaryAxis> axes, std::vector<std::uint64_t> counts);

  const std::vector<BinaryAxis>& axes() const noexcept { return axes_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t n_cells() const noexcept { return counts_.size(); }

 private:
  std::vector<BinaryAxis> axes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
};

// A normalized frequency distribution over the 4- or 8-cell outcome space.
class FreqTensor {
 public:
  FreqTensor(std::vector<BinaryAxis> axes, std::vector<double> freqs);

  const std::vector<BinaryAxis>& axes() const noexcept { return axes_; }
  std::span<const double> freqs() const noexcept { return freqs_; }
  std::size_t n_axes() const noexcept { return axes_.size(); }
  std::size_t n_cells() const noexcept { return freqs_.size(); }
  double operator[](std::size_t cell) const { return freqs_[cell]; }

  bool has_axis(Axis axis) const noexcept;
  std::size_t axis_pos(Axis axis) const;  // throws InputError if absent

  // Flat cell index for one level per axis, in the tensor's axis order.
  std::size_t cell_index(std::span<const int> levels) const;

  // Level of `axis` within flat cell index.
  int level_of(std::size_t cell, Axis axis) const;

 private:
  std::vector<BinaryAxis> axes_;
  std::vector<double> freqs_;
};

// Nested-conditional coordinates of the 8-cell joint distribution:
// (q_A, q_T|A, q_T|~A, q_Z|A,T, q_Z|A,~T, q_Z|~A,T, q_Z|~A,~T).
struct ParamVector7 {
  std::array<double, 7> v{};

  double operator[](std::size_t i) const { return v[i]; }
  double& operator[](std::size_t i) { return v[i]; }

  static constexpr std::size_t kDim = 7;
  static const std::array<std::string, 7>& names();  // qA, qT_A, ...
};

// Coordinates of the 4-cell (t,z) distribution: (q_T, q_Z|T, q_Z|~T).
struct ParamVector3 {
  std::array<double, 3> v{};

  double operator[](std::size_t i) const { return v[i]; }
  double& operator[](std::size_t i) { return v[i]; }

  static constexpr std::size_t kDim = 3;
  static const std::array<std::string, 3>& names();  // qT, qZ_T, qZ_nT
};

// Raw cell assembly on fixed-size arrays; canonical layout, no validation.
// These are the inner loops of every posterior evaluation.
std::array<double, 8> joint_cells(const ParamVector7& theta);
std::array<double, 4> margin_cells(const ParamVector3& theta);
std::array<double, 4> margin_over_a(const std::array<double, 8>& cells);

FreqTensor normalize(const CountTable& table);
FreqTensor marginalize(const FreqTensor& f, Axis drop_axis);
double conditional(const FreqTensor& f, AxisLevel target, std::span<const AxisLevel> given);

FreqTensor assemble_joint(const ParamVector7& theta);
ParamVector7 decompose(const FreqTensor& f);

FreqTensor assemble_margin(const ParamVector3& theta);
ParamVector3 decompose_margin(const FreqTensor& f);

// Standard 3-axis (a,t,z) and 2-axis (t,z) / (a,z) axis sets.
std::vector<BinaryAxis> axes_atz();
std::vector<BinaryAxis> axes_tz();
std::vector<BinaryAxis> axes_az();

}  // namespace cef
