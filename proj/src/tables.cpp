#include "cef/tables.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cef/errors.hpp"

namespace cef {

namespace {

constexpr double kSumTol = 1e-12;

void check_axes(const std::vector<BinaryAxis>& axes) {
  // tables carry 2 or 3 axes; 1-axis tensors arise only as marginals
  if (axes.empty() || axes.size() > 3) {
    throw InputError("tensor must have 1 to 3 axes, got " + std::to_string(axes.size()));
  }
  for (std::size_t i = 1; i < axes.size(); ++i) {
    if (static_cast<int>(axes[i].id) <= static_cast<int>(axes[i - 1].id)) {
      throw InputError("axes must be in canonical a < t < z order");
    }
  }
}

std::string level_label(const BinaryAxis& axis, int level) {
  return level == kPositive ? axis.positive : axis.negative;
}

}  // namespace

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::A: return "a";
    case Axis::T: return "t";
    case Axis::Z: return "z";
  }
  return "?";
}

BinaryAxis BinaryAxis::standard(Axis axis) {
  switch (axis) {
    case Axis::A: return {axis, "A", "notA"};
    case Axis::T: return {axis, "T", "notT"};
    case Axis::Z: return {axis, "Z", "notZ"};
  }
  throw InputError("unknown axis");
}

std::vector<BinaryAxis> axes_atz() {
  return {BinaryAxis::standard(Axis::A), BinaryAxis::standard(Axis::T),
          BinaryAxis::standard(Axis::Z)};
}

std::vector<BinaryAxis> axes_tz() {
  return {BinaryAxis::standard(Axis::T), BinaryAxis::standard(Axis::Z)};
}

std::vector<BinaryAxis> axes_az() {
  return {BinaryAxis::standard(Axis::A), BinaryAxis::standard(Axis::Z)};
}

CountTable::CountTable(std::vector<BinaryAxis> axes, std::vector<std::uint64_t> counts)
    : axes_(std::move(axes)), counts_(std::move(counts)) {
  if (axes_.size() < 2) {
    throw InputError("contingency tables need 2 or 3 axes");
  }
  check_axes(axes_);
  const std::size_t cells = std::size_t{1} << axes_.size();
  if (counts_.size() != cells) {
    throw InputError("expected " + std::to_string(cells) + " counts, got " +
                     std::to_string(counts_.size()));
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (total_ == 0) {
    throw InputError("contingency table has zero total count");
  }
}

FreqTensor::FreqTensor(std::vector<BinaryAxis> axes, std::vector<double> freqs)
    : axes_(std::move(axes)), freqs_(std::move(freqs)) {
  check_axes(axes_);
  const std::size_t cells = std::size_t{1} << axes_.size();
  if (freqs_.size() != cells) {
    throw InputError("expected " + std::to_string(cells) + " frequencies, got " +
                     std::to_string(freqs_.size()));
  }
  double sum = 0.0;
  for (double f : freqs_) {
    if (!(f >= 0.0) || f > 1.0 + kSumTol) {
      throw InputError("frequency outside [0, 1]: " + std::to_string(f));
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw InputError("frequencies sum to " + std::to_string(sum) + ", expected 1");
  }
}

bool FreqTensor::has_axis(Axis axis) const noexcept {
  for (const auto& a : axes_) {
    if (a.id == axis) return true;
  }
  return false;
}

std::size_t FreqTensor::axis_pos(Axis axis) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].id == axis) return i;
  }
  throw InputError(std::string("axis '") + axis_name(axis) + "' not present in tensor");
}

std::size_t FreqTensor::cell_index(std::span<const int> levels) const {
  if (levels.size() != axes_.size()) {
    throw InputError("level count does not match axis count");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] != kPositive && levels[i] != kNegative) {
      throw InputError("level index must be 0 or 1");
    }
    idx = (idx << 1) | static_cast<std::size_t>(levels[i]);
  }
  return idx;
}

int FreqTensor::level_of(std::size_t cell, Axis axis) const {
  const std::size_t pos = axis_pos(axis);
  const std::size_t shift = axes_.size() - 1 - pos;
  return static_cast<int>((cell >> shift) & 1u);
}

const std::array<std::string, 7>& ParamVector7::names() {
  static const std::array<std::string, 7> n = {"qA",    "qT_A",  "qT_nA", "qZ_AT",
                                               "qZ_AnT", "qZ_nAT", "qZ_nAnT"};
  return n;
}

const std::array<std::string, 3>& ParamVector3::names() {
  static const std::array<std::string, 3> n = {"qT", "qZ_T", "qZ_nT"};
  return n;
}

std::array<double, 8> joint_cells(const ParamVector7& theta) {
  const double qa = theta.v[0];
  const double qt_a = theta.v[1];
  const double qt_na = theta.v[2];
  const double qz_at = theta.v[3];
  const double qz_ant = theta.v[4];
  const double qz_nat = theta.v[5];
  const double qz_nant = theta.v[6];
  // canonical (a,t,z): index = 4*ia + 2*it + iz, positive level first
  return {
      qz_at * qt_a * qa,                          // A, T, Z
      (1.0 - qz_at) * qt_a * qa,                  // A, T, ~Z
      qz_ant * (1.0 - qt_a) * qa,                 // A, ~T, Z
      (1.0 - qz_ant) * (1.0 - qt_a) * qa,         // A, ~T, ~Z
      qz_nat * qt_na * (1.0 - qa),                // ~A, T, Z
      (1.0 - qz_nat) * qt_na * (1.0 - qa),        // ~A, T, ~Z
      qz_nant * (1.0 - qt_na) * (1.0 - qa),       // ~A, ~T, Z
      (1.0 - qz_nant) * (1.0 - qt_na) * (1.0 - qa)  // ~A, ~T, ~Z
  };
}

std::array<double, 4> margin_cells(const ParamVector3& theta) {
  const double qt = theta.v[0];
  const double qz_t = theta.v[1];
  const double qz_nt = theta.v[2];
  return {
      qz_t * qt,                  // T, Z
      (1.0 - qz_t) * qt,          // T, ~Z
      qz_nt * (1.0 - qt),         // ~T, Z
      (1.0 - qz_nt) * (1.0 - qt)  // ~T, ~Z
  };
}

std::array<double, 4> margin_over_a(const std::array<double, 8>& cells) {
  return {cells[0] + cells[4], cells[1] + cells[5], cells[2] + cells[6], cells[3] + cells[7]};
}

FreqTensor normalize(const CountTable& table) {
  std::vector<double> freqs(table.n_cells());
  const double total = static_cast<double>(table.total());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    freqs[i] = static_cast<double>(table.counts()[i]) / total;
  }
  return FreqTensor(table.axes(), std::move(freqs));
}

FreqTensor marginalize(const FreqTensor& f, Axis drop_axis) {
  if (f.n_axes() < 2) {
    throw InputError("marginalize needs at least 2 axes");
  }
  const std::size_t pos = f.axis_pos(drop_axis);
  std::vector<BinaryAxis> out_axes;
  for (const auto& a : f.axes()) {
    if (a.id != drop_axis) out_axes.push_back(a);
  }
  const std::size_t shift = f.n_axes() - 1 - pos;
  std::vector<double> out(f.n_cells() / 2, 0.0);
  for (std::size_t cell = 0; cell < f.n_cells(); ++cell) {
    // remove the dropped axis' bit from the flat index
    const std::size_t hi = cell >> (shift + 1);
    const std::size_t lo = cell & ((std::size_t{1} << shift) - 1);
    out[(hi << shift) | lo] += f[cell];
  }
  return FreqTensor(std::move(out_axes), std::move(out));
}

double conditional(const FreqTensor& f, AxisLevel target, std::span<const AxisLevel> given) {
  for (const auto& g : given) {
    if (g.axis == target.axis) {
      throw InputError("target axis also appears in the conditioning set");
    }
  }
  double joint = 0.0;
  double margin = 0.0;
  for (std::size_t cell = 0; cell < f.n_cells(); ++cell) {
    bool in_given = true;
    for (const auto& g : given) {
      if (f.level_of(cell, g.axis) != g.level) {
        in_given = false;
        break;
      }
    }
    if (!in_given) continue;
    margin += f[cell];
    if (f.level_of(cell, target.axis) == target.level) {
      joint += f[cell];
    }
  }
  if (margin <= 0.0) {
    std::ostringstream name;
    for (std::size_t i = 0; i < given.size(); ++i) {
      const auto& axis = f.axes()[f.axis_pos(given[i].axis)];
      if (i) name << ",";
      name << axis_name(given[i].axis) << "=" << level_label(axis, given[i].level);
    }
    throw UndefinedConditionalError(given.empty() ? "(whole space)" : name.str());
  }
  return joint / margin;
}

FreqTensor assemble_joint(const ParamVector7& theta) {
  for (double c : theta.v) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InputError("hypothesis coordinate outside [0, 1]");
    }
  }
  auto cells = joint_cells(theta);
  return FreqTensor(axes_atz(), std::vector<double>(cells.begin(), cells.end()));
}

ParamVector7 decompose(const FreqTensor& f) {
  if (f.n_axes() != 3) {
    throw InputError("decompose expects a 3-axis (a,t,z) tensor");
  }
  const auto& q = f.freqs();
  const double qa = q[0] + q[1] + q[2] + q[3];
  const double qna = q[4] + q[5] + q[6] + q[7];
  const auto& names = ParamVector7::names();
  if (qa <= 0.0) throw UndefinedConditionalError(names[1]);
  if (qna <= 0.0) throw UndefinedConditionalError(names[2]);
  const double q_at = q[0] + q[1];
  const double q_ant = q[2] + q[3];
  const double q_nat = q[4] + q[5];
  const double q_nant = q[6] + q[7];
  if (q_at <= 0.0) throw UndefinedConditionalError(names[3]);
  if (q_ant <= 0.0) throw UndefinedConditionalError(names[4]);
  if (q_nat <= 0.0) throw UndefinedConditionalError(names[5]);
  if (q_nant <= 0.0) throw UndefinedConditionalError(names[6]);
  ParamVector7 theta;
  theta.v = {qa,          q_at / qa,    q_nat / qna,  q[0] / q_at,
             q[2] / q_ant, q[4] / q_nat, q[6] / q_nant};
  return theta;
}

FreqTensor assemble_margin(const ParamVector3& theta) {
  for (double c : theta.v) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InputError("hypothesis coordinate outside [0, 1]");
    }
  }
  auto cells = margin_cells(theta);
  return FreqTensor(axes_tz(), std::vector<double>(cells.begin(), cells.end()));
}

ParamVector3 decompose_margin(const FreqTensor& f) {
  if (f.n_axes() != 2 || f.axes()[0].id != Axis::T || f.axes()[1].id != Axis::Z) {
    throw InputError("decompose_margin expects a (t,z) tensor");
  }
  const auto& q = f.freqs();
  const double qt = q[0] + q[1];
  const double qnt = q[2] + q[3];
  const auto& names = ParamVector3::names();
  if (qt <= 0.0) throw UndefinedConditionalError(names[1]);
  if (qnt <= 0.0) throw UndefinedConditionalError(names[2]);
  ParamVector3 theta;
  theta.v = {qt, q[0] / qt, q[2] / qnt};
  return theta;
}

}  // namespace cef
