#include "cef/infotheory.hpp"

#include <cmath>

#include "cef/errors.hpp"

namespace cef {

double shannon_entropy(std::span<const double> q) {
  double h = 0.0;
  for (double qk : q) {
    if (qk > 0.0) h -= qk * std::log(qk);
  }
  return h < 0.0 ? 0.0 : h;  // clamp -0.0 from rounding at point masses
}

double shannon_entropy(const FreqTensor& q) { return shannon_entropy(q.freqs()); }

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InputError("relative_entropy: shape mismatch");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) {
      if (q[k] <= 0.0) return std::numeric_limits<double>::infinity();
      d += p[k] * std::log(p[k] / q[k]);
    }
  }
  return d < 0.0 ? 0.0 : d;  // Gibbs: true value is >= 0
}

double relative_entropy(const FreqTensor& p, const FreqTensor& q) {
  if (p.n_axes() != q.n_axes()) {
    throw InputError("relative_entropy: tensors have different shapes");
  }
  for (std::size_t i = 0; i < p.n_axes(); ++i) {
    if (p.axes()[i].id != q.axes()[i].id) {
      throw InputError("relative_entropy: tensors have different axes");
    }
  }
  return relative_entropy(p.freqs(), q.freqs());
}

double multinomial_loglik(std::span<const double> p, std::span<const double> q, double n) {
  if (!(n >= 1.0)) {
    throw InputError("multinomial_loglik: sample size must be >= 1");
  }
  const double d = relative_entropy(p, q);
  return std::isinf(d) ? kNegInfinity : -n * d;
}

double multinomial_loglik(const FreqTensor& p, const FreqTensor& q, double n) {
  if (!(n >= 1.0)) {
    throw InputError("multinomial_loglik: sample size must be >= 1");
  }
  const double d = relative_entropy(p, q);
  return std::isinf(d) ? kNegInfinity : -n * d;
}

}  // namespace cef
