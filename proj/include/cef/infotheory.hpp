#pragma once

#include <limits>
#include <span>

#include "cef/tables.hpp"

namespace cef {

// Log densities are handled in nats throughout; -inf encodes "impossible"
// and is absorbing under addition.  Values are never NaN.
inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

// H[q] = -sum q_k log q_k with 0 log 0 = 0.  Result in [0, log K].
double shannon_entropy(std::span<const double> q);
double shannon_entropy(const FreqTensor& q);

// H[p||q] = sum p_k log(p_k/q_k); terms with p_k = 0 contribute 0,
// p_k > 0 with q_k = 0 yields +inf.  Never negative.
double relative_entropy(std::span<const double> p, std::span<const double> q);
double relative_entropy(const FreqTensor& p, const FreqTensor& q);

// Multinomial log likelihood in KL form, -n H[p||q], dropping the
// combinatorial constant that depends on (p, n) only.
double multinomial_loglik(std::span<const double> p, std::span<const double> q, double n);
double multinomial_loglik(const FreqTensor& p, const FreqTensor& q, double n);

}  // namespace cef
