#pragma once

#include <array>
#include <span>
#include <vector>

#include "cef/tables.hpp"

namespace cef {

// One linear moment constraint on the 8-cell (a,t,z) space:
// sum_k weights[k] * q[k] = target.
struct LinearConstraint {
  std::array<double, 8> weights{};
  double target = 0.0;
};

struct MaxEntSolution {
  FreqTensor qhat;                  // 8-cell (a,t,z) maximizer
  std::vector<double> multipliers;  // one per constraint (normalization excluded)
  double achieved_entropy = 0.0;
  double residual = 0.0;            // max constraint violation
};

// Maximize H[q] subject to sum_t q_{a,t,z} = qbar_{a,z}.  Closed form:
// qhat(a,t,z) = qbar(a,z)/2.  Multipliers are reported in the gauge
// mu_{a,z} = -log qbar_{a,z}, so qhat = e^{-mu}/2 with sum e^{-mu} = 1.
MaxEntSolution solve_marginal_constraint(const FreqTensor& qbar);

// Maximize H[q] subject to Cov[a,t] = alpha and Cov[a,z] = delta under the
// {-1,+1} coding.  Closed form: qhat(a,t,z) = (1 + alpha*a*t)(1 + delta*a*z)/8.
// Multipliers are (-atanh(alpha), -atanh(delta)), attached to the a*t and a*z
// moments respectively, with qhat proportional to exp(-l_at*a*t - l_az*a*z).
MaxEntSolution solve_covariance_constraints(double alpha, double delta);

struct DualNewtonOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

// Generic entropy maximizer for arbitrary linear moment constraints, via
// Newton iteration on the dual.  Used as the numeric check of the two closed
// forms above.  Throws ConvergenceError when the residual cannot be driven
// below tol (infeasible or boundary targets).
MaxEntSolution dual_newton(std::span<const LinearConstraint> constraints,
                           const DualNewtonOptions& opts = {});

// Constraint builders matching the two closed-form problems.
std::vector<LinearConstraint> marginal_constraints(const FreqTensor& qbar);
std::vector<LinearConstraint> covariance_constraints(double alpha, double delta);

}  // namespace cef
