#include "cef/maxent.hpp"

#include <cmath>
#include <vector>

#include "cef/errors.hpp"
#include "cef/infotheory.hpp"

namespace cef {

namespace {

// Solve the small symmetric system H s = b by Gaussian elimination with
// partial pivoting.  Returns false on a vanishing pivot.
bool solve_dense(std::vector<std::vector<double>> h, std::vector<double> b,
                 std::vector<double>& out) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(h[r][col]) > std::abs(h[pivot][col])) pivot = r;
    }
    if (std::abs(h[pivot][col]) < 1e-300) return false;
    std::swap(h[pivot], h[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = h[r][col] / h[col][col];
      for (std::size_t c = col; c < m; ++c) h[r][c] -= f * h[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(m, 0.0);
  for (std::size_t r = m; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < m; ++c) s -= h[r][c] * out[c];
    out[r] = s / h[r][r];
  }
  return true;
}

struct DualState {
  std::array<double, 8> q{};
  double log_z = 0.0;
};

DualState eval_q(std::span<const LinearConstraint> cons, const std::vector<double>& lambda) {
  DualState st;
  std::array<double, 8> u{};
  double umax = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < 8; ++k) {
    double e = 0.0;
    for (std::size_t j = 0; j < cons.size(); ++j) {
      e -= lambda[j] * cons[j].weights[k];
    }
    u[k] = e;
    if (e > umax) umax = e;
  }
  double z = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    st.q[k] = std::exp(u[k] - umax);
    z += st.q[k];
  }
  for (auto& qk : st.q) qk /= z;
  st.log_z = umax + std::log(z);
  return st;
}

double dual_objective(std::span<const LinearConstraint> cons, const std::vector<double>& lambda,
                      const DualState& st) {
  double d = st.log_z;
  for (std::size_t j = 0; j < cons.size(); ++j) d += lambda[j] * cons[j].target;
  return d;
}

double max_violation(std::span<const LinearConstraint> cons, const std::array<double, 8>& q) {
  double r = 0.0;
  for (const auto& c : cons) {
    double m = 0.0;
    for (std::size_t k = 0; k < 8; ++k) m += c.weights[k] * q[k];
    r = std::max(r, std::abs(m - c.target));
  }
  return r;
}

MaxEntSolution make_solution(const std::array<double, 8>& q, std::vector<double> multipliers,
                             double residual) {
  FreqTensor qhat(axes_atz(), std::vector<double>(q.begin(), q.end()));
  const double h = shannon_entropy(qhat);
  return MaxEntSolution{std::move(qhat), std::move(multipliers), h, residual};
}

}  // namespace

MaxEntSolution solve_marginal_constraint(const FreqTensor& qbar) {
  if (qbar.n_axes() != 2 || qbar.axes()[0].id != Axis::A || qbar.axes()[1].id != Axis::Z) {
    throw InputError("solve_marginal_constraint expects an (a,z) tensor");
  }
  std::array<double, 8> q{};
  std::vector<double> mu(4);
  for (int ia = 0; ia < 2; ++ia) {
    for (int iz = 0; iz < 2; ++iz) {
      const double bar = qbar[static_cast<std::size_t>(2 * ia + iz)];
      const double half = bar / 2.0;
      q[static_cast<std::size_t>(4 * ia + iz)] = half;      // t = T
      q[static_cast<std::size_t>(4 * ia + 2 + iz)] = half;  // t = ~T
      // gauge with sum_{a,z} e^{-mu} = 1, so qhat = e^{-mu}/2 exactly
      mu[static_cast<std::size_t>(2 * ia + iz)] = -std::log(bar);
    }
  }
  const double residual = max_violation(marginal_constraints(qbar), q);
  return make_solution(q, std::move(mu), residual);
}

MaxEntSolution solve_covariance_constraints(double alpha, double delta) {
  if (!(std::abs(alpha) <= 1.0) || !(std::abs(delta) <= 1.0)) {
    throw InfeasibleConstraintError("covariance targets must lie in [-1, 1]");
  }
  std::array<double, 8> q{};
  for (int ia = 0; ia < 2; ++ia) {
    for (int it = 0; it < 2; ++it) {
      for (int iz = 0; iz < 2; ++iz) {
        const int a = level_code(ia);
        const int t = level_code(it);
        const int z = level_code(iz);
        q[static_cast<std::size_t>(4 * ia + 2 * it + iz)] =
            (1.0 + alpha * a * t) * (1.0 + delta * a * z) / 8.0;
      }
    }
  }
  std::vector<double> lambda = {alpha == 0.0 ? 0.0 : -std::atanh(alpha),
                                delta == 0.0 ? 0.0 : -std::atanh(delta)};
  const double residual = max_violation(covariance_constraints(alpha, delta), q);
  return make_solution(q, std::move(lambda), residual);
}

std::vector<LinearConstraint> marginal_constraints(const FreqTensor& qbar) {
  if (qbar.n_axes() != 2 || qbar.axes()[0].id != Axis::A || qbar.axes()[1].id != Axis::Z) {
    throw InputError("marginal_constraints expects an (a,z) tensor");
  }
  std::vector<LinearConstraint> cons(4);
  for (int ia = 0; ia < 2; ++ia) {
    for (int iz = 0; iz < 2; ++iz) {
      auto& c = cons[static_cast<std::size_t>(2 * ia + iz)];
      c.weights[static_cast<std::size_t>(4 * ia + iz)] = 1.0;
      c.weights[static_cast<std::size_t>(4 * ia + 2 + iz)] = 1.0;
      c.target = qbar[static_cast<std::size_t>(2 * ia + iz)];
    }
  }
  return cons;
}

std::vector<LinearConstraint> covariance_constraints(double alpha, double delta) {
  LinearConstraint cat;
  LinearConstraint caz;
  for (int ia = 0; ia < 2; ++ia) {
    for (int it = 0; it < 2; ++it) {
      for (int iz = 0; iz < 2; ++iz) {
        const std::size_t k = static_cast<std::size_t>(4 * ia + 2 * it + iz);
        cat.weights[k] = level_code(ia) * level_code(it);
        caz.weights[k] = level_code(ia) * level_code(iz);
      }
    }
  }
  cat.target = alpha;
  caz.target = delta;
  return {cat, caz};
}

MaxEntSolution dual_newton(std::span<const LinearConstraint> constraints,
                           const DualNewtonOptions& opts) {
  if (!(opts.tol > 0.0)) {
    throw InputError("dual_newton: tol must be positive");
  }
  for (const auto& c : constraints) {
    if (!std::isfinite(c.target)) {
      throw InputError("dual_newton: constraint target must be finite");
    }
    for (double w : c.weights) {
      if (!std::isfinite(w)) {
        throw InputError("dual_newton: constraint weights must be finite");
      }
    }
  }
  const std::size_t m = constraints.size();
  std::vector<double> lambda(m, 0.0);
  DualState st = eval_q(constraints, lambda);
  if (m == 0) {
    return make_solution(st.q, {}, 0.0);
  }
  double residual = max_violation(constraints, st.q);
  for (int iter = 0; iter < opts.max_iter && residual > opts.tol; ++iter) {
    // gradient of the dual: target - E_q[w]
    std::vector<double> mean(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < 8; ++k) mean[j] += constraints[j].weights[k] * st.q[k];
    }
    std::vector<double> grad(m);
    for (std::size_t j = 0; j < m; ++j) grad[j] = constraints[j].target - mean[j];

    // Hessian: covariance of the constraint functions under q (PSD; may be
    // singular for redundant constraints, hence the escalating ridge)
    std::vector<std::vector<double>> hess(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        double e = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
          e += constraints[i].weights[k] * constraints[j].weights[k] * st.q[k];
        }
        hess[i][j] = hess[j][i] = e - mean[i] * mean[j];
      }
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < m; ++i) trace += hess[i][i];

    std::vector<double> step;
    double ridge = 0.0;
    for (;;) {
      auto h = hess;
      for (std::size_t i = 0; i < m; ++i) h[i][i] += ridge;
      std::vector<double> rhs(m);
      for (std::size_t j = 0; j < m; ++j) rhs[j] = -grad[j];
      if (solve_dense(std::move(h), std::move(rhs), step)) break;
      ridge = ridge == 0.0 ? 1e-12 * (1.0 + trace) : ridge * 10.0;
      if (ridge > 1e6) {
        throw ConvergenceError("dual_newton: singular Hessian", residual);
      }
    }

    // step halving on the dual objective
    const double d0 = dual_objective(constraints, lambda, st);
    double scale = 1.0;
    std::vector<double> trial(m);
    for (int halvings = 0;; ++halvings) {
      for (std::size_t j = 0; j < m; ++j) trial[j] = lambda[j] + scale * step[j];
      const DualState ts = eval_q(constraints, trial);
      if (dual_objective(constraints, trial, ts) <= d0 + 1e-15 || halvings >= 60) {
        lambda = trial;
        st = ts;
        break;
      }
      scale *= 0.5;
    }
    residual = max_violation(constraints, st.q);
  }
  if (residual > opts.tol) {
    throw ConvergenceError("dual_newton: no convergence within max_iter", residual);
  }
  return make_solution(st.q, std::move(lambda), residual);
}

}  // namespace cef
