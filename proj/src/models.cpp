#include "cef/models.hpp"

#include <algorithm>
#include <cmath>

#include "cef/errors.hpp"
#include "cef/infotheory.hpp"
#include "cef/maxent.hpp"

namespace cef {

namespace {

// Entropy of a cell array; 0 log 0 = 0.
double entropy_of(std::span<const double> q) {
  double h = 0.0;
  for (double qk : q) {
    if (qk > 0.0) h -= qk * std::log(qk);
  }
  return h < 0.0 ? 0.0 : h;
}

// -KL(q || qhat) given log qhat; q mass on a zero-qhat cell gives -inf.
double neg_kl_to_reference(std::span<const double> q, std::span<const double> log_qhat) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] > 0.0) {
      if (std::isinf(log_qhat[k])) return kNegInfinity;
      s -= q[k] * (std::log(q[k]) - log_qhat[k]);
    }
  }
  return s > 0.0 ? 0.0 : s;  // -KL is never positive
}

// -n KL(p||m) written as n (sum p log m - sum p log p).
double loglik_cells(std::span<const double> p, std::span<const double> m, double n,
                    double plogp) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) {
      if (m[k] <= 0.0) return kNegInfinity;
      s += p[k] * std::log(m[k]);
    }
  }
  const double v = n * (s - plogp);
  return v > 0.0 ? 0.0 : v;
}

void check_coords(std::span<const double> coords) {
  for (double c : coords) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InputError("hypothesis coordinate outside [0, 1]");
    }
  }
}

}  // namespace

const char* model_tag_name(ModelTag tag) {
  switch (tag) {
    case ModelTag::JointFull: return "joint";
    case ModelTag::MarginalLow: return "marginal";
    case ModelTag::LatentLow: return "latent";
    case ModelTag::PartialInfo: return "partial";
    case ModelTag::Sensitivity: return "sensitivity";
  }
  return "?";
}

ModelCase ModelCase::joint_full() { return ModelCase(ModelTag::JointFull); }
ModelCase ModelCase::marginal_low() { return ModelCase(ModelTag::MarginalLow); }
ModelCase ModelCase::latent_low() { return ModelCase(ModelTag::LatentLow); }

ModelCase ModelCase::partial_info(const FreqTensor& qbar_az) {
  ModelCase c(ModelTag::PartialInfo);
  c.qbar_ = qbar_az;
  const MaxEntSolution sol = solve_marginal_constraint(qbar_az);
  for (std::size_t k = 0; k < 8; ++k) {
    c.log_qhat_[k] = sol.qhat[k] > 0.0 ? std::log(sol.qhat[k]) : kNegInfinity;
  }
  return c;
}

ModelCase ModelCase::sensitivity(double alpha, double delta) {
  ModelCase c(ModelTag::Sensitivity);
  c.alpha_ = alpha;
  c.delta_ = delta;
  const MaxEntSolution sol = solve_covariance_constraints(alpha, delta);
  for (std::size_t k = 0; k < 8; ++k) {
    c.log_qhat_[k] = sol.qhat[k] > 0.0 ? std::log(sol.qhat[k]) : kNegInfinity;
  }
  return c;
}

const std::vector<std::string>& ModelCase::coordinate_names() const {
  static const std::vector<std::string> seven(ParamVector7::names().begin(),
                                              ParamVector7::names().end());
  static const std::vector<std::string> three(ParamVector3::names().begin(),
                                              ParamVector3::names().end());
  return hypothesis_dim() == 7 ? seven : three;
}

int hypothesis_dim(const Hypothesis& h) {
  return std::holds_alternative<ParamVector7>(h) ? 7 : 3;
}

std::span<const double> hypothesis_coords(const Hypothesis& h) {
  if (const auto* p7 = std::get_if<ParamVector7>(&h)) {
    return {p7->v.data(), p7->v.size()};
  }
  const auto& p3 = std::get<ParamVector3>(h);
  return {p3.v.data(), p3.v.size()};
}

Hypothesis make_hypothesis(const ModelCase& model, std::span<const double> coords) {
  const std::size_t dim = static_cast<std::size_t>(model.hypothesis_dim());
  if (coords.size() != dim) {
    throw InputError("hypothesis has wrong dimension for this model case");
  }
  if (dim == 7) {
    ParamVector7 theta;
    std::copy(coords.begin(), coords.end(), theta.v.begin());
    return theta;
  }
  ParamVector3 theta;
  std::copy(coords.begin(), coords.end(), theta.v.begin());
  return theta;
}

double log_prior(const ModelCase& model, const Hypothesis& h) {
  if (hypothesis_dim(h) != model.hypothesis_dim()) {
    throw InputError("hypothesis shape does not match model case");
  }
  check_coords(hypothesis_coords(h));
  if (model.tag() == ModelTag::MarginalLow) {
    const auto cells = margin_cells(std::get<ParamVector3>(h));
    return entropy_of({cells.data(), 4});
  }
  const auto cells = joint_cells(std::get<ParamVector7>(h));
  if (model.has_reference()) {
    return neg_kl_to_reference({cells.data(), 8}, model.log_qhat());
  }
  return entropy_of({cells.data(), 8});
}

double log_likelihood(const ModelCase& model, const Hypothesis& h,
                      const FreqTensor& data, double n) {
  if (hypothesis_dim(h) != model.hypothesis_dim()) {
    throw InputError("hypothesis shape does not match model case");
  }
  const PosteriorEval eval(model, data, n);
  return eval.log_likelihood_at(hypothesis_coords(h));
}

double log_posterior(const ModelCase& model, const Hypothesis& h,
                     const FreqTensor& data, double n) {
  if (hypothesis_dim(h) != model.hypothesis_dim()) {
    throw InputError("hypothesis shape does not match model case");
  }
  const PosteriorEval eval(model, data, n);
  return eval(hypothesis_coords(h));
}

PosteriorEval::PosteriorEval(const ModelCase& model, const FreqTensor& data, double n)
    : model_(model), dim_(model.hypothesis_dim()), n_(n) {
  if (!(n_ >= 0.0)) {
    throw InputError("sample size must be non-negative");
  }
  if (model.tag() == ModelTag::JointFull) {
    if (data.n_axes() != 3) {
      throw InputError("the joint model requires 3-axis (a,t,z) data");
    }
    data_size_ = 8;
    for (std::size_t k = 0; k < 8; ++k) data_cells_[k] = data[k];
  } else {
    // all other cases condition on the (t,z) margin
    if (data.n_axes() == 3) {
      const FreqTensor m = marginalize(data, Axis::A);
      data_size_ = 4;
      for (std::size_t k = 0; k < 4; ++k) data_cells_[k] = m[k];
    } else if (data.axes()[0].id == Axis::T && data.axes()[1].id == Axis::Z) {
      data_size_ = 4;
      for (std::size_t k = 0; k < 4; ++k) data_cells_[k] = data[k];
    } else {
      throw InputError("this model case requires (t,z) or (a,t,z) data");
    }
  }
  data_plogp_ = 0.0;
  for (std::size_t k = 0; k < data_size_; ++k) {
    if (data_cells_[k] > 0.0) data_plogp_ += data_cells_[k] * std::log(data_cells_[k]);
  }
}

double PosteriorEval::log_prior_at(std::span<const double> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw InputError("coordinate vector has wrong dimension");
  }
  check_coords(coords);
  if (model_.tag() == ModelTag::MarginalLow) {
    ParamVector3 theta;
    std::copy(coords.begin(), coords.end(), theta.v.begin());
    const auto q = margin_cells(theta);
    return entropy_of({q.data(), 4});
  }
  ParamVector7 theta;
  std::copy(coords.begin(), coords.end(), theta.v.begin());
  const auto q = joint_cells(theta);
  if (model_.has_reference()) {
    return neg_kl_to_reference({q.data(), 8}, model_.log_qhat());
  }
  return entropy_of({q.data(), 8});
}

double PosteriorEval::log_likelihood_at(std::span<const double> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw InputError("coordinate vector has wrong dimension");
  }
  check_coords(coords);
  const std::span<const double> p{data_cells_.data(), data_size_};
  if (model_.tag() == ModelTag::MarginalLow) {
    ParamVector3 theta;
    std::copy(coords.begin(), coords.end(), theta.v.begin());
    const auto q = margin_cells(theta);
    return loglik_cells(p, {q.data(), 4}, n_, data_plogp_);
  }
  ParamVector7 theta;
  std::copy(coords.begin(), coords.end(), theta.v.begin());
  const auto q = joint_cells(theta);
  if (model_.tag() == ModelTag::JointFull) {
    return loglik_cells(p, {q.data(), 8}, n_, data_plogp_);
  }
  const auto m = margin_over_a(q);
  return loglik_cells(p, {m.data(), 4}, n_, data_plogp_);
}

double PosteriorEval::operator()(std::span<const double> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw InputError("coordinate vector has wrong dimension");
  }
  check_coords(coords);
  const std::span<const double> p{data_cells_.data(), data_size_};

  if (model_.tag() == ModelTag::MarginalLow) {
    ParamVector3 theta;
    std::copy(coords.begin(), coords.end(), theta.v.begin());
    const auto q = margin_cells(theta);
    const double ll = loglik_cells(p, {q.data(), 4}, n_, data_plogp_);
    if (std::isinf(ll)) return kNegInfinity;
    return entropy_of({q.data(), 4}) + ll;
  }

  ParamVector7 theta;
  std::copy(coords.begin(), coords.end(), theta.v.begin());
  const auto q = joint_cells(theta);

  const double prior = model_.has_reference()
                           ? neg_kl_to_reference({q.data(), 8}, model_.log_qhat())
                           : entropy_of({q.data(), 8});
  if (std::isinf(prior)) return kNegInfinity;

  double ll;
  if (model_.tag() == ModelTag::JointFull) {
    ll = loglik_cells(p, {q.data(), 8}, n_, data_plogp_);
  } else {
    const auto m = margin_over_a(q);
    ll = loglik_cells(p, {m.data(), 4}, n_, data_plogp_);
  }
  return std::isinf(ll) ? kNegInfinity : prior + ll;
}

}  // namespace cef
