#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cef/tables.hpp"

namespace cef {

// The five prior/likelihood combinations.
//
//   JointFull    entropy prior on q_{a,t,z}, likelihood on 3-axis data
//   MarginalLow  entropy prior on q_{t,z},   likelihood on (t,z) data
//   LatentLow    entropy prior on q_{a,t,z}, likelihood on the (t,z) margin
//   PartialInfo  CEF prior toward the maxent fit of a known (a,z) marginal
//   Sensitivity  CEF prior toward the maxent fit of covariance targets
enum class ModelTag { JointFull, MarginalLow, LatentLow, PartialInfo, Sensitivity };

const char* model_tag_name(ModelTag tag);

class ModelCase {
 public:
  static ModelCase joint_full();
  static ModelCase marginal_low();
  static ModelCase latent_low();
  static ModelCase partial_info(const FreqTensor& qbar_az);
  static ModelCase sensitivity(double alpha, double delta);

  ModelTag tag() const noexcept { return tag_; }
  int hypothesis_dim() const noexcept { return tag_ == ModelTag::MarginalLow ? 3 : 7; }

  const std::optional<FreqTensor>& qbar() const noexcept { return qbar_; }
  double alpha() const noexcept { return alpha_; }
  double delta() const noexcept { return delta_; }

  // log of the CEF reference distribution, cached for the hot path
  // (PartialInfo and Sensitivity only).
  std::span<const double> log_qhat() const noexcept { return log_qhat_; }
  bool has_reference() const noexcept {
    return tag_ == ModelTag::PartialInfo || tag_ == ModelTag::Sensitivity;
  }

  const std::vector<std::string>& coordinate_names() const;

 private:
  explicit ModelCase(ModelTag tag) : tag_(tag) {}

  ModelTag tag_;
  std::optional<FreqTensor> qbar_;
  double alpha_ = 0.0;
  double delta_ = 0.0;
  std::array<double, 8> log_qhat_{};
};

using Hypothesis = std::variant<ParamVector3, ParamVector7>;

int hypothesis_dim(const Hypothesis& h);
std::span<const double> hypothesis_coords(const Hypothesis& h);
Hypothesis make_hypothesis(const ModelCase& model, std::span<const double> coords);

double log_prior(const ModelCase& model, const Hypothesis& h);
double log_likelihood(const ModelCase& model, const Hypothesis& h,
                      const FreqTensor& data, double n);
double log_posterior(const ModelCase& model, const Hypothesis& h,
                     const FreqTensor& data, double n);

// Unnormalized log posterior bound to (model, data, n), evaluated directly on
// hypothesis coordinates.  This is the function the optimizer, the sampler and
// the quadrature oracle call millions of times.
class PosteriorEval {
 public:
  PosteriorEval(const ModelCase& model, const FreqTensor& data, double n);

  double operator()(std::span<const double> coords) const;
  double log_prior_at(std::span<const double> coords) const;
  double log_likelihood_at(std::span<const double> coords) const;
  int dim() const noexcept { return dim_; }
  const ModelCase& model() const noexcept { return model_; }
  double n() const noexcept { return n_; }

  // (t,z) data cells actually used by the likelihood (after any
  // marginalization of 3-axis data), canonical order.
  std::span<const double> data_cells() const noexcept {
    return {data_cells_.data(), data_size_};
  }

 private:
  ModelCase model_;
  int dim_;
  double n_;
  std::array<double, 8> data_cells_{};  // 4 or 8 used
  std::size_t data_size_;
  double data_plogp_;  // sum p log p over the likelihood cells
};

}  // namespace cef
