#include <doctest.h>

#include <cmath>
#include <random>

#include "cef/errors.hpp"
#include "cef/infotheory.hpp"
#include "fixtures.hpp"

using namespace cef;

namespace {

// Independent long-double oracle for H[p] and H[p||q].
long double entropy_oracle(std::span<const double> q) {
  long double h = 0.0L;
  for (double v : q) {
    if (v > 0.0) h -= static_cast<long double>(v) * std::log(static_cast<long double>(v));
  }
  return h;
}

long double kl_oracle(std::span<const double> p, std::span<const double> q) {
  long double d = 0.0L;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) {
      d += static_cast<long double>(p[k]) *
           std::log(static_cast<long double>(p[k]) / static_cast<long double>(q[k]));
    }
  }
  return d;
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k, double floor = 0.0) {
  std::uniform_real_distribution<double> unif(floor, 1.0);
  std::vector<double> q(k);
  double s = 0.0;
  for (auto& v : q) {
    v = unif(rng);
    s += v;
  }
  for (auto& v : q) v /= s;
  return q;
}

}  // namespace

TEST_SUITE("infotheory") {

TEST_CASE("entropy of the reference distributions") {
  CHECK(std::abs(shannon_entropy(test::uniform_atz()) - std::log(8.0)) <= 1e-14);

  const std::vector<double> point = {1.0, 0.0, 0.0, 0.0};
  CHECK(shannon_entropy(point) == 0.0);

  // frozen from the long-double oracle below
  const double h1 = shannon_entropy(test::table1());
  CHECK(std::abs(h1 - 1.3762266043445461) <= 1e-12);
  CHECK(std::abs(h1 - static_cast<double>(entropy_oracle(test::table1().freqs()))) <= 1e-14);
}

TEST_CASE("relative entropy identities and divergences") {
  const FreqTensor t1 = test::table1();
  CHECK(relative_entropy(t1, t1) == 0.0);

  const double d = relative_entropy(t1, test::uniform_tz());
  CHECK(std::abs(d - 0.010067756775344439) <= 1e-12);                      // frozen oracle value
  CHECK(std::abs(d - (std::log(4.0) - shannon_entropy(t1))) <= 1e-12);     // KL(p||u) = log K - H(p)
  CHECK(std::abs(d - static_cast<double>(kl_oracle(t1.freqs(), test::uniform_tz().freqs()))) <=
        1e-14);

  const std::vector<double> p = {1.0, 0.0, 0.0, 0.0};
  const std::vector<double> q = {0.0, 1.0, 0.0, 0.0};
  CHECK(std::isinf(relative_entropy(p, q)));
  CHECK(relative_entropy(p, q) > 0);

  CHECK_THROWS_AS((void)relative_entropy(std::span<const double>(p.data(), 3),
                                         std::span<const double>(q.data(), 4)),
                  InputError);
}

TEST_CASE("multinomial log likelihood in KL form") {
  const FreqTensor t1 = test::table1();
  CHECK(multinomial_loglik(t1, t1, 80.0) == 0.0);

  const double ll = multinomial_loglik(t1, test::uniform_tz(), 80.0);
  CHECK(std::abs(ll - (-0.8054205420275551)) <= 1e-10);  // frozen: 80 x KL(table1 || uniform)

  const FreqTensor degenerate(axes_tz(), {0.5, 0.5, 0.0, 0.0});
  CHECK(multinomial_loglik(t1, degenerate, 80.0) == kNegInfinity);

  CHECK_THROWS_AS((void)multinomial_loglik(t1, t1, 0.5), InputError);

  // exact linearity in n
  const double l1 = multinomial_loglik(t1, test::uniform_tz(), 1.0);
  const double l3 = multinomial_loglik(t1, test::uniform_tz(), 3.0);
  CHECK(l3 == 3.0 * l1);
}

TEST_CASE("divergence properties over random tensors") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 10000; ++rep) {
    const auto q = random_simplex(rng, 8);
    const auto p = random_simplex(rng, 8);

    const double h = shannon_entropy(q);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(8.0) + 1e-12);

    const double d = relative_entropy(p, q);
    CHECK(d >= 0.0);

    // Gibbs-identity consistency against the uniform reference
    const std::vector<double> u(8, 0.125);
    CHECK(std::abs(shannon_entropy(q) - (std::log(8.0) - relative_entropy(q, u))) <= 1e-12);
  }
}

TEST_CASE("identity of indiscernibles under perturbation") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    auto q = random_simplex(rng, 4, 0.05);
    auto p = q;
    CHECK(relative_entropy(p, q) == 0.0);
    p[0] += 0.01;
    p[1] -= 0.01;
    CHECK(relative_entropy(p, q) > 1e-6);
  }
}

}  // TEST_SUITE
