#include <doctest.h>

#include <algorithm>

#include "mobo/scalarise.hpp"

using namespace mobo;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("normalise maps the observed range onto [0,1]") {
  Eigen::MatrixXd obj(3, 2);
  obj << 1.0, 10.0, 5.0, 20.0, 3.0, 12.0;
  const auto state = NormalisationState::from_objectives(obj);
  CHECK(state.normalise(vec({1.0, 10.0})) == vec({0.0, 0.0}));
  CHECK(state.normalise(vec({5.0, 20.0})) == vec({1.0, 1.0}));
  CHECK(state.normalise(vec({3.0, 15.0}))[0] == doctest::Approx(0.5));
  CHECK(state.normalise(vec({3.0, 15.0}))[1] == doctest::Approx(0.5));
  // values outside the observed range pass through unclamped
  CHECK(state.normalise(vec({9.0, 10.0}))[0] == doctest::Approx(2.0));
}

TEST_CASE("normalise single-point and degenerate dimensions") {
  Eigen::MatrixXd obj(1, 2);
  obj << 3.0, 4.0;
  const auto state = NormalisationState::from_objectives(obj);
  // degenerate dimensions fall back to a unit denominator
  CHECK(state.normalise(vec({4.0, 4.5})) == vec({1.0, 0.5}));
}

TEST_CASE("tchebycheff examples") {
  WeightVector w{vec({0.5, 0.5})};
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  CHECK(tchebycheff(vec({0.5, 0.2}), w, z) == doctest::Approx(0.25));
  CHECK(tchebycheff(z, w, z) == 0.0);
  WeightVector w10{vec({1.0, 0.0})};
  CHECK(tchebycheff(vec({0.3, 0.9}), w10, z) == doctest::Approx(0.3));
  CHECK_THROWS_AS(tchebycheff(vec({0.1}), w, z), std::invalid_argument);
}

TEST_CASE("augmented tchebycheff examples") {
  WeightVector w{vec({0.5, 0.5})};
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd f = vec({0.5, 0.2});
  CHECK(augmented_tchebycheff(f, w, z, 0.0) == tchebycheff(f, w, z));
  CHECK(augmented_tchebycheff(f, w, z, 0.05) == doctest::Approx(0.2675));
  CHECK(augmented_tchebycheff(z, w, z, 0.7) == 0.0);
  CHECK_THROWS_AS(augmented_tchebycheff(f, w, z, -0.1), std::invalid_argument);
}

TEST_CASE("weight sampling is uniform on the simplex") {
  Rng rng(123);
  const int draws = 100000;
  double sum_w0 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto w = sample_weight(2, rng);
    CHECK(std::abs(w.weights.sum() - 1.0) <= 1e-12);
    CHECK((w.weights.array() >= 0.0).all());
    sum_w0 += w.weights[0];
  }
  CHECK(sum_w0 / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("weight sampling is deterministic under a cloned rng") {
  Rng a(9), b(9);
  for (int i = 0; i < 10; ++i) {
    CHECK(sample_weight(3, a).weights == sample_weight(3, b).weights);
  }
  CHECK_THROWS_AS(sample_weight(1, a), std::invalid_argument);
}

TEST_CASE("positive weight scaling preserves the argmin") {
  Rng rng(4);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto w = sample_weight(3, rng);
    WeightVector scaled{w.weights * 7.3};
    std::vector<Eigen::VectorXd> candidates;
    for (int i = 0; i < 20; ++i)
      candidates.push_back(vec({rng.uniform(), rng.uniform(), rng.uniform()}));
    auto argmin = [&](const WeightVector& wv) {
      size_t best = 0;
      double best_v = 1e300;
      for (size_t i = 0; i < candidates.size(); ++i) {
        const double v = tchebycheff(candidates[i], wv, z);
        if (v < best_v) {
          best_v = v;
          best = i;
        }
      }
      return best;
    };
    CHECK(argmin(w) == argmin(scaled));
    // and the value itself scales exactly
    CHECK(tchebycheff(candidates[0], scaled, z) ==
          doctest::Approx(7.3 * tchebycheff(candidates[0], w, z)).epsilon(1e-12));
  }
}

TEST_CASE("tchebycheff is non-negative above the ideal point and monotone") {
  Rng rng(5);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto w = sample_weight(2, rng);
    const Eigen::VectorXd f = vec({rng.uniform(), rng.uniform()});
    const Eigen::VectorXd worse = f + vec({rng.uniform(), rng.uniform()});
    CHECK(tchebycheff(f, w, z) >= 0.0);
    CHECK(tchebycheff(f, w, z) <= tchebycheff(worse, w, z));
  }
}
