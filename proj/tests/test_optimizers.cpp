#include <doctest.h>

#include <cmath>

#include "mobo/math.hpp"
#include "mobo/optimizers.hpp"
#include "mobo/scalar_dist.hpp"
#include "oracles.hpp"

using namespace mobo;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("ga finds the optimum of a 1-D quadratic") {
  GaConfig cfg;
  cfg.population = 50;
  cfg.generations = 100;
  cfg.seed = 1;
  const auto res = ga_maximise([](const Eigen::VectorXd& x) { return -(x[0] - 0.3) * (x[0] - 0.3); },
                               vec({0.0}), vec({1.0}), cfg);
  CHECK(res.best_x[0] == doctest::Approx(0.3).epsilon(0.034));
}

TEST_CASE("ga on a constant objective returns a feasible point") {
  GaConfig cfg;
  cfg.population = 20;
  cfg.generations = 5;
  cfg.seed = 3;
  const auto res =
      ga_maximise([](const Eigen::VectorXd&) { return 4.25; }, vec({-1.0, 2.0}), vec({1.0, 3.0}), cfg);
  CHECK(res.best_value == 4.25);
  CHECK(res.best_x[0] >= -1.0);
  CHECK(res.best_x[0] <= 1.0);
  CHECK(res.best_x[1] >= 2.0);
  CHECK(res.best_x[1] <= 3.0);
}

TEST_CASE("ga solves the 5-D sphere") {
  GaConfig cfg;
  cfg.population = 100;
  cfg.generations = 200;
  cfg.seed = 9;
  const auto res = ga_maximise(
      [](const Eigen::VectorXd& x) { return -(x.array() - 0.5).square().sum(); },
      Eigen::VectorXd::Zero(5), Eigen::VectorXd::Ones(5), cfg);
  CHECK(res.best_value >= -1e-3);
}

TEST_CASE("ga best value never decreases over generations") {
  // rerun with increasing generation counts; the best value is monotone
  GaConfig cfg;
  cfg.population = 30;
  cfg.seed = 5;
  auto objective = [](const Eigen::VectorXd& x) { return std::sin(5.0 * x[0]) + x[1]; };
  double prev = -1e300;
  for (int gens : {1, 2, 4, 8, 16}) {
    cfg.generations = gens;
    const auto res = ga_maximise(objective, vec({0.0, 0.0}), vec({1.0, 1.0}), cfg);
    CHECK(res.best_value >= prev);
    prev = res.best_value;
  }
}

TEST_CASE("ga is bit-identical under the same seed") {
  GaConfig cfg;
  cfg.population = 40;
  cfg.generations = 30;
  cfg.seed = 77;
  auto objective = [](const Eigen::VectorXd& x) {
    return -std::abs(x[0] - 0.2) - std::abs(x[1] - 0.8);
  };
  const auto a = ga_maximise(objective, vec({0.0, 0.0}), vec({1.0, 1.0}), cfg);
  const auto b = ga_maximise(objective, vec({0.0, 0.0}), vec({1.0, 1.0}), cfg);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_x == b.best_x);
  cfg.seed = 78;
  const auto c = ga_maximise(objective, vec({0.0, 0.0}), vec({1.0, 1.0}), cfg);
  CHECK(a.best_x != c.best_x);
}

TEST_CASE("ga config validation") {
  GaConfig cfg;
  cfg.population = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.population = 5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.population = 4;
  cfg.generations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("quasi newton solves a concave quadratic exactly") {
  const auto res = quasi_newton_maximise(
      [](const Eigen::VectorXd& x) { return -(x[0] - 2.0) * (x[0] - 2.0); }, nullptr,
      vec({0.0}), vec({-10.0}), vec({10.0}), 100);
  CHECK(res.x[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(res.converged);
}

TEST_CASE("quasi newton keeps a stationary start") {
  const auto res = quasi_newton_maximise(
      [](const Eigen::VectorXd& x) { return -x.squaredNorm(); }, nullptr, vec({0.0, 0.0}),
      vec({-1.0, -1.0}), vec({1.0, 1.0}), 50);
  CHECK(res.x.norm() < 1e-6);
  CHECK(res.value == doctest::Approx(0.0));
}

TEST_CASE("quasi newton handles the negated rosenbrock") {
  auto rosen = [](const Eigen::VectorXd& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  const auto res = quasi_newton_maximise(rosen, nullptr, vec({-1.0, 1.0}), vec({-2.0, -2.0}),
                                         vec({2.0, 2.0}), 500);
  CHECK(res.value >= -1e-5);
}

TEST_CASE("quasi newton respects bounds and never regresses") {
  auto objective = [](const Eigen::VectorXd& x) { return x[0] + 2.0 * x[1]; };
  const auto res = quasi_newton_maximise(objective, nullptr, vec({0.2, 0.2}), vec({0.0, 0.0}),
                                         vec({1.0, 1.0}), 100);
  CHECK(res.x[0] <= 1.0 + 1e-12);
  CHECK(res.x[1] <= 1.0 + 1e-12);
  CHECK(res.value >= objective(vec({0.2, 0.2})));
  CHECK(res.value == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("safeguarded newton on a linear derivative") {
  const double root =
      safeguarded_newton_1d([](double g) { return g - 3.0; }, 0.0, 10.0, 1e-10);
  CHECK(root == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("safeguarded newton finds the standard normal mode") {
  const double root = safeguarded_newton_1d(
      [](double g) { return oracles::central_diff([](double x) { return log_norm_pdf(x); }, g, 1e-6); },
      -5.0, 5.0, 1e-8);
  CHECK(root == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("safeguarded newton mode matches a dense grid for two equal components") {
  ScalarisedPosterior sp;
  sp.shifted_means = vec({0.0, 0.0});
  sp.scaled_stds = vec({1.0, 1.0});
  auto dlog = [&](double g) {
    return oracles::central_diff([&](double x) { return exact_log_pdf(sp, x); }, g, 1e-5);
  };
  const double root = safeguarded_newton_1d(dlog, -6.0, 6.0, 1e-8);

  double best_g = 0.0, best_v = -1e300;
  for (int i = 0; i <= 100000; ++i) {
    const double g = -3.0 + 6.0 * i / 100000.0;
    const double v = exact_log_pdf(sp, g);
    if (v > best_v) {
      best_v = v;
      best_g = g;
    }
  }
  CHECK(root == doctest::Approx(best_g).epsilon(1e-4));
}

TEST_CASE("safeguarded newton requires a sign change") {
  CHECK_THROWS_AS(safeguarded_newton_1d([](double g) { return g * g + 1.0; }, -1.0, 1.0, 1e-8),
                  std::invalid_argument);
}
