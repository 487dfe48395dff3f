#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mobo/math.hpp"
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

ScalarisedPosterior make_sp(std::initializer_list<double> means,
                            std::initializer_list<double> stds) {
  ScalarisedPosterior sp;
  sp.shifted_means = vec(means);
  sp.scaled_stds = vec(stds);
  return sp;
}

ScalarisedPosterior random_sp(int m, Rng& rng) {
  ScalarisedPosterior sp;
  sp.shifted_means.resize(m);
  sp.scaled_stds.resize(m);
  for (int i = 0; i < m; ++i) {
    sp.shifted_means[i] = rng.uniform(-2.0, 2.0);
    sp.scaled_stds[i] = rng.uniform(0.2, 2.0);
  }
  return sp;
}

double ks_vs_cdf(Eigen::ArrayXd samples, const std::function<double(double)>& cdf) {
  std::sort(samples.data(), samples.data() + samples.size());
  const auto n = samples.size();
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d, std::abs((i + 1.0) / n - F));
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace

TEST_CASE("exact pdf reduces to the normal density for one component") {
  const auto sp = make_sp({0.0}, {1.0});
  CHECK(exact_pdf(sp, 0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(exact_pdf(sp, 1.7) == doctest::Approx(norm_pdf(1.7)).epsilon(1e-12));
}

TEST_CASE("exact pdf for two equal components matches the cdf derivative") {
  const auto sp = make_sp({0.0, 0.0}, {1.0, 1.0});
  CHECK(exact_pdf(sp, 0.0) == doctest::Approx(2.0 * norm_pdf(0.0) * 0.5).epsilon(1e-10));
  const double fd =
      oracles::central_diff([&](double g) { return exact_cdf(sp, g); }, 0.0, 1e-6);
  CHECK(exact_pdf(sp, 0.0) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("exact pdf integrates to one") {
  Rng rng(21);
  for (int rep = 0; rep < 6; ++rep) {
    const auto sp = random_sp(2 + rep % 3, rng);
    const double s_max = sp.scaled_stds.maxCoeff();
    const double lo = sp.shifted_means.minCoeff() - 10.0 * s_max;
    const double hi = sp.shifted_means.maxCoeff() + 10.0 * s_max;
    const double mass =
        oracles::integrate([&](double g) { return exact_pdf(sp, g); }, lo, hi, 1e-11);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("exact cdf limits, value and derivative") {
  const auto sp = make_sp({0.0, 0.0}, {1.0, 1.0});
  CHECK(exact_cdf(sp, 40.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_cdf(sp, -40.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(exact_cdf(sp, 0.0) == doctest::Approx(0.25).epsilon(1e-12));

  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const double g = rng.uniform(-4.0, 4.0);
    const double fd =
        oracles::central_diff([&](double x) { return exact_cdf(sp, x); }, g, 3e-6);
    CHECK(exact_pdf(sp, g) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("pdf is the cdf derivative across random configurations") {
  Rng rng(17);
  for (int cfg = 0; cfg < 50; ++cfg) {
    const int m = std::vector<int>{1, 2, 3, 5}[static_cast<size_t>(cfg % 4)];
    const auto sp = random_sp(m, rng);
    for (int k = 0; k < 20; ++k) {
      const double g = rng.uniform(sp.shifted_means.minCoeff() - 3.0 * sp.scaled_stds.maxCoeff(),
                                   sp.shifted_means.maxCoeff() + 3.0 * sp.scaled_stds.maxCoeff());
      const double fd =
          oracles::central_diff([&](double x) { return exact_cdf(sp, x); }, g, 3e-6);
      CHECK(exact_pdf(sp, g) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      CHECK(exact_pdf(sp, g) >= 0.0);
    }
  }
}

TEST_CASE("cdf is monotone") {
  Rng rng(29);
  const auto sp = random_sp(3, rng);
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double g = -8.0 + 16.0 * i / 200.0;
    const double c = exact_cdf(sp, g);
    CHECK(c >= prev - 1e-15);
    prev = c;
  }
}

TEST_CASE("sampling a single component is plain gaussian") {
  const auto sp = make_sp({1.3}, {0.7});
  Rng rng(5);
  const int count = 100000;
  const auto s = sample(sp, count, rng);
  CHECK(s.mean() == doctest::Approx(1.3).epsilon(4.0 * 0.7 / std::sqrt(double(count))));
}

TEST_CASE("sample mean of two equal standard components") {
  const auto sp = make_sp({0.0, 0.0}, {1.0, 1.0});
  Rng rng(6);
  const auto s = sample(sp, 1000000, rng);
  // E max(Z1, Z2) = 1/sqrt(pi)
  CHECK(s.mean() == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(0.009));
}

TEST_CASE("empirical cdf converges to the exact cdf") {
  Rng rng(8);
  const auto sp = make_sp({0.2, -0.4, 0.9}, {1.0, 0.5, 0.8});
  for (int count : {1000, 10000, 100000}) {
    const auto s = sample(sp, count, rng);
    const double ks = ks_vs_cdf(s, [&](double g) { return exact_cdf(sp, g); });
    CHECK(ks < 3.0 / std::sqrt(static_cast<double>(count)));
  }
}

TEST_CASE("sample_with_normals matches sequential sampling layout") {
  const auto sp = make_sp({0.5, -0.5}, {1.0, 2.0});
  Eigen::MatrixXd z(4, 2);
  z << 0.0, 0.0, 1.0, -1.0, -2.0, 0.3, 0.5, 0.5;
  Eigen::ArrayXd out;
  sample_with_normals(sp, z, out);
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == doctest::Approx(1.5));
  CHECK(out[2] == doctest::Approx(0.1));
  CHECK(out[3] == doctest::Approx(1.0));
}

TEST_CASE("gumbel mle recovers synthetic parameters") {
  Rng rng(40);
  Eigen::ArrayXd g(100000);
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.gumbel(0.0, 1.0);
  const auto fit = fit_gumbel(g);
  CHECK(fit.location == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(fit.scale == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gumbel fit is shift and scale equivariant") {
  Rng rng(41);
  Eigen::ArrayXd g(5000);
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.gumbel(0.3, 0.8);
  const auto base = fit_gumbel(g);
  const auto shifted = fit_gumbel(g + 2.5);
  CHECK(shifted.location == doctest::Approx(base.location + 2.5).epsilon(1e-9));
  CHECK(shifted.scale == doctest::Approx(base.scale).epsilon(1e-9));
  const auto scaled = fit_gumbel(3.0 * g);
  CHECK(scaled.location == doctest::Approx(3.0 * base.location).epsilon(1e-9));
  CHECK(scaled.scale == doctest::Approx(3.0 * base.scale).epsilon(1e-9));
}

TEST_CASE("gumbel fit error paths") {
  CHECK_THROWS_AS(fit_gumbel(Eigen::ArrayXd::Constant(100, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(fit_gumbel(Eigen::ArrayXd::Constant(5, 1.0)), std::invalid_argument);
}

TEST_CASE("gumbel fit does not decrease the log-likelihood of its initialiser") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const auto sp = random_sp(2 + rep % 2, rng);
    const auto g = sample(sp, 2000, rng);
    const double mean = g.mean();
    const double sd = std::sqrt((g - mean).square().mean());
    const GumbelParams moment{mean - kEulerGamma * sd * std::sqrt(6.0) / kPi,
                              sd * std::sqrt(6.0) / kPi};
    const auto fit = fit_gumbel(g);
    CHECK(gumbel_log_likelihood(fit, g) >= gumbel_log_likelihood(moment, g) - 1e-9);
  }
}

TEST_CASE("gumbel pdf examples") {
  const GumbelParams p{1.2, 0.6};
  CHECK(gumbel_pdf(p, 1.2) == doctest::Approx(std::exp(-1.0) / 0.6).epsilon(1e-12));
  const double mass = oracles::integrate([&](double g) { return gumbel_pdf(p, g); },
                                         1.2 - 8.0 * 0.6, 1.2 + 30.0 * 0.6, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  // the density peaks at the location parameter
  CHECK(gumbel_pdf(p, 1.2) > gumbel_pdf(p, 1.25));
  CHECK(gumbel_pdf(p, 1.2) > gumbel_pdf(p, 1.15));
}

TEST_CASE("laplace fit of a single gaussian is exact") {
  const auto sp = make_sp({0.7}, {0.35});
  const auto lp = laplace_fit(sp);
  CHECK(lp.mode == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(lp.precision == doctest::Approx(1.0 / (0.35 * 0.35)).epsilon(1e-6));
}

TEST_CASE("laplace mode matches a dense grid argmax for two components") {
  Rng rng(50);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sp = random_sp(2, rng);
    const auto lp = laplace_fit(sp);

    const double s_max = sp.scaled_stds.maxCoeff();
    const double lo = sp.shifted_means.minCoeff() - 4.0 * s_max;
    const double hi = sp.shifted_means.maxCoeff() + 4.0 * s_max;
    double best_g = lo, best_v = -1e300;
    for (int i = 0; i <= 100000; ++i) {
      const double g = lo + (hi - lo) * i / 100000.0;
      const double v = exact_log_pdf(sp, g);
      if (v > best_v) {
        best_v = v;
        best_g = g;
      }
    }
    CHECK(lp.mode == doctest::Approx(best_g).scale(1.0).epsilon(1e-4));
    CHECK(lp.precision > 0.0);

    // the closed-form two-component derivative vanishes at the mode
    CHECK(std::abs(oracles::analytic_dlogp_m2(lp.mode, sp.shifted_means[0], sp.shifted_means[1],
                                              sp.scaled_stds[0], sp.scaled_stds[1])) < 1e-6);
  }
}

TEST_CASE("laplace fit when one component dominates") {
  const auto sp = make_sp({0.0, 9.0}, {1.0, 0.9});
  const auto lp = laplace_fit(sp);
  CHECK(lp.mode == doctest::Approx(9.0).epsilon(1e-3));
  CHECK(lp.precision == doctest::Approx(1.0 / (0.9 * 0.9)).epsilon(1e-3));
}

TEST_CASE("laplace residual is tiny at the mode") {
  Rng rng(51);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sp = random_sp(1 + rep % 3, rng);
    const auto lp = laplace_fit(sp);
    const double h = 1e-5 * sp.scaled_stds.maxCoeff();
    const double resid =
        oracles::central_diff([&](double g) { return exact_log_pdf(sp, g); }, lp.mode, h);
    CHECK(std::abs(resid) < 1e-8);
  }
}

TEST_CASE("gaussianity report on a true gaussian") {
  const auto sp = make_sp({0.0}, {1.0});
  Rng rng(60);
  const auto rep = gaussianity_report(sp, 100000, rng);
  CHECK(std::abs(rep.skewness) < 0.05);
  CHECK(rep.ks_gaussian < 0.01);
}

TEST_CASE("gaussianity report flags the skew of the two-component max") {
  const auto sp = make_sp({0.0, 0.0}, {1.0, 1.0});
  Rng rng(61);
  const auto rep = gaussianity_report(sp, 100000, rng);
  CHECK(rep.skewness > 0.05);
  CHECK(rep.ks_gumbel > 0.0);
}

TEST_CASE("gaussianity report runs for three components and serialises") {
  const auto sp = make_sp({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  Rng rng(62);
  const auto rep = gaussianity_report(sp, 10000, rng);
  CHECK(rep.sample_count == 10000);
  const auto kv = rep.to_flat_kv();
  CHECK(kv.size() == 8);
  CHECK(kv[3].first == "skewness");
  CHECK_THROWS_AS(gaussianity_report(sp, 100, rng), std::invalid_argument);
}

TEST_CASE("m=1 representations agree") {
  const auto sp = make_sp({0.4}, {1.1});
  // exact equals the gaussian density
  for (double g : {-1.0, 0.4, 2.0})
    CHECK(exact_pdf(sp, g) == doctest::Approx(norm_pdf((g - 0.4) / 1.1) / 1.1).epsilon(1e-10));
  // the laplace approximation recovers it exactly
  const auto lp = laplace_fit(sp);
  CHECK(lp.mode == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(1.0 / std::sqrt(lp.precision) == doctest::Approx(1.1).epsilon(1e-6));
  // the fitted gumbel stays within the stated tolerance of the exact law
  Rng rng(63);
  const auto samples = sample(sp, 100000, rng);
  const auto gum = fit_gumbel(samples);
  double ks = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double g = 0.4 - 6.0 * 1.1 + 12.0 * 1.1 * i / 4000.0;
    ks = std::max(ks, std::abs(gumbel_cdf(gum, g) - exact_cdf(sp, g)));
  }
  CHECK(ks < 0.03);
}
