#include "mobo/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mobo {

void GaConfig::validate() const {
  if (population < 4 || population % 2 != 0)
    throw std::invalid_argument("GaConfig.population must be even and >= 4");
  if (generations < 1) throw std::invalid_argument("GaConfig.generations must be >= 1");
  if (crossover_prob < 0.0 || crossover_prob > 1.0)
    throw std::invalid_argument("GaConfig.crossover_prob must lie in [0,1]");
  if (mutation_prob > 1.0)
    throw std::invalid_argument("GaConfig.mutation_prob must lie in [0,1]");
  if (sbx_eta <= 0.0) throw std::invalid_argument("GaConfig.sbx_eta must be positive");
  if (pm_eta <= 0.0) throw std::invalid_argument("GaConfig.pm_eta must be positive");
}

namespace {

void sbx_crossover(Eigen::VectorXd& a, Eigen::VectorXd& b, double eta, Rng& rng) {
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (rng.uniform() > 0.5) continue;
    if (std::abs(a[j] - b[j]) < 1e-14) continue;
    const double u = rng.uniform();
    const double beta_q = (u <= 0.5)
                              ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                              : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    const double x1 = a[j], x2 = b[j];
    a[j] = 0.5 * ((1.0 + beta_q) * x1 + (1.0 - beta_q) * x2);
    b[j] = 0.5 * ((1.0 - beta_q) * x1 + (1.0 + beta_q) * x2);
  }
}

void polynomial_mutation(Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, double rate, double eta, Rng& rng) {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (rng.uniform() >= rate) continue;
    const double u = rng.uniform();
    const double delta = (u < 0.5) ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                                   : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
    x[j] += delta * (upper[j] - lower[j]);
  }
}

}  // namespace

GaResult ga_maximise(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const GaConfig& cfg) {
  cfg.validate();
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("ga_maximise: bound dimensions disagree");
  if (((upper - lower).array() <= 0.0).any())
    throw std::invalid_argument("ga_maximise: lower bound must be below upper bound");

  const auto n = lower.size();
  const int pop = cfg.population;
  const double mutation_rate =
      cfg.mutation_prob < 0.0 ? 1.0 / static_cast<double>(n) : cfg.mutation_prob;
  Rng rng(cfg.seed);

  auto clamp = [&](Eigen::VectorXd& x) { x = x.cwiseMax(lower).cwiseMin(upper); };

  std::vector<Eigen::VectorXd> population(pop, Eigen::VectorXd(n));
  std::vector<double> fitness(pop);
  for (int i = 0; i < pop; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) population[i][j] = rng.uniform(lower[j], upper[j]);
    fitness[i] = objective(population[i]);
  }

  int best_idx = static_cast<int>(
      std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
  GaResult best{population[best_idx], fitness[best_idx]};

  auto tournament = [&]() -> int {
    const int i = rng.uniform_int(pop);
    const int j = rng.uniform_int(pop);
    return fitness[i] >= fitness[j] ? i : j;
  };

  std::vector<Eigen::VectorXd> offspring;
  std::vector<double> offspring_fitness(pop);
  offspring.reserve(pop);
  for (int gen = 0; gen < cfg.generations; ++gen) {
    offspring.clear();
    while (static_cast<int>(offspring.size()) < pop) {
      Eigen::VectorXd c1 = population[tournament()];
      Eigen::VectorXd c2 = population[tournament()];
      if (rng.uniform() < cfg.crossover_prob) sbx_crossover(c1, c2, cfg.sbx_eta, rng);
      polynomial_mutation(c1, lower, upper, mutation_rate, cfg.pm_eta, rng);
      polynomial_mutation(c2, lower, upper, mutation_rate, cfg.pm_eta, rng);
      clamp(c1);
      clamp(c2);
      offspring.push_back(std::move(c1));
      offspring.push_back(std::move(c2));
    }
    for (int i = 0; i < pop; ++i) offspring_fitness[i] = objective(offspring[i]);

    // elitism: the best-so-far individual replaces the worst offspring
    const int worst = static_cast<int>(
        std::min_element(offspring_fitness.begin(), offspring_fitness.end()) -
        offspring_fitness.begin());
    offspring[worst] = best.best_x;
    offspring_fitness[worst] = best.best_value;

    population.swap(offspring);
    fitness.swap(offspring_fitness);
    for (int i = 0; i < pop; ++i) {
      if (fitness[i] > best.best_value) {
        best.best_value = fitness[i];
        best.best_x = population[i];
      }
    }
  }
  return best;
}

QnResult quasi_newton_maximise(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper, int max_iter) {
  const auto n = x0.size();
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("quasi_newton_maximise: bound dimensions disagree");

  auto clamp = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x.cwiseMax(lower).cwiseMin(upper);
  };

  auto numeric_gradient = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double h = 1e-6;
    Eigen::VectorXd g(n), xp = x, xm = x;
    for (Eigen::Index j = 0; j < n; ++j) {
      xp[j] = x[j] + h;
      xm[j] = x[j] - h;
      g[j] = (objective(xp) - objective(xm)) / (2.0 * h);
      xp[j] = x[j];
      xm[j] = x[j];
    }
    return g;
  };
  auto grad = [&](const Eigen::VectorXd& x) {
    return gradient ? gradient(x) : numeric_gradient(x);
  };

  Eigen::VectorXd x = clamp(x0);
  double fx = objective(x);
  QnResult best{x, fx, false};

  Eigen::VectorXd g = grad(x);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool h_is_fresh = true;
  const double bound_eps = 1e-12;
  // raw-gradient steps are capped relative to the box so the line search does
  // not start miles outside it
  const double max_step = 0.25 * (upper - lower).lpNorm<Eigen::Infinity>();

  // components pushing outside an active bound are frozen
  auto project_direction = [&](const Eigen::VectorXd& xc, Eigen::VectorXd d) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if ((xc[j] <= lower[j] + bound_eps && d[j] < 0.0) ||
          (xc[j] >= upper[j] - bound_eps && d[j] > 0.0))
        d[j] = 0.0;
    }
    return d;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd g_proj = project_direction(x, g);
    if (g_proj.lpNorm<Eigen::Infinity>() < 1e-7 * std::max(1.0, std::abs(fx))) {
      best.converged = true;
      break;
    }

    Eigen::VectorXd d = project_direction(x, H * g);
    if (d.dot(g_proj) <= 0.0) {
      H.setIdentity();
      h_is_fresh = true;
      d = g_proj;
    }

    double alpha = 1.0;
    if (h_is_fresh) {
      const double dinf = d.lpNorm<Eigen::Infinity>();
      if (dinf > max_step) alpha = max_step / dinf;
    }
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = fx;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = clamp(x + alpha * d);
      const Eigen::VectorXd step = x_new - x;
      if (step.lpNorm<Eigen::Infinity>() < 1e-15) {
        alpha *= 0.5;
        continue;
      }
      f_new = objective(x_new);
      if (f_new >= fx + 1e-4 * g.dot(step)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // line-search failure: report best-so-far, converged stays false

    const Eigen::VectorXd g_new = grad(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g - g_new;  // gradient change of the minimised -f
    const double ys = y.dot(s);
    if (ys > 1e-12 * s.norm() * (y.norm() + 1e-300)) {
      if (h_is_fresh) {
        H *= ys / y.squaredNorm();  // Shanno-Phua seeding of the fresh approximation
        h_is_fresh = false;
      }
      const double rho = 1.0 / ys;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }

    x = x_new;
    fx = f_new;
    g = g_new;
    if (fx > best.value) {
      best.value = fx;
      best.x = x;
    }
  }
  if (fx > best.value) {
    best.value = fx;
    best.x = x;
  }
  return best;
}

double safeguarded_newton_1d(const std::function<double(double)>& derivative,
                             double a, double b, double tol) {
  if (!(a < b)) throw std::invalid_argument("safeguarded_newton_1d: need a < b");
  double fa = derivative(a);
  double fb = derivative(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw std::invalid_argument("safeguarded_newton_1d: no sign change over bracket");

  // previous point for the secant slope: the bracket end with the smaller |f|
  double x_prev = (std::abs(fa) < std::abs(fb)) ? a : b;
  double f_prev = (std::abs(fa) < std::abs(fb)) ? fa : fb;
  double x = 0.5 * (a + b);

  for (int iter = 0; iter < 200; ++iter) {
    const double fx = derivative(x);
    if (std::abs(fx) < tol) return x;
    if (fx * fa > 0.0) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }

    double x_next;
    const double df = fx - f_prev;
    if (x != x_prev && df != 0.0) {
      x_next = x - fx * (x - x_prev) / df;
      if (!(x_next > a && x_next < b) || !std::isfinite(x_next)) x_next = 0.5 * (a + b);
    } else {
      x_next = 0.5 * (a + b);
    }
    x_prev = x;
    f_prev = fx;
    x = x_next;
  }
  throw std::runtime_error("safeguarded_newton_1d: no convergence in 200 iterations");
}

}  // namespace mobo
