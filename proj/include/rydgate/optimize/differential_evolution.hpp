#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "rydgate/error.hpp"

namespace rydgate::optimize {

struct DEConfig {
  int population_factor = 15;  // population = factor * dim
  double F = 0.7;
  double CR = 0.9;
  int max_generations = 300;
  double tol = 1e-8;  // stop when std(f) <= tol * |mean(f)| + atol
  double atol = 0;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct DEResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();  // minimized objective
  int generations = 0;
  long evaluations = 0;
  long rejected = 0;  // non-finite objective values
  bool converged = false;
  std::vector<double> history;  // best value after each generation, index 0 = initial population
  double seconds = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

namespace detail {

inline void evaluate_all(const Objective& f, const std::vector<std::vector<double>>& xs, std::vector<double>& out,
                         int workers) {
  out.assign(xs.size(), 0.0);
  const std::size_t n = xs.size();
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(xs[i]);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(w);
  for (std::size_t k = 0; k < w; ++k)
    pool.emplace_back([&, k] {
      try {
        for (std::size_t i = k; i < n; i += w) out[i] = f(xs[i]);
      } catch (...) {
        errs[k] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Minimizes f over the box [lo, hi] with DE/rand/1/bin. Trial vectors for a generation are
// drawn first from a single RNG stream, evaluated (optionally in parallel), then selected
// greedily in index order, so results depend only on the seed.
inline DEResult differential_evolution(const Objective& f, const std::vector<double>& lo,
                                       const std::vector<double>& hi, const DEConfig& cfg,
                                       const std::optional<std::vector<double>>& x0 = std::nullopt) {
  const std::size_t dim = lo.size();
  if (dim == 0 || hi.size() != dim) throw domain_error("optimize", "bounds must be non-empty and matching");
  for (std::size_t d = 0; d < dim; ++d)
    if (!(lo[d] < hi[d])) throw domain_error("optimize", "degenerate bounds");
  const std::size_t np = std::max<std::size_t>(4, static_cast<std::size_t>(cfg.population_factor) * dim);

  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto clip = [&](std::vector<double>& x) {
    for (std::size_t d = 0; d < dim; ++d) x[d] = std::clamp(x[d], lo[d], hi[d]);
  };

  std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
  for (auto& x : pop)
    for (std::size_t d = 0; d < dim; ++d) x[d] = lo[d] + U(rng) * (hi[d] - lo[d]);
  if (x0) {
    if (x0->size() != dim) throw domain_error("optimize", "warm start has wrong dimension");
    pop[0] = *x0;
    clip(pop[0]);
  }

  DEResult res;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> fit;
  detail::evaluate_all(f, pop, fit, cfg.workers);
  res.evaluations += static_cast<long>(np);
  for (double& v : fit)
    if (!std::isfinite(v)) {
      v = inf;
      ++res.rejected;
    }

  auto best_index = [&] { return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin()); };
  res.history.push_back(fit[best_index()]);

  auto spread_ok = [&] {
    double m = 0, s = 0;
    for (double v : fit) {
      if (!std::isfinite(v)) return false;
      m += v;
    }
    m /= static_cast<double>(np);
    for (double v : fit) s += (v - m) * (v - m);
    s = std::sqrt(s / static_cast<double>(np));
    return s <= cfg.atol + cfg.tol * std::abs(m);
  };

  std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
  std::uniform_int_distribution<std::size_t> pick(0, np - 1), pickd(0, dim - 1);
  for (int g = 0; g < cfg.max_generations; ++g) {
    if (spread_ok()) {
      res.converged = true;
      break;
    }
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r1, r2, r3;
      do r1 = pick(rng); while (r1 == i);
      do r2 = pick(rng); while (r2 == i || r2 == r1);
      do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
      std::size_t jr = pickd(rng);
      auto& t = trials[i];
      for (std::size_t d = 0; d < dim; ++d) {
        bool cross = U(rng) < cfg.CR || d == jr;
        t[d] = cross ? pop[r1][d] + cfg.F * (pop[r2][d] - pop[r3][d]) : pop[i][d];
      }
      clip(t);
    }
    std::vector<double> tf;
    detail::evaluate_all(f, trials, tf, cfg.workers);
    res.evaluations += static_cast<long>(np);
    for (std::size_t i = 0; i < np; ++i) {
      if (!std::isfinite(tf[i])) {
        ++res.rejected;
        continue;
      }
      if (tf[i] <= fit[i]) {
        pop[i] = trials[i];
        fit[i] = tf[i];
      }
    }
    res.generations = g + 1;
    res.history.push_back(fit[best_index()]);
  }
  auto b = best_index();
  res.x = pop[b];
  res.value = fit[b];
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace rydgate::optimize
