#include "fuzzy_l1/pso.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <thread>

#include "fuzzy_l1/errors.hpp"

namespace fuzzy_l1 {

namespace {
enum Slot : std::size_t { VLl, VLc, Ll, Lc, Lh, Sl, Sc, VSl, VSc };

TriangularMF sorted_triple(double l, double c, double h, bool& repaired) {
  if (l <= c && c <= h) return {l, c, h};
  repaired = true;
  std::array<double, 3> v{l, c, h};
  std::sort(v.begin(), v.end());
  return {v[0], v[1], v[2]};
}
}  // namespace

const ParticleBounds& particle_bounds() {
  static const ParticleBounds b{{4.0, 8.0, 1.5, 3.0, 6.0, 0.3, 1.5, 0.0, 0.5},
                                {8.0, 12.0, 3.0, 6.0, 10.0, 1.5, 4.0, 0.5, 1.5}};
  return b;
}

bool within_bounds(const Particle& p, const ParticleBounds& bounds) {
  for (std::size_t j = 0; j < kParticleDim; ++j) {
    if (!(p[j] >= bounds.lower[j] && p[j] <= bounds.upper[j])) return false;
  }
  return true;
}

Particle clamp_to_bounds(const Particle& p, const ParticleBounds& bounds) {
  Particle out;
  for (std::size_t j = 0; j < kParticleDim; ++j) out[j] = std::clamp(p[j], bounds.lower[j], bounds.upper[j]);
  return out;
}

DecodedSets decode(const Particle& p) {
  DecodedSets d;
  auto& s = d.sets;
  s[static_cast<std::size_t>(Label::VL)] = sorted_triple(p[VLl], p[VLc], p[VLc], d.repaired);
  s[static_cast<std::size_t>(Label::L)] = sorted_triple(p[Ll], p[Lc], p[Lh], d.repaired);
  s[static_cast<std::size_t>(Label::S)] = sorted_triple(p[Sl], p[Sc], p[VLl], d.repaired);
  s[static_cast<std::size_t>(Label::VS)] = sorted_triple(p[VSl], p[VSc], p[Ll], d.repaired);
  s[static_cast<std::size_t>(Label::Z)] = sorted_triple(0.0, 0.0, p[Sl], d.repaired);
  return d;
}

Particle encode(const MFSet& sets) {
  const auto& vl = sets[static_cast<std::size_t>(Label::VL)];
  const auto& l = sets[static_cast<std::size_t>(Label::L)];
  const auto& s = sets[static_cast<std::size_t>(Label::S)];
  const auto& vs = sets[static_cast<std::size_t>(Label::VS)];
  return {vl.l, vl.c, l.l, l.c, l.h, s.l, s.c, vs.l, vs.c};
}

Velocity velocity_update(const Velocity& v, const Particle& x, const Particle& local_best, const Particle& global_best,
                         double inertia, double c1, double c2, const Particle& r1, const Particle& r2,
                         const ParticleBounds& bounds) {
  Velocity out;
  for (std::size_t j = 0; j < kParticleDim; ++j) {
    const double raw = inertia * v[j] + c1 * r1[j] * (local_best[j] - x[j]) + c2 * r2[j] * (global_best[j] - x[j]);
    const double vmax = bounds.width(j);
    out[j] = std::clamp(raw, -vmax, vmax);
  }
  return out;
}

Velocity velocity_update(const Velocity& v, const Particle& x, const Particle& local_best, const Particle& global_best,
                         double inertia, double c1, double c2, double r1, double r2, const ParticleBounds& bounds) {
  Particle a, b;
  a.fill(r1);
  b.fill(r2);
  return velocity_update(v, x, local_best, global_best, inertia, c1, c2, a, b, bounds);
}

Particle position_update(const Particle& x, const Velocity& v, const ParticleBounds& bounds) {
  Particle out;
  for (std::size_t j = 0; j < kParticleDim; ++j) out[j] = x[j] + v[j];
  return clamp_to_bounds(out, bounds);
}

void SwarmConfig::validate() const {
  if (population < 2) throw ConfigError("population", "population must be at least 2");
  if (generations < 1) throw ConfigError("generations", "generations must be at least 1");
  if (!(c1 >= 0.0)) throw ConfigError("c1", "c1 must be non-negative");
  if (!(c2 >= 0.0)) throw ConfigError("c2", "c2 must be non-negative");
  if (!(inertia > 0.0 && inertia <= 1.0)) throw ConfigError("inertia", "inertia must lie in (0, 1]");
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) throw ConfigError("gamma", "objective weights must be non-negative");
  if (workers < 1) throw ConfigError("workers", "workers must be at least 1");
}

std::vector<double> evaluate_all(const std::vector<Particle>& points, const Objective& objective, int workers) {
  std::vector<double> values(points.size());
  const std::size_t n_workers = std::min<std::size_t>(std::max(workers, 1), points.size());
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = objective(points[i]);
    return values;
  }
  std::vector<std::exception_ptr> errors(n_workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < points.size(); i += n_workers) values[i] = objective(points[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return values;
}

SwarmResult run_pso(const SwarmConfig& config, const Objective& objective) {
  config.validate();
  const auto& bounds = particle_bounds();
  const std::size_t np = static_cast<std::size_t>(config.population);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Particle> x(np), v(np), pbest(np);
  std::vector<double> pbest_value(np);
  for (auto& p : x) {
    for (std::size_t j = 0; j < kParticleDim; ++j) p[j] = bounds.lower[j] + unit(rng) * bounds.width(j);
  }
  for (auto& vel : v) vel.fill(0.0);

  SwarmResult result;
  result.history.reserve(static_cast<std::size_t>(config.generations));

  auto absorb = [&](const std::vector<double>& values, bool first) {
    for (std::size_t i = 0; i < np; ++i) {
      if (first || values[i] < pbest_value[i]) {
        pbest[i] = x[i];
        pbest_value[i] = values[i];
      }
      if ((first && i == 0) || pbest_value[i] < result.best_value) {
        result.best = pbest[i];
        result.best_value = pbest_value[i];
      }
    }
    result.evaluations += np;
    result.history.push_back(result.best_value);
  };

  absorb(evaluate_all(x, objective, config.workers), true);

  for (int g = 1; g < config.generations; ++g) {
    const double w = std::pow(config.inertia, g);
    for (std::size_t i = 0; i < np; ++i) {
      Particle r1, r2;
      if (config.per_dimension_random) {
        for (auto& r : r1) r = unit(rng);
        for (auto& r : r2) r = unit(rng);
      } else {
        r1.fill(unit(rng));
        r2.fill(unit(rng));
      }
      v[i] = velocity_update(v[i], x[i], pbest[i], result.best, w, config.c1, config.c2, r1, r2, bounds);
      x[i] = position_update(x[i], v[i], bounds);
      assert(within_bounds(x[i], bounds));
    }
    absorb(evaluate_all(x, objective, config.workers), false);
  }
  return result;
}

double tracking_cost(const Trajectory& traj, double gamma1, double gamma2) {
  double sum = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) sum += gamma1 * traj.e[i] * traj.e[i] + gamma2 * traj.u[i] * traj.u[i];
  return sum;
}

FuzzyGainTuner make_tuner(const PlantScenario& scenario, const MFSet& output_sets) {
  FuzzyGainTuner tuner;
  tuner.kp = scenario.kp;
  tuner.kd = scenario.kd;
  tuner.ke = scenario.ke;
  tuner.k_const = scenario.feedback_gain;
  tuner.output_sets = output_sets;
  tuner.validate();
  return tuner;
}

double evaluate_objective(const Particle& p, const PlantScenario& scenario, const SimulationOptions& options,
                          double gamma1, double gamma2) {
  const FuzzyGain gains(make_tuner(scenario, decode(p).sets));
  const Trajectory traj = simulate(scenario, gains, options);
  if (traj.diverged) return kDivergencePenalty + (options.grid.tf - traj.t_fail);
  return tracking_cost(traj, gamma1, gamma2);
}

}  // namespace fuzzy_l1
