#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fuzzy_l1/closed_loop.hpp"
#include "fuzzy_l1/fuzzy_gain.hpp"
#include "fuzzy_l1/plant.hpp"

namespace fuzzy_l1 {

inline constexpr std::size_t kParticleDim = 9;

// Free output-MF parameters: VL_l, VL_c, L_l, L_c, L_h, S_l, S_c, VS_l, VS_c.
using Particle = std::array<double, kParticleDim>;

struct ParticleBounds {
  Particle lower;
  Particle upper;
  double width(std::size_t j) const { return upper[j] - lower[j]; }
};

const ParticleBounds& particle_bounds();

bool within_bounds(const Particle& p, const ParticleBounds& bounds = particle_bounds());
Particle clamp_to_bounds(const Particle& p, const ParticleBounds& bounds = particle_bounds());

struct DecodedSets {
  MFSet sets;
  bool repaired = false;
};

/// Expands the 9 free values into the five output triples using the tie
/// relations VL_h = VL_c, S_h = VL_l, VS_h = L_l, Z = (0, 0, S_l). A triple
/// that comes out unordered is sorted and flagged.
DecodedSets decode(const Particle& p);
Particle encode(const MFSet& sets);

using Velocity = Particle;

Velocity velocity_update(const Velocity& v, const Particle& x, const Particle& local_best, const Particle& global_best,
                         double inertia, double c1, double c2, const Particle& r1, const Particle& r2,
                         const ParticleBounds& bounds = particle_bounds());
Velocity velocity_update(const Velocity& v, const Particle& x, const Particle& local_best, const Particle& global_best,
                         double inertia, double c1, double c2, double r1, double r2,
                         const ParticleBounds& bounds = particle_bounds());

Particle position_update(const Particle& x, const Velocity& v, const ParticleBounds& bounds = particle_bounds());

struct SwarmConfig {
  int population = 10;
  int generations = 10;
  double c1 = 2.0;
  double c2 = 2.0;
  double inertia = 0.99;  // alpha; generation g uses alpha^g
  double lambda = 10.0;   // recorded only
  std::uint64_t seed = 1;
  double gamma1 = 1.0;
  double gamma2 = 1e-6;
  bool per_dimension_random = false;
  int workers = 1;

  void validate() const;
};

struct SwarmResult {
  Particle best{};
  double best_value = 0.0;
  std::vector<double> history;  // best value after each generation
  std::size_t evaluations = 0;
};

using Objective = std::function<double(const Particle&)>;

/// Runs the swarm. Generation 0 is the uniform initialization; every later
/// generation moves all particles and re-evaluates them. Objective values are
/// computed on `workers` threads and reduced in particle order, so the result
/// depends only on the seed.
SwarmResult run_pso(const SwarmConfig& config, const Objective& objective);

/// Evaluates f on every point, spreading the calls over `workers` threads.
std::vector<double> evaluate_all(const std::vector<Particle>& points, const Objective& objective, int workers);

inline constexpr double kDivergencePenalty = 1e12;

// Sum of gamma1 e^2 + gamma2 u^2 over every recorded sample.
double tracking_cost(const Trajectory& traj, double gamma1, double gamma2);

/// Closed-loop rollout cost of particle p under the fuzzy controller;
/// a diverging rollout costs kDivergencePenalty + (t_end - t_fail).
double evaluate_objective(const Particle& p, const PlantScenario& scenario, const SimulationOptions& options,
                          double gamma1, double gamma2);

FuzzyGainTuner make_tuner(const PlantScenario& scenario, const MFSet& output_sets);

}  // namespace fuzzy_l1
