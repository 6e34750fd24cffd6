#include "fuzzy_l1/fuzzy_gain.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fuzzy_l1/errors.hpp"

namespace fuzzy_l1 {

double mf_eval(const TriangularMF& mf, double x) {
  if (x < mf.l || x > mf.h) return 0.0;
  if (x == mf.c) return 1.0;
  if (x < mf.c) return (x - mf.l) / (mf.c - mf.l);
  return (mf.h - x) / (mf.h - mf.c);
}

std::string_view label_name(Label label) {
  static constexpr std::array<std::string_view, kLabelCount> names{"Z", "VS", "S", "L", "VL"};
  return names[static_cast<std::size_t>(label)];
}

const RuleTable& rule_table() {
  using enum Label;
  // Rows: |e| label Z..VL, columns: |de| label Z..VL.
  static const RuleTable table{{
      {Z, VS, VS, S, L},       // e = Z
      {VS, VS, S, L, VL},      // e = VS
      {VS, S, L, VL, VL},      // e = S
      {S, L, VL, VL, VL},      // e = L
      {L, VL, VL, VL, VL},     // e = VL
  }};
  return table;
}

MFSet default_input_sets() {
  return {{
      {0.0, 0.0, 0.08},
      {0.0, 0.08, 0.31},
      {0.08, 0.31, 0.54},
      {0.31, 0.54, 1.0},
      {0.54, 1.0, 1.0},
  }};
}

namespace {

void validate_triples(const MFSet& sets, std::string_view field) {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const auto& mf = sets[i];
    if (!(mf.l <= mf.c && mf.c <= mf.h)) {
      throw ConfigError(std::string(field),
                        std::string(field) + ": label " + std::string(label_name(Label(i))) + " needs l <= c <= h");
    }
  }
}

}  // namespace

void validate_input_sets(const MFSet& sets, std::string_view field) {
  validate_triples(sets, field);
  for (std::size_t i = 1; i < kLabelCount; ++i) {
    if (!(sets[i - 1].c < sets[i].c)) {
      throw ConfigError(std::string(field), std::string(field) + ": label centers must be strictly increasing");
    }
  }
  if (sets.front().l > 0.0 || sets.back().h < 1.0) {
    throw ConfigError(std::string(field), std::string(field) + ": sets must cover [0, 1]");
  }
  // Consecutive supports must overlap so no interior point has zero membership.
  for (std::size_t i = 1; i < kLabelCount; ++i) {
    if (!(sets[i].l < sets[i - 1].h)) {
      throw ConfigError(std::string(field), std::string(field) + ": gap between adjacent labels");
    }
  }
}

void validate_output_sets(const MFSet& sets, std::string_view field) { validate_triples(sets, field); }

void FuzzyGainTuner::validate() const {
  if (!(kp > 0.0)) throw ConfigError("kp", "kp must be positive");
  if (!(kd > 0.0)) throw ConfigError("kd", "kd must be positive");
  if (!(ke > 0.0)) throw ConfigError("ke", "ke must be positive");
  if (!(k_const > 0.0)) throw ConfigError("feedback_gain", "constant gain must be positive");
  if (!(resolution > 0.0 && resolution < universe_max)) {
    throw ConfigError("output_resolution", "output resolution must lie in (0, universe_max)");
  }
  validate_input_sets(error_sets, "error_sets");
  validate_input_sets(rate_sets, "rate_sets");
  validate_output_sets(output_sets, "output_sets");
}

Activations infer(const FuzzyGainTuner& tuner, double e_norm, double de_norm) {
  e_norm = std::clamp(e_norm, 0.0, 1.0);
  de_norm = std::clamp(de_norm, 0.0, 1.0);
  std::array<double, kLabelCount> mu_e{}, mu_de{};
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    mu_e[i] = mf_eval(tuner.error_sets[i], e_norm);
    mu_de[i] = mf_eval(tuner.rate_sets[i], de_norm);
  }
  Activations act{};
  const RuleTable& rules = rule_table();
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (mu_e[i] == 0.0) continue;
    for (std::size_t j = 0; j < kLabelCount; ++j) {
      const auto out = static_cast<std::size_t>(rules[i][j]);
      act[out] = std::max(act[out], std::min(mu_e[i], mu_de[j]));
    }
  }
  return act;
}

namespace {

// One-sided limits of a membership function; they differ only at a shoulder edge.
double mf_left_limit(const TriangularMF& mf, double x) {
  if (x <= mf.l || x > mf.h) return 0.0;
  if (x <= mf.c) return (x - mf.l) / (mf.c - mf.l);
  return (mf.h - x) / (mf.h - mf.c);
}

double mf_right_limit(const TriangularMF& mf, double x) {
  if (x < mf.l || x >= mf.h) return 0.0;
  if (x < mf.c) return (x - mf.l) / (mf.c - mf.l);
  return (mf.h - x) / (mf.h - mf.c);
}

}  // namespace

double defuzzify_centroid(const MFSet& output_sets, const Activations& activations, double resolution,
                          double universe_max) {
  if (std::none_of(activations.begin(), activations.end(), [](double a) { return a > 0.0; })) {
    throw Error("defuzzify_centroid: no rule fired");
  }
  auto aggregate = [&](double z, bool from_left) {
    double mu = 0.0;
    for (std::size_t o = 0; o < kLabelCount; ++o) {
      if (activations[o] <= 0.0) continue;
      const double m = from_left ? mf_left_limit(output_sets[o], z) : mf_right_limit(output_sets[o], z);
      mu = std::max(mu, std::min(activations[o], m));
    }
    return mu;
  };

  // Vertical edges of shoulder sets; cells containing one are split there.
  std::vector<double> edges;
  for (std::size_t o = 0; o < kLabelCount; ++o) {
    const auto& mf = output_sets[o];
    if (activations[o] > 0.0 && mf.l < mf.h && (mf.l == mf.c || mf.c == mf.h)) edges.push_back(mf.c);
  }
  std::sort(edges.begin(), edges.end());

  // Each piece is integrated as a linear segment between its end values.
  double moment = 0.0;
  double mass = 0.0;
  auto piece = [&](double a, double b) {
    const double ma = aggregate(a, false), mb = aggregate(b, true);
    mass += 0.5 * (b - a) * (ma + mb);
    moment += (b - a) * (ma * (2.0 * a + b) + mb * (a + 2.0 * b)) / 6.0;
  };

  const auto cells = static_cast<std::size_t>(std::llround(universe_max / resolution));
  auto edge = edges.begin();
  for (std::size_t k = 0; k < cells; ++k) {
    double a = static_cast<double>(k) * resolution;
    const double b = k + 1 == cells ? universe_max : static_cast<double>(k + 1) * resolution;
    while (edge != edges.end() && *edge <= a) ++edge;
    for (; edge != edges.end() && *edge < b; ++edge) {
      piece(a, *edge);
      a = *edge;
    }
    piece(a, b);
  }
  if (!(mass > 0.0)) throw Error("defuzzify_centroid: aggregate output set is empty");
  return moment / mass;
}

double select_gain(const FuzzyGainTuner& tuner, double e, double e_dot) {
  if (!(std::abs(e) > tuner.ke)) return tuner.k_const;
  const Activations act = infer(tuner, tuner.kp * std::abs(e), tuner.kd * std::abs(e_dot));
  return defuzzify_centroid(tuner.output_sets, act, tuner.resolution, tuner.universe_max);
}

}  // namespace fuzzy_l1
