#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace fuzzy_l1 {

struct TriangularMF {
  double l = 0.0;
  double c = 0.0;
  double h = 0.0;
};

/// Piecewise-linear hat: 0 outside [l, h], 1 at c. A coincident edge
/// (l == c or c == h) is a shoulder with degree 1 at that edge.
double mf_eval(const TriangularMF& mf, double x);

enum class Label : std::size_t { Z = 0, VS = 1, S = 2, L = 3, VL = 4 };
inline constexpr std::size_t kLabelCount = 5;

std::string_view label_name(Label label);

using MFSet = std::array<TriangularMF, kLabelCount>;  // indexed by Label
using Activations = std::array<double, kLabelCount>;
using RuleTable = std::array<std::array<Label, kLabelCount>, kLabelCount>;  // [e label][de label]

// 5x5 rule base: output label for each (|e| label, |de| label) pair.
const RuleTable& rule_table();

/// Evenly laddered input partition of [0, 1] with the 0.08 knee.
MFSet default_input_sets();

// Throws ConfigError when a triple is unordered or a set's centers are not increasing.
void validate_input_sets(const MFSet& sets, std::string_view field);
void validate_output_sets(const MFSet& sets, std::string_view field);

struct FuzzyGainTuner {
  double kp = 0.1;
  double kd = 0.05;
  double ke = 0.1;
  double k_const = 20.0;
  MFSet error_sets = default_input_sets();
  MFSet rate_sets = default_input_sets();
  MFSet output_sets{};
  double resolution = 0.005;
  double universe_max = 12.0;

  void validate() const;
};

/// Fires all 25 rules (AND = min) and aggregates per output label with max.
/// Inputs are the normalized magnitudes, clamped to [0, 1].
Activations infer(const FuzzyGainTuner& tuner, double e_norm, double de_norm);

/// Centroid of the max-aggregate of the clipped output sets over the grid
/// {0, res, ..., universe_max}. Each cell is integrated as a linear piece;
/// cells holding the vertical edge of a shoulder set are split at the edge.
double defuzzify_centroid(const MFSet& output_sets, const Activations& activations, double resolution,
                          double universe_max = 12.0);

/// Feedback gain for the current error: the fuzzy output when |e| > ke,
/// the constant gain otherwise.
double select_gain(const FuzzyGainTuner& tuner, double e, double e_dot);

}  // namespace fuzzy_l1
