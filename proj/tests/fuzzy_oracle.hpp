#pragma once

// Brute-force Mamdani reference used by the fuzzy tests: every one of the
// 25 rules is clipped and aggregated directly at each grid point.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fuzzy_l1/fuzzy_gain.hpp"

namespace oracle {

inline double hat(const fuzzy_l1::TriangularMF& m, double x) {
  if (x < m.l || x > m.h) return 0.0;
  const double rise = m.c > m.l ? (x - m.l) / (m.c - m.l) : 1.0;
  const double fall = m.h > m.c ? (m.h - x) / (m.h - m.c) : 1.0;
  return std::clamp(std::min(rise, fall), 0.0, 1.0);
}

// Rule base written as published: rows are the rate label, columns the error
// label, both ordered VL, L, S, VS, Z.
inline int rule(int e_label, int de_label) {
  static const int VL = 4, L = 3, S = 2, VS = 1, Z = 0;
  static const int table[5][5] = {
      {VL, VL, VL, VL, L},   // de = VL
      {VL, VL, VL, L, S},    // de = L
      {VL, VL, L, S, VS},    // de = S
      {VL, L, S, VS, VS},    // de = VS
      {L, S, VS, VS, Z},     // de = Z
  };
  return table[4 - de_label][4 - e_label];
}

inline std::array<double, 5> activations(const fuzzy_l1::FuzzyGainTuner& t, double en, double dn) {
  en = std::clamp(en, 0.0, 1.0);
  dn = std::clamp(dn, 0.0, 1.0);
  std::array<double, 5> act{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double w = std::min(hat(t.error_sets[i], en), hat(t.rate_sets[j], dn));
      act[rule(i, j)] = std::max(act[rule(i, j)], w);
    }
  return act;
}

// Aggregate membership from all 25 clipped rule consequents. `side` picks the
// left (-1) or right (+1) limit so shoulder edges are resolved.
inline double aggregate(const fuzzy_l1::FuzzyGainTuner& t, double en, double dn, double z, int side) {
  double mu = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double w = std::min(hat(t.error_sets[i], en), hat(t.rate_sets[j], dn));
      if (w <= 0.0) continue;
      const auto& m = t.output_sets[rule(i, j)];
      double v = hat(m, z);
      if (side < 0 && z == m.h && m.c == m.h) v = 1.0;
      if (side < 0 && z == m.l && m.l == m.c) v = 0.0;
      if (side > 0 && z == m.h && m.c == m.h) v = 0.0;
      if (side > 0 && z == m.l && m.l == m.c) v = 1.0;
      if (m.l == m.h) v = 0.0;
      mu = std::max(mu, std::min(w, v));
    }
  return mu;
}

inline double centroid(const fuzzy_l1::FuzzyGainTuner& t, double en, double dn) {
  en = std::clamp(en, 0.0, 1.0);
  dn = std::clamp(dn, 0.0, 1.0);
  std::vector<double> cuts;
  const long n = std::lround(t.universe_max / t.resolution);
  for (long k = 0; k < n; ++k) cuts.push_back(k * t.resolution);
  cuts.push_back(t.universe_max);
  const auto act = activations(t, en, dn);
  for (int o = 0; o < 5; ++o) {
    const auto& m = t.output_sets[o];
    if (act[o] > 0.0 && m.l < m.h && (m.l == m.c || m.c == m.h) && m.c > 0.0 && m.c < t.universe_max) cuts.push_back(m.c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const double fa = aggregate(t, en, dn, a, +1), fb = aggregate(t, en, dn, b, -1);
    den += (b - a) * (fa + fb) / 2;
    // z * mu is quadratic on the piece; Simpson is exact for it.
    const double mid = (a + b) / 2, fm = (fa + fb) / 2;
    num += (b - a) / 6 * (a * fa + 4 * mid * fm + b * fb);
  }
  return num / den;
}

}  // namespace oracle
