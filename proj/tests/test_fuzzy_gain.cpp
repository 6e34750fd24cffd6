#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzy_l1/fuzzy_gain.hpp"
#include "fuzzy_l1/pso.hpp"
#include "fuzzy_l1/scenario_io.hpp"
#include "fuzzy_oracle.hpp"

using namespace fuzzy_l1;
using doctest::Approx;

namespace {
FuzzyGainTuner tuner_for(const Particle& p) {
  FuzzyGainTuner t;
  t.output_sets = decode(p).sets;
  t.validate();
  return t;
}
const Particle kSample{6.0, 10.0, 2.0, 4.5, 8.0, 0.9, 2.5, 0.2, 1.0};
}  // namespace

TEST_CASE("membership evaluation") {
  const TriangularMF m{0, 0.5, 1};
  CHECK(mf_eval(m, 0.5) == 1.0);
  CHECK(mf_eval(m, 0.25) == Approx(0.5));
  CHECK(mf_eval(m, -0.1) == 0.0);
  CHECK(mf_eval(m, 1.1) == 0.0);
  CHECK(mf_eval({0, 0, 0.3}, 0.0) == 1.0);
  CHECK(mf_eval({0, 0, 0.3}, 0.15) == Approx(0.5));
  CHECK(mf_eval({0.54, 1, 1}, 1.0) == 1.0);
}

TEST_CASE("rule table agrees with the published orientation") {
  const auto& t = rule_table();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(static_cast<int>(t[i][j]) == oracle::rule(i, j));
}

TEST_CASE("inference corner cases") {
  const FuzzyGainTuner t = tuner_for(kSample);
  const auto vl = infer(t, 1.0, 1.0);
  CHECK(vl[4] == 1.0);
  for (int k = 0; k < 4; ++k) CHECK(vl[k] == 0.0);
  const auto z = infer(t, 0.0, 0.0);
  CHECK(z[0] == 1.0);
  for (int k = 1; k < 5; ++k) CHECK(z[k] == 0.0);
}

TEST_CASE("inference matches brute-force enumeration") {
  const FuzzyGainTuner t = tuner_for(kSample);
  // 0.195 sits halfway between the VS and S centers: degree 0.5 on each.
  for (double en : {0.195, 0.425, 0.77, 0.04}) {
    for (double dn : {0.195, 0.6, 0.9}) {
      const auto got = infer(t, en, dn);
      const auto want = oracle::activations(t, en, dn);
      for (int k = 0; k < 5; ++k) CHECK(got[k] == Approx(want[k]).epsilon(1e-15));
    }
  }
  const auto half = infer(t, 0.195, 0.195);
  CHECK(half[1] == Approx(0.5));
  CHECK(half[2] == Approx(0.5));
}

TEST_CASE("centroid examples") {
  MFSet sets{};
  for (auto& m : sets) m = {0, 0, 0};
  sets[4] = {4, 8, 12};
  CHECK(defuzzify_centroid(sets, {0, 0, 0, 0, 1}, 0.005) == Approx(8.0).epsilon(0.005 / 8));
  sets[0] = {0, 0, 0.3};
  CHECK(std::abs(defuzzify_centroid(sets, {1, 0, 0, 0, 0}, 0.005) - 0.1) <= 0.005);
  sets[1] = {1, 2, 3};
  sets[2] = {5, 6, 7};
  CHECK(std::abs(defuzzify_centroid(sets, {0, 0.5, 0.5, 0, 0}, 0.005) - 4.0) <= 0.005);
  CHECK_THROWS_AS(defuzzify_centroid(sets, {0, 0, 0, 0, 0}, 0.005), Error);
}

TEST_CASE("select_gain switch rule") {
  const FuzzyGainTuner t = tuner_for(kSample);
  CHECK(select_gain(t, 0.05, 100.0) == 20.0);
  CHECK(select_gain(t, -0.1, 0.0) == 20.0);
  CHECK(select_gain(t, 5.0, 10.0) == Approx(oracle::centroid(t, 0.5, 0.5)).epsilon(1e-12));
  const double saturated = select_gain(t, 1e6, 1e6);
  CHECK(saturated == Approx(oracle::centroid(t, 1.0, 1.0)).epsilon(1e-12));
  MFSet only_vl{};
  only_vl[4] = t.output_sets[4];
  CHECK(saturated == Approx(defuzzify_centroid(only_vl, {0, 0, 0, 0, 1}, t.resolution)).epsilon(1e-12));
}

TEST_CASE("gain surface properties on a grid") {
  for (const Particle& p : {default_tuned_particle(), kSample, particle_bounds().lower, particle_bounds().upper}) {
    const FuzzyGainTuner t = tuner_for(p);
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < 200; ++j) {
        const double e = -15.0 + 30.0 * i / 199.0;
        const double de = -30.0 + 60.0 * j / 199.0;
        const double k = select_gain(t, e, de);
        CHECK((k == t.k_const || (k > 0.0 && k <= 12.0)));
        CHECK(select_gain(t, -e, de) == k);
        CHECK(select_gain(t, e, -de) == k);
      }
    }
    FuzzyGainTuner fine = t;
    fine.resolution = t.resolution / 2;
    for (int j = 0; j <= 50; ++j) {
      for (int i = 0; i <= 50; ++i) {
        const double en = i / 50.0, dn = j / 50.0;
        const double k = defuzzify_centroid(t.output_sets, infer(t, en, dn), t.resolution);
        const double k_fine = defuzzify_centroid(fine.output_sets, infer(fine, en, dn), fine.resolution);
        CHECK(std::abs(k - k_fine) < 1e-3);
      }
    }
  }
}

TEST_CASE("gain is non-decreasing in the normalized error") {
  for (const Particle& p : {default_tuned_particle(), kSample, particle_bounds().lower, particle_bounds().upper}) {
    const FuzzyGainTuner t = tuner_for(p);
    for (int j = 0; j <= 50; ++j) {
      const double dn = j / 50.0;
      double previous = 0.0;
      for (int i = 0; i <= 50; ++i) {
        const double k = defuzzify_centroid(t.output_sets, infer(t, i / 50.0, dn), t.resolution);
        CHECK(k >= previous - 1e-9);
        previous = k;
      }
    }
  }
}

TEST_CASE("input set validation") {
  CHECK_NOTHROW(validate_input_sets(default_input_sets(), "error_sets"));
  MFSet gap = default_input_sets();
  gap[2].l = 0.31;  // S no longer overlaps VS
  CHECK_THROWS_AS(validate_input_sets(gap, "error_sets"), ConfigError);
  MFSet unordered = default_input_sets();
  unordered[3] = {0.6, 0.5, 1.0};
  CHECK_THROWS_AS(validate_input_sets(unordered, "error_sets"), ConfigError);
  FuzzyGainTuner t = tuner_for(kSample);
  t.kp = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
