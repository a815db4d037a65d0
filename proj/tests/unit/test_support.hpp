#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "stoprule/variants.hpp"

namespace testsup {

/// Reference limits, frozen from an independent high-precision evaluation of
/// the closed forms (30 significant digits, rounded to double here).
struct FrozenLimit {
  stoprule::VariantId id;
  double theta;
  double payoff;
};

inline const std::vector<FrozenLimit>& frozen_limits() {
  using stoprule::VariantId;
  static const std::vector<FrozenLimit> table = {
      {VariantId::classical, 0.367879441171442321595523770161, 0.367879441171442321595523770161},
      {VariantId::postdoc, 0.5, 0.25},
      {VariantId::best_or_worst, 0.5, 0.5},
      {VariantId::uncertain, 0.25, 0.25},  // p = 1/2
      {VariantId::cost, 0.329192987807905583369923952098,
       0.296273689027115025032931556888},  // c = 0.1
      {VariantId::win_lose_draw, 0.606530659712633423603799534991,
       0.213061319425266847207599069982},  // alpha = beta = 1, gamma = 0
      {VariantId::duration, 0.203187869979979953838479062062,
       0.161902559472978714911800490494},
      {VariantId::multicriteria, 0.577350269189625764509148780502,
       0.577350269189625764509148780502},  // m = 3
      {VariantId::random_n, 0.135335283236612691893999494972,
       0.270670566473225383787998989945},
      {VariantId::lottery, 0.306852819440054690582767878542,
       0.306852819440054690582767878542},  // identity prize
      {VariantId::wildcard, 0.545605016560749744861914679986,
       0.520722690744868613943669990088},
      {VariantId::interruption, 0.271054590321180799501545429466,
       0.206699417909639277253465543008},
      {VariantId::penalty, 0.637417326384495364610752305248,
       0.175184369565821216363244126605},  // b = 2
  };
  return table;
}

/// Every catalog id, in catalog order.
inline std::vector<stoprule::VariantId> all_variant_ids() {
  std::vector<stoprule::VariantId> ids;
  for (const auto& info : stoprule::catalog()) ids.push_back(info.id);
  return ids;
}

/// Ei(-1), same provenance as frozen_limits().
inline constexpr double kEiMinusOne = -0.219383934395520273677163775460;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testsup
