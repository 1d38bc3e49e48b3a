#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halfflow/flow.hpp"

namespace halfflow {

struct CheckRow {
  std::string name;
  double max_err = 0.0;
  double threshold = 0.0;
  bool pass() const { return max_err <= threshold; }
};

// Finite-difference validation of the two first-variation formulas over
// fixed seeds.
std::vector<CheckRow> check_variations();

// Structural identities: DtN pairing/symmetry, projector algebra,
// stress-tensor and chart conventions, collar formulas.
std::vector<CheckRow> check_identities();

// Deterministic band-limited field with coefficients decaying like
// 1/(1+k)^2; amplitude scales the whole field.
BoundaryField random_band_limited(int circles, int ambient_dim, int max_mode,
                                  int band, double amplitude, std::uint64_t seed);

// Band-limited field with trace on the target: base map (equator /
// straight cylinder) plus noise, reprojected pointwise.
BoundaryField random_on_target(const DomainSpec& domain, const TargetManifold& target,
                               int max_mode, double noise, std::uint64_t seed);

}  // namespace halfflow
