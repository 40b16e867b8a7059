#pragma once

#include <cstdint>
#include <vector>

#include "orlicz/field.hpp"
#include "orlicz/modular.hpp"

namespace orlicz {

/// Symmetric decreasing rearrangement: values sorted in descending order and
/// placed on cells ordered by distance to the origin, ties broken by the
/// lexicographically smaller center. Throws DomainError on negative values.
Field schwarz(const Field& u);

/// Two-point rearrangement: max(u(x), u(x~)) on H, min on its mirror image.
/// Throws DomainError for a half-space that is not grid-compatible, or when a
/// negative value would have to move off the grid.
Field polarize(const Field& u, const HalfSpace& H);

/// Half-spaces used by the iterated scheme in 1D: boundaries at j h / 2 for
/// |j| <= 2K - 1, each with H the side containing 0 ({x <= 0} when j = 0).
std::vector<HalfSpace> iteration_half_spaces(const Grid& grid);

struct PolarizationStep {
  HalfSpace half_space;
  double phi = 0.0;       // Phi_MNG after the step
  double distance = 0.0;  // L^G distance to the Schwarz rearrangement
  bool changed = false;
};

struct PolarizationTrace {
  double initial_phi = 0.0;
  double initial_distance = 0.0;
  std::vector<PolarizationStep> steps;
  int iterations = 0;
  bool converged = false;
};

struct PolarizationRun {
  Field result;
  PolarizationTrace trace;
};

/// Applies polarizations drawn from a seeded shuffle of iteration_half_spaces
/// (every epoch visits each of them once) until the L^G distance to schwarz(u)
/// is at most tol or max_iter steps were taken. 1D grids only.
PolarizationRun iterate_polarizations(const Field& u, const YoungFunction& G,
                                      const PairTable& table, std::uint64_t seed, double tol,
                                      int max_iter);

}  // namespace orlicz
