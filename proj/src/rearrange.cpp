#include "orlicz/rearrange.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "orlicz/numerics.hpp"

namespace orlicz {

namespace {

void require_nonnegative(const Field& u, const char* what) {
  const Grid& g = u.grid();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) {
      const auto c = g.index(i);
      std::ostringstream msg;
      msg << what << ": negative value " << u[i] << " at cell (" << c[0];
      if (g.n() == 2) msg << "," << c[1];
      msg << "); rearrangements are defined for nonnegative fields";
      throw DomainError(msg.str());
    }
  }
}

Field difference(const Field& a, const Field& b) {
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

double distance(const Field& u, const Field& target, const YoungFunction& G) {
  if (u == target) return 0.0;
  return lg_norm(difference(u, target), G);
}

}  // namespace

Field schwarz(const Field& u) {
  require_nonnegative(u, "schwarz");
  const Grid& g = u.grid();
  const auto order = radial_order(g);
  std::vector<double> vals = u.values();
  std::stable_sort(vals.begin(), vals.end(), std::greater<>());
  Field out(g);
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = vals[k];
  return out;
}

Field polarize(const Field& u, const HalfSpace& H) {
  const Grid& g = u.grid();
  if (!is_grid_compatible(H, g)) {
    throw DomainError("polarize: half-space " + H.describe(g.h()) + " is not grid-compatible");
  }
  Field out = u;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.index(i);
    if (!H.contains(c)) continue;
    const auto m = H.reflect(c);
    if (m == c) continue;
    const auto j = g.flat(m);
    if (!j) {
      // The mirror cell carries the value 0.
      if (u[i] < 0.0) {
        throw DomainError("polarize: a negative value would move off the grid; enlarge K");
      }
      continue;
    }
    out[i] = std::max(u[i], u[*j]);
    out[*j] = std::min(u[i], u[*j]);
  }
  return out;
}

std::vector<HalfSpace> iteration_half_spaces(const Grid& grid) {
  if (grid.n() != 1) throw DomainError("iterated polarization is implemented for 1D grids");
  std::vector<HalfSpace> out;
  const int span = 2 * grid.K() - 1;
  for (int j = -span; j <= span; ++j) {
    out.push_back(j < 0 ? HalfSpace::above(0, j) : HalfSpace::below(0, j));
  }
  return out;
}

PolarizationRun iterate_polarizations(const Field& u, const YoungFunction& G,
                                      const PairTable& table, std::uint64_t seed, double tol,
                                      int max_iter) {
  if (u.grid().n() != 1) throw DomainError("iterate_polarizations: 1D grids only");
  if (!(tol >= 0.0)) throw DomainError("iterate_polarizations: tol must be >= 0");
  require_nonnegative(u, "iterate_polarizations");
  const Field target = schwarz(u);
  const auto pool = iteration_half_spaces(u.grid());

  PolarizationRun run{u, {}};
  auto& trace = run.trace;
  trace.initial_phi = phi_MNG(u, G, table);
  trace.initial_distance = distance(u, target, G);
  if (trace.initial_distance <= tol) {
    trace.converged = true;
    return run;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  double phi = trace.initial_phi;
  double dist = trace.initial_distance;
  for (int it = 0; it < max_iter; ++it) {
    if (cursor == order.size()) {
      for (std::size_t k = order.size() - 1; k > 0; --k) {
        std::swap(order[k], order[rng() % (k + 1)]);
      }
      cursor = 0;
    }
    const HalfSpace& H = pool[order[cursor++]];
    Field next = polarize(run.result, H);
    PolarizationStep step{H, phi, dist, false};
    if (!(next == run.result)) {
      run.result = std::move(next);
      phi = phi_MNG(run.result, G, table);
      dist = distance(run.result, target, G);
      step.phi = phi;
      step.distance = dist;
      step.changed = true;
    }
    trace.steps.push_back(step);
    trace.iterations = it + 1;
    if (dist <= tol) {
      trace.converged = true;
      break;
    }
  }
  return run;
}

}  // namespace orlicz
