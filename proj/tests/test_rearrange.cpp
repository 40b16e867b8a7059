#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "orlicz/kernel.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/numerics.hpp"
#include "orlicz/rearrange.hpp"

using namespace orlicz;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Symmetric decreasing on a 1D grid under the "-c before +c" tie rule.
bool symmetric_decreasing(const Field& u) {
  const int K = u.grid().K();
  for (int j = 0; j < K; ++j) {
    const double plus = u.at({j, 0});
    const double minus = u.at({-j - 1, 0});
    if (minus < plus) return false;
    if (j + 1 < K && u.at({j + 1, 0}) > minus) return false;
    if (j + 1 < K && u.at({-j - 2, 0}) > plus) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("rearrange") {

TEST_CASE("Schwarz rearrangement examples") {
  const Grid g(1, 1.0, 2);
  CHECK(schwarz(Field(g, {1, 0, 2, 0})).values() == std::vector<double>{0, 2, 1, 0});
  const Field sd(g, {0, 2, 1, 0});
  CHECK(schwarz(sd) == sd);
  const Field c(g, {3, 3, 3, 3});
  CHECK(schwarz(c) == c);
  CHECK_THROWS_AS(schwarz(Field(g, {0, -1, 0, 0})), DomainError);
}

TEST_CASE("polarization examples") {
  const Grid g(1, 1.0, 1);
  const Field u(g, {3, 1});
  CHECK(polarize(u, HalfSpace::above(0, 0)).values() == std::vector<double>{1, 3});
  CHECK(polarize(u, HalfSpace::below(0, 0)) == u);
  const Grid g2(2, 1.0, 2);
  Field one(g2);
  one[*g2.flat({-2, 1})] = 1.0;
  const Field moved = polarize(one, HalfSpace::above(0, 0));
  CHECK(moved[*g2.flat({1, 1})] == 1.0);
  CHECK(moved[*g2.flat({-2, 1})] == 0.0);
  CHECK(polarize(one, HalfSpace::below(0, 0)) == one);
  const Field diag = polarize(one, HalfSpace::diagonal(true));
  CHECK(diag[*g2.flat({1, -2})] == 1.0);
}

TEST_CASE("property: two-point inequality") {
  gen::Rng rng(51);
  for (const auto& G : gen::youngs()) {
    for (int i = 0; i < 500; ++i) {
      const double gamma = gen::uniform(rng, -2.0, 2.0);
      const double alpha = gamma + gen::uniform(rng, 0.0, 2.0);
      const double delta = gen::uniform(rng, -2.0, 2.0);
      const double beta = delta + gen::uniform(rng, 0.0, 2.0);
      const double lam = gen::log_uniform(rng, 1e-2, 1e2);
      const double lhs = G.G(lam * std::abs(alpha - beta)) + G.G(lam * std::abs(gamma - delta));
      const double rhs = G.G(lam * std::abs(alpha - delta)) + G.G(lam * std::abs(gamma - beta));
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("property: polarization is idempotent and equimeasurable") {
  gen::Rng rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const Field u = gen::nonnegative(g, rng);
    const auto G = YoungFunction::power_sum(2.0, 4.0);
    for (const auto& H : compatible_half_spaces(g)) {
      const Field uH = polarize(u, H);
      CHECK(polarize(uH, H) == uH);
      CHECK(sorted(uH.values()) == sorted(u.values()));
      for (double lam : {0.0, 0.5, 1.0, 2.0}) CHECK(superlevel_measure(uH, lam) == superlevel_measure(u, lam));
      CHECK(phi_G(uH, G) == phi_G(u, G));
    }
  }
}

TEST_CASE("property: one polarization never raises the energy") {
  gen::Rng rng(53);
  const auto youngs = gen::youngs();
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const auto k = trial % 4 < 2 ? KernelPair::fractional(0.5, g.n()) : KernelPair::slobodetskii(g.n());
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, k);
    const Field u = gen::nonnegative(g, rng);
    const double phi = phi_MNG(u, G, t);
    for (const auto& H : compatible_half_spaces(g)) {
      CAPTURE(H.describe(g.h()));
      CHECK(phi_MNG(polarize(u, H), G, t) <= phi * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("property: 1D Schwarz rearrangement lowers energy and seminorm") {
  gen::Rng rng(54);
  const auto youngs = gen::youngs();
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = gen::grid_1d(rng);
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, KernelPair::fractional(gen::uniform(rng, 0.2, 0.8), 1));
    const Field u = gen::nonnegative(g, rng);
    const Field s = schwarz(u);
    CHECK(symmetric_decreasing(s));
    CHECK(sorted(s.values()) == sorted(u.values()));
    CHECK(phi_MNG(s, G, t) <= phi_MNG(u, G, t) * (1.0 + 1e-12));
    const auto ns = luxemburg(s, G, t);
    const auto nu = luxemburg(u, G, t);
    CHECK(ns.seminorm <= nu.seminorm * (1.0 + 1e-8));
    CHECK(ns.full_norm <= nu.full_norm * (1.0 + 1e-8));
    CHECK(ns.lg_norm == nu.lg_norm);
  }
}

TEST_CASE("iteration half-spaces contain the origin") {
  const Grid g(1, 0.5, 6);
  const auto hs = iteration_half_spaces(g);
  CHECK(hs.size() == static_cast<std::size_t>(2 * (2 * g.K() - 1) + 1));
  for (const auto& H : hs) {
    CHECK(H.contains_origin());
    CHECK(is_grid_compatible(H, g));
    if (H.offset2 != 0) CHECK(H.origin_interior());
  }
  CHECK_THROWS_AS(iteration_half_spaces(Grid(2, 1.0, 2)), DomainError);
}

TEST_CASE("iterated polarization examples") {
  const Grid g(1, 1.0, 2);
  const auto G = YoungFunction::power(2.0);
  const PairTable t(g, KernelPair::fractional(0.5, 1));
  const Field sd(g, {0, 2, 1, 0});
  const auto fixed = iterate_polarizations(sd, G, t, 1, 1e-6, 100);
  CHECK(fixed.trace.converged);
  CHECK(fixed.trace.iterations == 0);
  const auto run = iterate_polarizations(Field(g, {1, 0, 2, 0}), G, t, 7, 1e-6, 10000);
  CHECK(run.trace.converged);
  CHECK(run.result.values() == std::vector<double>{0, 2, 1, 0});
}

TEST_CASE("property: iterated polarization reaches the rearrangement with a monotone trace") {
  gen::Rng rng(55);
  const auto youngs = gen::youngs();
  for (int trial = 0; trial < 25; ++trial) {
    const Grid g = gen::grid_1d(rng);
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, KernelPair::fractional(0.5, 1));
    const Field u = gen::nonnegative(g, rng);
    const auto run = iterate_polarizations(u, G, t, static_cast<std::uint64_t>(trial), 1e-6, 10000);
    CHECK(run.trace.converged);
    CHECK(run.result == schwarz(u));
    double prev = run.trace.initial_phi;
    for (const auto& st : run.trace.steps) {
      CHECK(st.phi <= prev);
      prev = st.phi;
    }
  }
}

TEST_CASE("iterated polarization is reproducible from its seed") {
  gen::Rng rng(56);
  const Grid g(1, 0.125, 8);
  const auto G = YoungFunction::power_log(2.0);
  const PairTable t(g, KernelPair::fractional(0.5, 1));
  const Field u = gen::nonnegative(g, rng);
  const auto a = iterate_polarizations(u, G, t, 99, 1e-6, 10000);
  const auto b = iterate_polarizations(u, G, t, 99, 1e-6, 10000);
  REQUIRE(a.trace.steps.size() == b.trace.steps.size());
  for (std::size_t i = 0; i < a.trace.steps.size(); ++i) {
    CHECK(a.trace.steps[i].half_space == b.trace.steps[i].half_space);
    CHECK(a.trace.steps[i].phi == b.trace.steps[i].phi);
  }
}

TEST_CASE("rearrangements reject negative values") {
  const Grid g(1, 1.0, 2);
  const PairTable t(g, KernelPair::fractional(0.5, 1));
  CHECK_THROWS_AS(iterate_polarizations(Field(g, {1, -1, 0, 0}), YoungFunction::power(2.0), t, 1, 1e-6, 10),
                  DomainError);
}

}  // TEST_SUITE
