#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "orlicz/eigen.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/numerics.hpp"

using namespace orlicz;

namespace {

constexpr double kZeta3 = 1.2020569031595942;
const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

DomainMask two_intervals(const Grid& g) {
  std::vector<CellIndex> cells;
  for (int i = -8; i < -4; ++i) cells.push_back({i, 0});
  for (int i = 4; i < 8; ++i) cells.push_back({i, 0});
  return DomainMask::from_cells(g, cells);
}

OptimizerSettings quick(int restarts = 3) {
  OptimizerSettings s;
  s.restarts = restarts;
  s.seed = 5;
  return s;
}

}  // namespace

TEST_SUITE("eigen") {

TEST_CASE("single cell: zeta closed forms") {
  // h = 1, s = 1/2, G = (t^2 + t^4)/2: a cell of height t sees
  // Phi_MNG = 4 sum_k G(t / sqrt k) / k = 2 (t^2 zeta(2) + t^4 zeta(3)).
  const Grid g(1, 1.0, 4);
  const auto omega = DomainMask::from_cells(g, {{-1, 0}});
  const auto G = YoungFunction::power_sum(2.0, 4.0);
  const auto k = KernelPair::fractional(0.5, 1);
  for (double mu : {1e-2, 1.0, 1e2}) {
    const auto r = minimize_alpha_mu(EigenProblem{omega, mu, G, k, quick(1)});
    const double t = G.inverse(mu);
    const double t2 = t * t;
    CHECK(r.alpha_mu == doctest::Approx(2.0 * (t2 * kZeta2 + t2 * t2 * kZeta3)).epsilon(1e-6));
    const double lam = 4.0 * (t2 * kZeta2 + 2.0 * t2 * t2 * kZeta3) / (t2 + 2.0 * t2 * t2);
    CHECK(r.lambda_mu == doctest::Approx(lam).epsilon(1e-6));
  }
}

TEST_CASE("power homogeneity") {
  const Grid g(1, 0.125, 12);
  const auto omega = two_intervals(g);
  const auto k = KernelPair::fractional(0.5, 1);
  const PairTable t(omega, k);
  for (double p : {2.0, 3.0}) {
    const auto G = YoungFunction::power(p);
    std::vector<double> ratios;
    for (double mu : {1e-2, 1.0, 1e2}) {
      const auto r = minimize_alpha_mu(EigenProblem{omega, mu, G, k, quick()}, t);
      ratios.push_back(r.alpha_mu / mu);
      CHECK(r.lambda_mu == doctest::Approx(r.alpha_mu / mu).epsilon(1e-10));
    }
    for (double x : ratios) CHECK(x == doctest::Approx(ratios.front()).epsilon(1e-4));
  }
}

TEST_CASE("property: minimizers satisfy the constraint and the optimizer is sound") {
  gen::Rng rng(61);
  const Grid g(1, 0.125, 10);
  const auto k = KernelPair::fractional(0.5, 1);
  const auto youngs = gen::youngs();
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<CellIndex> cells;
    for (int i = -10; i < 10; ++i) {
      if (gen::uniform(rng) < 0.4) cells.push_back({i, 0});
    }
    if (cells.empty()) cells.push_back({0, 0});
    const auto omega = DomainMask::from_cells(g, cells);
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const double mu = gen::log_uniform(rng, 1e-2, 1e2);
    const PairTable t(omega, k);
    const auto r = minimize_alpha_mu(EigenProblem{omega, mu, G, k, quick(4)}, t);
    CHECK(phi_G(r.minimizer, G) == doctest::Approx(mu).epsilon(1e-8));
    CHECK(vanishes_outside(r.minimizer, omega));
    CHECK(r.alpha_mu == doctest::Approx(phi_MNG(r.minimizer, G, t)).epsilon(1e-14));
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
    const double base = r.alpha_mu / mu;
    CHECK(r.lambda_mu >= G.p_minus() / G.p_plus() * base * (1.0 - 1e-12));
    CHECK(r.lambda_mu <= G.p_plus() / G.p_minus() * base * (1.0 + 1e-12));
    // The first restart of a larger batch is the single-restart run.
    const auto single = minimize_alpha_mu(EigenProblem{omega, mu, G, k, quick(1)}, t);
    CHECK(r.alpha_mu <= single.alpha_mu);
  }
}

TEST_CASE("results do not depend on scheduling") {
  const Grid g(1, 0.125, 8);
  const auto omega = DomainMask::from_cells(g, {{-3, 0}, {-2, 0}, {1, 0}, {2, 0}, {3, 0}});
  const EigenProblem p{omega, 0.5, YoungFunction::power_log(2.0), KernelPair::fractional(0.5, 1), quick(4)};
  const auto a = minimize_alpha_mu(p);
  const auto b = minimize_alpha_mu(p);
  CHECK(a.alpha_mu == b.alpha_mu);
  CHECK(a.minimizer == b.minimizer);
  CHECK(a.best_restart == b.best_restart);
}

TEST_CASE("scan over mu") {
  const Grid g(1, 0.125, 8);
  const auto omega = DomainMask::from_cells(g, {{-2, 0}, {-1, 0}, {0, 0}, {1, 0}});
  const auto k = KernelPair::fractional(0.5, 1);
  const auto G = YoungFunction::power_sum(2.0, 4.0);
  const auto mus = log_grid(1e-2, 1e2, 5);
  REQUIRE(mus.size() == 5);
  CHECK(mus.front() == 1e-2);
  CHECK(mus.back() == 1e2);
  CHECK(mus[2] == doctest::Approx(1.0).epsilon(1e-15));
  const auto scan = scan_mu(omega, mus, G, k, quick());
  REQUIRE(scan.rows.size() == 5);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& row : scan.rows) {
    REQUIRE(row.ok);
    CHECK(scan.alpha_1 <= row.alpha_mu);
    CHECK(scan.lambda_1 <= row.lambda_mu);
    lo = std::min(lo, row.alpha_mu / row.mu);
    hi = std::max(hi, row.alpha_mu / row.mu);
  }
  CHECK(hi / lo > 1.01);  // non-homogeneous G: alpha/mu moves with mu
  const auto one = scan_mu(omega, {0.3}, G, k, quick());
  CHECK(one.alpha_1 == one.rows.front().alpha_mu);
}

TEST_CASE("small-level alpha is positive and respects a Poincare constant") {
  const Grid g(1, 0.125, 8);
  const auto omega = DomainMask::from_cells(g, {{-2, 0}, {-1, 0}, {0, 0}, {1, 0}});
  const auto k = KernelPair::fractional(0.5, 1);
  const auto G = YoungFunction::power_sum(2.0, 4.0);
  const PairTable t(omega, k);
  const auto r = minimize_alpha_mu(EigenProblem{omega, 1e-4, G, k, quick()}, t);
  CHECK(r.alpha_mu > 0.0);
  CHECK(std::isfinite(r.alpha_mu));
  const double C = poincare_search({r.minimizer}, omega, G, t);
  Field scaled = r.minimizer;
  for (double& v : scaled.values()) v *= C;
  CHECK(phi_G(r.minimizer, G) <= phi_MNG(scaled, G, t));
}

TEST_CASE("centered ball and Faber-Krahn comparison") {
  const Grid g(1, 0.125, 12);
  const auto omega = two_intervals(g);
  const auto ball = centered_ball(omega);
  CHECK(ball.count() == omega.count());
  for (int i = -4; i < 4; ++i) CHECK(ball.contains(*g.flat({i, 0})));
  const auto k = KernelPair::fractional(0.5, 1);
  const auto G = YoungFunction::power(2.0);
  CHECK(h_convex(G));
  CHECK(h_convex(YoungFunction::power_sum(2.0, 4.0)));
  const auto mus = std::vector<double>{0.1, 1.0};
  const auto rep = faber_krahn_compare(omega, mus, G, k, quick());
  CHECK(rep.alpha_ok);
  REQUIRE(rep.lambda_ok.has_value());
  CHECK(*rep.lambda_ok);
  CHECK(rep.ball.alpha_1 < rep.omega.alpha_1 * (1.0 - 1e-3));
  const auto same = faber_krahn_compare(ball, mus, G, k, quick());
  CHECK(same.ball.alpha_1 == doctest::Approx(same.omega.alpha_1).epsilon(1e-8));
}

TEST_CASE("invalid eigen problems") {
  const Grid g(1, 1.0, 4);
  const auto omega = DomainMask::from_cells(g, {{0, 0}});
  const auto G = YoungFunction::power(2.0);
  const auto k = KernelPair::fractional(0.5, 1);
  CHECK_THROWS_AS(minimize_alpha_mu(EigenProblem{omega, 0.0, G, k}), DomainError);
  CHECK_THROWS_AS(minimize_alpha_mu(EigenProblem{omega, -1.0, G, k}), DomainError);
  CHECK_THROWS_AS(minimize_alpha_mu(EigenProblem{DomainMask(g, std::vector<bool>(g.size(), false)), 1.0, G, k}),
                  DomainError);
  const PairTable other(g, k);
  CHECK_THROWS_AS(minimize_alpha_mu(EigenProblem{omega, 1.0, G, k}, other), DomainError);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
}

}  // TEST_SUITE
