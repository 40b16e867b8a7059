#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "orlicz/field.hpp"
#include "orlicz/kernel.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/numerics.hpp"

using namespace orlicz;

namespace {

const PairTableOptions kNoExterior{Exterior::kNone, 0};

double center_distance(const Grid& g, std::size_t a, std::size_t b) {
  const auto x = g.center(a);
  const auto y = g.center(b);
  return std::hypot(x[0] - y[0], x[1] - y[1]);
}

// Ordered double sum over distinct grid cells.
double grid_double_sum(const Field& u, const std::function<double(double)>& G, const KernelPair& k) {
  const Grid& g = u.grid();
  const double h2n = std::pow(g.h(), 2 * g.n());
  ExactSum s;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (a == b) continue;
      const double d = center_distance(g, a, b);
      s.add(h2n / k.N(d) * G((u[a] - u[b]) / k.M(d)));
    }
  }
  return s.value();
}

// 1D, fractional s = 1/2, G a power or a power-sum: every cell interacts with
// the zero exterior; lattice offsets up to R explicitly, the rest through
// sum_{k > R} k^{-1-p/2} ~ X^{-p/2} / (p/2) with X = R + 1/2.
double zero_extension_1d(const Field& u, const std::vector<double>& exps) {
  const Grid& g = u.grid();
  const double h = g.h();
  const int K = g.K();
  constexpr long R = 400000;
  auto G = [&](double t) {
    double v = 0.0;
    for (double p : exps) v += std::pow(std::abs(t), p);
    return v / static_cast<double>(exps.size());
  };
  const auto k = KernelPair::fractional(0.5, 1);
  ExactSum s;
  s.add(grid_double_sum(u, G, k));
  for (std::size_t a = 0; a < g.size(); ++a) {
    const double ua = u[a];
    if (ua == 0.0) continue;
    const long i = g.index(a)[0];
    // Exterior cells b >= K and b < -K; offsets d = b - i in cells.
    for (int side : {1, -1}) {
      const long first = side > 0 ? K - i : i + K + 1;  // smallest |b - i| outside
      ExactSum part;
      for (long d = first; d <= R; ++d) {
        const double r = h * static_cast<double>(d);
        part.add(h * h / r * G(ua / std::sqrt(r)));
      }
      const double X = R + 0.5;
      for (double p : exps) {
        part.add(std::pow(std::abs(ua), p) * std::pow(h, 1.0 - p / 2.0) * std::pow(X, -p / 2.0) / (p / 2.0) /
                 static_cast<double>(exps.size()));
      }
      s.add(2.0 * part.value());
    }
  }
  return s.value();
}

}  // namespace

TEST_SUITE("modular") {

TEST_CASE("local modular") {
  const Grid g1(1, 1.0, 2);
  const auto sq = YoungFunction::power(2.0);
  CHECK(phi_G(Field(g1, {0, 2, 0, 0}), sq) == 4.0);
  CHECK(phi_G(Field(g1), sq) == 0.0);
  const Grid gh(1, 0.5, 1);
  CHECK(phi_G(Field(gh, {1, 1}), sq) == 1.0);
  CHECK(lg_norm(Field(g1, {0, 2, 0, 0}), sq) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("two-cell closed forms") {
  const Grid g(1, 1.0, 1);
  const auto sq = YoungFunction::power(2.0);
  const auto k = KernelPair::fractional(0.5, 1);
  const PairTable t(g, k, kNoExterior);
  const Field u(g, {0, 1});
  CHECK(phi_MNG(u, sq, t) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(seminorm(u, sq, t) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(pairing(u, u, sq, t) == doctest::Approx(4.0).epsilon(1e-15));
  const Field grad = modular_gradient(u, sq, t);
  CHECK(grad[0] == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(grad[1] == doctest::Approx(4.0).epsilon(1e-15));
  const auto norms = luxemburg(Field(g), sq, t);
  CHECK(norms.lg_norm == 0.0);
  CHECK(norms.seminorm == 0.0);
  CHECK(norms.full_norm == 0.0);
}

TEST_CASE("constant and zero fields") {
  const Grid g(2, 0.5, 3);
  const auto k = KernelPair::fractional(0.5, 2);
  const PairTable t(g, k, kNoExterior);
  Field c(g);
  for (double& v : c.values()) v = 1.7;
  for (const auto& G : gen::youngs()) {
    CHECK(phi_MNG(c, G, t) == 0.0);
    CHECK(phi_MNG(Field(g), G, t) == 0.0);
    CHECK(seminorm(c, G, t) == 0.0);
    const Field grad = modular_gradient(c, G, t);
    for (double v : grad.values()) CHECK(v == 0.0);
  }
  const PairTable tz(g, k);
  CHECK(phi_MNG(c, YoungFunction::power(2.0), tz) > 0.0);
}

TEST_CASE("property: grid energy equals the brute-force ordered double sum") {
  gen::Rng rng(41);
  const std::vector<std::function<KernelPair(int)>> kernels{
      [](int n) { return KernelPair::fractional(0.4, n); },
      [](int n) { return KernelPair::slobodetskii(n); },
      [](int n) { return KernelPair::besov_log(0.5, 0.25, n); }};
  for (int trial = 0; trial < 30; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const auto k = kernels[static_cast<std::size_t>(trial) % kernels.size()](g.n());
    const auto youngs = gen::youngs();
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const Field u = gen::signed_field(g, rng);
    const PairTable t(g, k, kNoExterior);
    CHECK(phi_MNG(u, G, t) == doctest::Approx(grid_double_sum(u, [&](double x) { return G.G(x); }, k)).epsilon(1e-12));
  }
}

TEST_CASE("zero-extended energy against an explicit lattice sum, 1D") {
  gen::Rng rng(42);
  const auto k = KernelPair::fractional(0.5, 1);
  for (const auto& exps : {std::vector<double>{2.0}, std::vector<double>{3.0},
                           std::vector<double>{2.0, 4.0}}) {
    for (int trial = 0; trial < 2; ++trial) {
      const Grid g(1, trial ? 0.25 : 1.0, 4);
      const Field u = gen::signed_field(g, rng);
      const auto G = exps.size() == 2 ? YoungFunction::power_sum(2.0, 4.0) : YoungFunction::power(exps[0]);
      const PairTable t(g, k);
      CAPTURE(G.name());
      CHECK(phi_MNG(u, G, t) == doctest::Approx(zero_extension_1d(u, exps)).epsilon(1e-8));
    }
  }
}

TEST_CASE("zero-extended energy against an explicit lattice sum, 2D") {
  // G = t^2, s = 1/2, n = 2: a pair at lattice distance rho contributes h u^2 / rho^3.
  const Grid g(2, 0.5, 2);
  gen::Rng rng(43);
  const Field u = gen::signed_field(g, rng);
  const auto k = KernelPair::fractional(0.5, 2);
  const auto sq = YoungFunction::power(2.0);
  constexpr int R = 1200;
  ExactSum lattice;
  for (int x = -R; x <= R; ++x) {
    for (int y = -R; y <= R; ++y) {
      const long q = static_cast<long>(x) * x + static_cast<long>(y) * y;
      if (q == 0 || q > static_cast<long>(R) * R) continue;
      lattice.add(std::pow(static_cast<double>(q), -1.5));
    }
  }
  // Disk tail, with the radius matched to the number of lattice points inside.
  lattice.add(2.0 * std::numbers::pi / R);
  ExactSum s;
  s.add(grid_double_sum(u, [&](double x) { return sq.G(x); }, k));
  for (std::size_t a = 0; a < g.size(); ++a) {
    ExactSum inside;
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (b != a) inside.add(std::pow(center_distance(g, a, b) / g.h(), -3.0));
    }
    s.add(2.0 * g.h() * u[a] * u[a] * (lattice.value() - inside.value()));
  }
  const PairTable t(g, k);
  CHECK(phi_MNG(u, sq, t) == doctest::Approx(s.value()).epsilon(1e-6));
}

TEST_CASE("property: power pairing identity and constant test functions") {
  gen::Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const auto k = KernelPair::fractional(0.6, g.n());
    const double p = gen::uniform(rng, 1.5, 4.0);
    const auto G = YoungFunction::power(p);
    const Field u = gen::signed_field(g, rng);
    for (const auto& opts : {kNoExterior, PairTableOptions{}}) {
      const PairTable t(g, k, opts);
      CHECK(pairing(u, u, G, t) == doctest::Approx(p * phi_MNG(u, G, t)).epsilon(1e-12));
    }
    const PairTable t(g, k, kNoExterior);
    Field c(g);
    for (double& v : c.values()) v = 2.5;
    CHECK(std::abs(pairing(u, c, G, t)) <= 1e-12 * pairing(u, u, G, t));
  }
}

TEST_CASE("property: gradient matches finite differences and the pairing") {
  gen::Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const auto k = trial % 3 ? KernelPair::fractional(0.5, g.n()) : KernelPair::besov_log(0.5, 0.25, g.n());
    const auto youngs = gen::youngs();
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, k);
    const Field u = gen::signed_field(g, rng);
    const Field v = gen::signed_field(g, rng);
    const Field grad = modular_gradient(u, G, t);
    ExactSum dot;
    double scale = 0.0;
    double gmax = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      dot.add(grad[i] * v[i]);
      scale += std::abs(grad[i] * v[i]);
      gmax = std::max(gmax, std::abs(grad[i]));
    }
    const double pr = pairing(u, v, G, t);
    CHECK(std::abs(dot.value() - pr) <= 1e-12 * std::max(std::abs(pr), scale));
    for (int rep = 0; rep < 3; ++rep) {
      const auto i = static_cast<std::size_t>(gen::integer(rng, 0, static_cast<int>(u.size()) - 1));
      const double step = 1e-6 * (1.0 + std::abs(u[i]));
      Field up = u;
      Field um = u;
      up[i] += step;
      um[i] -= step;
      const double fd = (phi_MNG(up, G, t) - phi_MNG(um, G, t)) / (2.0 * step);
      CHECK(std::abs(fd - grad[i]) <= 1e-5 * std::max(std::abs(grad[i]), 1e-3 * gmax));
    }
  }
}

TEST_CASE("property: exponent brackets hold termwise") {
  gen::Rng rng(46);
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const auto youngs = gen::youngs();
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, KernelPair::fractional(0.5, g.n()));
    const Field u = gen::signed_field(g, rng);
    const double pg = phi_G(u, G);
    const double sg = sum_g_u(u, G);
    CHECK(G.p_minus() * pg <= sg * (1.0 + 1e-12));
    CHECK(sg <= G.p_plus() * pg * (1.0 + 1e-12));
    const double pn = phi_MNG(u, G, t);
    const double pr = pairing(u, u, G, t);
    CHECK(G.p_minus() * pn <= pr * (1.0 + 1e-12));
    CHECK(pr <= G.p_plus() * pn * (1.0 + 1e-12));
  }
}

TEST_CASE("property: Luxemburg norms sit on the unit sphere and scale for powers") {
  gen::Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const Grid g = trial % 2 ? gen::grid_1d(rng) : gen::grid_2d(rng);
    const auto youngs = gen::youngs();
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, KernelPair::fractional(0.5, g.n()));
    Field u = gen::signed_field(g, rng);
    const double mag = gen::log_uniform(rng, 1e-3, 1e3);
    for (double& v : u.values()) v *= mag;
    const auto n = luxemburg(u, G, t);
    CHECK(n.full_norm == doctest::Approx(n.lg_norm + n.seminorm).epsilon(1e-15));
    Field a(g);
    Field b(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
      a[i] = u[i] / n.lg_norm;
      b[i] = u[i] / n.seminorm;
    }
    CHECK(std::abs(phi_G(a, G) - 1.0) <= 1e-8);
    CHECK(std::abs(phi_MNG(b, G, t) - 1.0) <= 1e-8);
  }
  const auto cube = YoungFunction::power(3.0);
  const Grid g(1, 0.25, 6);
  const PairTable t(g, KernelPair::fractional(0.5, 1));
  const Field u = gen::signed_field(g, rng);
  const auto n1 = luxemburg(u, cube, t);
  for (double c : {0.01, 3.0, 250.0}) {
    Field cu = u;
    for (double& v : cu.values()) v *= c;
    const auto nc = luxemburg(cu, cube, t);
    CHECK(nc.lg_norm == doctest::Approx(c * n1.lg_norm).epsilon(1e-9));
    CHECK(nc.seminorm == doctest::Approx(c * n1.seminorm).epsilon(1e-9));
  }
}

TEST_CASE("property: mollification does not raise either modular") {
  gen::Rng rng(48);
  for (int trial = 0; trial < 30; ++trial) {
    const bool two = trial % 3 == 0;
    const Grid g = two ? Grid(2, 0.25, 5) : Grid(1, 0.125, 12);
    const auto youngs = gen::youngs();
    const auto& G = youngs[static_cast<std::size_t>(trial) % youngs.size()];
    const PairTable t(g, KernelPair::fractional(0.5, g.n()));
    const int r = gen::integer(rng, 1, 2);
    Field u(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto c = g.index(i);
      bool inner = true;
      for (int a = 0; a < g.n(); ++a) inner &= c[a] - r >= -g.K() && c[a] + r < g.K();
      if (inner) u[i] = gen::uniform(rng, -1.0, 2.0);
    }
    const Field m = mollify(u, Mollifier::bump(g.n(), r));
    CHECK(phi_MNG(m, G, t) <= phi_MNG(u, G, t) * (1.0 + 1e-12));
    CHECK(phi_G(m, G) <= phi_G(u, G) * (1.0 + 1e-12));
  }
}

TEST_CASE("translation estimate") {
  const Grid g(1, 1.0 / 32, 32);
  const auto k = KernelPair::fractional(0.5, 1);
  const PairTable t(g, k);
  const auto ps = YoungFunction::power_sum(2.0, 4.0);
  const auto zero = translation_ratio(Field(g), {3, 0}, ps, k, t, ps.p_minus());
  CHECK(zero.lhs == 0.0);
  CHECK(zero.ratio == 0.0);
  CHECK(translation_constant(ps, 1) == doctest::Approx(2.0 * ps.delta2_constant() / 2.0));
  gen::Rng rng(49);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = gen::uniform(rng, -0.3, 0.3);
    const double w = gen::uniform(rng, 0.05, 0.3);
    const Field u = sample_field(g, [&](const Point& x) { return std::max(0.0, 1.0 - std::abs(x[0] - c) / w); });
    const auto r = translation_ratio(u, {gen::integer(rng, 1, 15), 0}, ps, k, t, ps.p_minus());
    CHECK(r.ratio <= translation_constant(ps, 1));
  }
}

TEST_CASE("translation difference vanishes as the shift shrinks") {
  const auto k = KernelPair::fractional(0.5, 1);
  const auto sq = YoungFunction::power(2.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int K : {8, 16, 32, 64}) {
    const Grid g(1, 1.0 / K, K);
    const PairTable t(g, k);
    const Field u = sample_field(g, [](const Point& x) { return std::max(0.0, 1.0 - 2.0 * std::abs(x[0])); });
    const auto r = translation_ratio(u, {1, 0}, sq, k, t, sq.p_minus());
    CHECK(r.lhs < prev);
    prev = r.lhs;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("embedding estimate") {
  const Grid g(1, 1.0 / 16, 32);
  const auto k = KernelPair::fractional(0.5, 1);
  const PairTable t(g, k);
  const auto sq = YoungFunction::power(2.0);
  const auto zero = embedding_bound(Field(g), {Field(g)}, sq, k, t, 2.0);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.ratio == 0.0);
  auto bump = [](double x) { return std::exp(-8.0 * x * x); };
  const Field u = sample_field(g, [&](const Point& x) { return bump(x[0]); });
  const Field du = sample_field(g, [&](const Point& x) { return -16.0 * x[0] * bump(x[0]); });
  const auto r = embedding_bound(u, {du}, sq, k, t, 2.0);
  CHECK(r.lhs > 0.0);
  CHECK(r.ratio <= r.constant);
  const Field hat = sample_field(g, [](const Point& x) { return std::max(0.0, 1.0 - std::abs(x[0])); });
  const Field dhat = sample_field(g, [](const Point& x) {
    return std::abs(x[0]) < 1.0 ? (x[0] < 0.0 ? 1.0 : -1.0) : 0.0;
  });
  const auto rh = embedding_bound(hat, {dhat}, sq, k, t, 2.0);
  CHECK(std::isfinite(rh.lhs));
  CHECK(rh.lhs <= rh.constant * rh.rhs);
}

TEST_CASE("Poincare checks") {
  const Grid g(1, 1.0, 6);
  const auto k = KernelPair::fractional(0.5, 1);
  const auto sq = YoungFunction::power(2.0);
  const auto omega = DomainMask::from_cells(g, {{0, 0}});
  const PairTable t(omega, k);
  for (double C : {0.0, 0.1, 10.0}) {
    const auto r = poincare_check(Field(g), omega, sq, t, C);
    CHECK(r.modular_ok);
    CHECK(r.norm_ok);
  }
  Field chi(g);
  chi[*g.flat({0, 0})] = 1.0;
  const auto r0 = poincare_check(chi, omega, sq, t, 0.0);
  CHECK_FALSE(r0.modular_ok);
  CHECK_FALSE(r0.norm_ok);
  // Phi_MNG(C chi) = C^2 * 2 * 2 * sum_k 1/k^2 for h = 1, s = 1/2.
  const double S = 4.0 * std::numbers::pi * std::numbers::pi / 6.0;
  CHECK(phi_MNG(chi, sq, t) == doctest::Approx(S).epsilon(1e-8));
  const double best = 1.0 / std::sqrt(S);
  const double found = poincare_search({chi}, omega, sq, t, 0.1, 1.01);
  CHECK(found >= best);
  CHECK(found < 1.01 * best * (1.0 + 1e-12));
  Field outside(g);
  outside[*g.flat({2, 0})] = 1.0;
  CHECK_THROWS_AS(poincare_check(outside, omega, sq, t, 1.0), DomainError);
}

}  // TEST_SUITE
