#include "orlicz/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "orlicz/eigen.hpp"
#include "orlicz/field.hpp"
#include "orlicz/kernel.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/numerics.hpp"
#include "orlicz/rearrange.hpp"

namespace orlicz {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

std::vector<YoungFunction> builtin_youngs() {
  return {YoungFunction::power(2.0), YoungFunction::power(3.0), YoungFunction::power_sum(2.0, 4.0),
          YoungFunction::power_log(2.0)};
}

struct Setting {
  Grid grid;
  KernelPair kernel;
  std::shared_ptr<PairTable> table;
};

struct Sample {
  std::size_t setting;
  std::size_t young;
  Field u;
};

// Nonnegative test fields: scattered values with zeros, quantized values with
// many ties, and noisy bumps.
Field random_field(const Grid& g, Rng& rng) {
  Field u(g);
  const int kind = pick(rng, 3);
  if (kind == 0) {
    for (double& v : u.values()) v = uniform(rng) < 0.3 ? 0.0 : uniform(rng);
  } else if (kind == 1) {
    for (double& v : u.values()) v = std::floor(uniform(rng) * 4.0) / 4.0;
  } else {
    const double cx = (uniform(rng) - 0.5) * g.K() * g.h();
    const double cy = (uniform(rng) - 0.5) * g.K() * g.h();
    const double w = (0.2 + 0.5 * uniform(rng)) * g.K() * g.h();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto p = g.center(i);
      const double r = std::hypot(p[0] - cx, g.n() == 2 ? p[1] - cy : 0.0);
      u[i] = std::max(0.0, 1.0 - r / w) + (uniform(rng) < 0.2 ? 0.1 * uniform(rng) : 0.0);
    }
  }
  if (std::all_of(u.values().begin(), u.values().end(), [](double v) { return v == 0.0; })) {
    u[static_cast<std::size_t>(pick(rng, static_cast<int>(g.size())))] = 1.0;
  }
  return u;
}

class Corpus {
 public:
  Corpus(const AcceptanceOptions& opt, const std::vector<YoungFunction>& youngs) : youngs_(youngs) {
    Rng rng(opt.seed);
    for (int K : {8, 12, 16, 24, 32}) {
      const Grid g(1, 1.0 / K, K);
      for (const auto& k : {KernelPair::fractional(0.5, 1), KernelPair::fractional(0.25, 1),
                            KernelPair::slobodetskii(1), KernelPair::besov_log(0.5, 0.25, 1)}) {
        settings_.push_back({g, k, std::make_shared<PairTable>(g, k)});
      }
    }
    first_2d_ = settings_.size();
    for (int K : {4, 5, 6}) {
      const Grid g(2, 1.0 / K, K);
      for (const auto& k : {KernelPair::fractional(0.5, 2), KernelPair::fractional(0.75, 2)}) {
        settings_.push_back({g, k, std::make_shared<PairTable>(g, k)});
      }
    }
    const std::size_t n1 = first_2d_;
    const std::size_t n2 = settings_.size() - first_2d_;
    for (int i = 0; i < opt.fields_1d; ++i) {
      const std::size_t s = static_cast<std::size_t>(i) % n1;
      const std::size_t y = (static_cast<std::size_t>(i) / n1 + s) % youngs_.size();
      samples_1d_.push_back({s, y, random_field(settings_[s].grid, rng)});
    }
    for (int i = 0; i < opt.fields_2d; ++i) {
      const std::size_t s = first_2d_ + static_cast<std::size_t>(i) % n2;
      const std::size_t y = (static_cast<std::size_t>(i) / n2 + s) % youngs_.size();
      samples_2d_.push_back({s, y, random_field(settings_[s].grid, rng)});
    }
  }

  [[nodiscard]] const std::vector<Sample>& one_d() const { return samples_1d_; }
  [[nodiscard]] const std::vector<Sample>& two_d() const { return samples_2d_; }
  [[nodiscard]] std::vector<const Sample*> all() const {
    std::vector<const Sample*> out;
    for (const auto& s : samples_1d_) out.push_back(&s);
    for (const auto& s : samples_2d_) out.push_back(&s);
    return out;
  }
  [[nodiscard]] const PairTable& table(const Sample& s) const { return *settings_[s.setting].table; }
  [[nodiscard]] const YoungFunction& young(const Sample& s) const { return youngs_[s.young]; }

 private:
  std::vector<YoungFunction> youngs_;
  std::vector<Setting> settings_;
  std::size_t first_2d_ = 0;
  std::vector<Sample> samples_1d_;
  std::vector<Sample> samples_2d_;
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

double rel_excess(double lhs, double rhs) {
  // How far lhs exceeds rhs, relative to rhs (negative when lhs < rhs).
  const double scale = std::max(std::abs(rhs), std::numeric_limits<double>::min());
  return (lhs - rhs) / scale;
}

CriterionResult criterion_young(const AcceptanceOptions& opt) {
  CriterionResult r{1, "young framework", true, "", {}};
  auto youngs = builtin_youngs();
  youngs.push_back(YoungFunction::power(1.5));
  if (opt.extra_young) youngs.push_back(*opt.extra_young);
  std::size_t failures = 0;
  std::ostringstream failing;
  double worst_residual = 0.0;
  for (const auto& G : youngs) {
    const auto report = verify_properties(G, SampleGrid{1e-3, 1e3, 200});
    for (const auto& p : report.points) {
      worst_residual = std::max(worst_residual, p.conjugate_residual / (1.0 + p.t * G.g(p.t)));
    }
    if (!report.passed()) {
      failures += report.failures();
      failing << " " << G.name();
    }
  }
  r.passed = failures == 0;
  r.metrics = {{"functions", static_cast<double>(youngs.size())},
               {"failed_checks", static_cast<double>(failures)},
               {"worst_conjugate_residual", worst_residual}};
  r.detail = std::to_string(youngs.size()) + " Young functions, " + std::to_string(failures) +
             " failed checks, worst conjugate residual " + fmt(worst_residual);
  if (failures > 0) r.detail += "; failing:" + failing.str();
  return r;
}

CriterionResult criterion_kernels() {
  CriterionResult r{2, "kernel closed forms", true, "", {}};
  constexpr double kTol = 1e-4;
  double worst = 0.0;
  auto expect = [&](const std::optional<double>& got, double want) {
    const double err = got ? std::abs(*got - want) : std::numeric_limits<double>::infinity();
    worst = std::max(worst, err);
    return err <= kTol;
  };
  bool ok = true;
  const auto frac = check_P3(KernelPair::fractional(0.5, 1), 2.0, 1e-6);
  ok &= expect(frac.low, 1.0) && expect(frac.high, 1.0);
  for (int n : {1, 2}) {
    const auto s2 = check_P3(KernelPair::slobodetskii(n), 2.0, 1e-6);
    ok &= expect(s2.low, 1.0) && expect(s2.high, 1.0);
    const auto s3 = check_P3(KernelPair::slobodetskii(n), 3.0, 1e-6);
    ok &= expect(s3.low, 1.0) && expect(s3.high, 0.5);
  }
  const auto pl = YoungFunction::power_log(2.0);
  const std::vector<std::pair<KernelPair, double>> families{
      {KernelPair::fractional(0.5, 1), 2.0},
      {KernelPair::slobodetskii(1), 2.0},
      {KernelPair::besov_log(0.5, 0.25, 1), 2.0},
      {KernelPair::abs(0.6, 1, pl), pl.p_minus()}};
  double worst_p4 = 0.0;
  for (const auto& [k, p] : families) {
    const auto p4 = check_P4(k, p);
    worst_p4 = std::max(worst_p4, p4.final_value);
    ok &= p4.decays && p4.final_value <= 1e-8;
  }
  r.passed = ok;
  r.metrics = {{"worst_p3_error", worst}, {"worst_p4_final", worst_p4}};
  r.detail = "worst P3 deviation " + fmt(worst) + ", worst P4 estimate " + fmt(worst_p4);
  return r;
}

std::vector<double> lambda_samples(const Field& u, Rng& rng) {
  double hi = 0.0;
  for (double v : u.values()) hi = std::max(hi, v);
  std::vector<double> out;
  for (int k = 0; k < 16; ++k) out.push_back(hi * k / 15.0);
  for (int k = 0; k < 16; ++k) out.push_back(u[static_cast<std::size_t>(pick(rng, static_cast<int>(u.size())))]);
  return out;
}

CriterionResult criterion_one_step(const AcceptanceOptions& opt, const Corpus& corpus) {
  CriterionResult r{3, "one-step polarization", true, "", {}};
  Rng rng(opt.seed + 3);
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::size_t measure_mismatch = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const Sample* s : corpus.all()) {
    const auto& G = corpus.young(*s);
    const auto& table = corpus.table(*s);
    const double phi = phi_MNG(s->u, G, table);
    const auto lambdas = lambda_samples(s->u, rng);
    for (const auto& H : compatible_half_spaces(s->u.grid())) {
      const Field uH = polarize(s->u, H);
      const double phiH = phi_MNG(uH, G, table);
      ++checks;
      worst = std::max(worst, rel_excess(phiH, phi));
      if (phiH > phi * (1.0 + 1e-12) + 1e-12) ++violations;
      for (double lam : lambdas) {
        if (superlevel_measure(uH, lam) != superlevel_measure(s->u, lam)) ++measure_mismatch;
      }
    }
  }
  r.passed = violations == 0 && measure_mismatch == 0 && corpus.all().size() >= 500;
  r.metrics = {{"fields", static_cast<double>(corpus.all().size())},
               {"polarizations", static_cast<double>(checks)},
               {"violations", static_cast<double>(violations)},
               {"measure_mismatches", static_cast<double>(measure_mismatch)},
               {"worst_relative_increase", worst}};
  r.detail = std::to_string(corpus.all().size()) + " fields, " + std::to_string(checks) +
             " polarizations, " + std::to_string(violations) + " violations, " +
             std::to_string(measure_mismatch) + " measure mismatches, worst relative change " +
             fmt(worst);
  return r;
}

CriterionResult criterion_full_ps(const Corpus& corpus) {
  CriterionResult r{4, "full rearrangement 1D", true, "", {}};
  std::size_t violations = 0;
  double worst_phi = -std::numeric_limits<double>::infinity();
  double worst_norm = -std::numeric_limits<double>::infinity();
  for (const auto& s : corpus.one_d()) {
    const auto& G = corpus.young(s);
    const auto& table = corpus.table(s);
    const Field star = schwarz(s.u);
    const double a = phi_MNG(star, G, table);
    const double b = phi_MNG(s.u, G, table);
    worst_phi = std::max(worst_phi, rel_excess(a, b));
    if (a > b * (1.0 + 1e-12)) ++violations;
    const auto ns = luxemburg(star, G, table);
    const auto nu = luxemburg(s.u, G, table);
    worst_norm = std::max(worst_norm, rel_excess(ns.seminorm, nu.seminorm));
    if (ns.seminorm > nu.seminorm * (1.0 + 1e-8)) ++violations;
    if (ns.full_norm > nu.full_norm * (1.0 + 1e-8)) ++violations;
  }
  r.passed = violations == 0;
  r.metrics = {{"fields", static_cast<double>(corpus.one_d().size())},
               {"violations", static_cast<double>(violations)},
               {"worst_phi_change", worst_phi},
               {"worst_seminorm_change", worst_norm}};
  r.detail = std::to_string(corpus.one_d().size()) + " fields, " + std::to_string(violations) +
             " violations, worst relative change phi " + fmt(worst_phi) + ", seminorm " +
             fmt(worst_norm);
  return r;
}

CriterionResult criterion_iterated(const AcceptanceOptions& opt, const Corpus& corpus) {
  CriterionResult r{5, "iterated polarization 1D", true, "", {}};
  const std::size_t count =
      std::min(corpus.one_d().size(), static_cast<std::size_t>(opt.iterated_fields));
  std::size_t converged = 0;
  std::size_t increases = 0;
  int max_steps = 0;
  double worst_distance = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = corpus.one_d()[i];
    const auto run = iterate_polarizations(s.u, corpus.young(s), corpus.table(s), opt.seed + i,
                                           1e-6, 10000);
    double prev = run.trace.initial_phi;
    for (const auto& step : run.trace.steps) {
      if (step.phi > prev) ++increases;
      prev = step.phi;
    }
    const double final_distance =
        run.trace.steps.empty() ? run.trace.initial_distance : run.trace.steps.back().distance;
    worst_distance = std::max(worst_distance, final_distance);
    converged += run.trace.converged;
    max_steps = std::max(max_steps, run.trace.iterations);
  }
  r.passed = converged == count && increases == 0 && count >= 100;
  r.metrics = {{"fields", static_cast<double>(count)},
               {"converged", static_cast<double>(converged)},
               {"phi_increases", static_cast<double>(increases)},
               {"max_steps", static_cast<double>(max_steps)},
               {"worst_final_distance", worst_distance}};
  r.detail = std::to_string(converged) + "/" + std::to_string(count) + " converged, max " +
             std::to_string(max_steps) + " steps, " + std::to_string(increases) +
             " energy increases, worst final distance " + fmt(worst_distance);
  return r;
}

CriterionResult criterion_mollify(const AcceptanceOptions& opt) {
  CriterionResult r{6, "mollification", true, "", {}};
  Rng rng(opt.seed + 6);
  const auto youngs = builtin_youngs();
  const Grid g1(1, 1.0 / 16, 24);
  const Grid g2(2, 1.0 / 6, 6);
  const auto k1 = KernelPair::fractional(0.5, 1);
  const auto k2 = KernelPair::fractional(0.5, 2);
  const PairTable t1(g1, k1);
  const PairTable t2(g2, k2);
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.mollifier_pairs; ++i) {
    const bool two = i % 4 == 3;
    const Grid& g = two ? g2 : g1;
    const PairTable& t = two ? t2 : t1;
    const auto& G = youngs[static_cast<std::size_t>(i) % youngs.size()];
    const int radius = two ? 1 + pick(rng, 2) : 1 + pick(rng, 4);
    Mollifier rho = Mollifier::bump(g.n(), radius);
    if (!two && i % 5 == 1) rho = Mollifier::from_weights(1, 1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    Field u(g);
    for (std::size_t c = 0; c < g.size(); ++c) {
      const auto idx = g.index(c);
      bool inner = true;
      for (int a = 0; a < g.n(); ++a) inner &= idx[a] >= -g.K() + radius && idx[a] < g.K() - radius;
      if (inner) u[c] = uniform(rng) < 0.25 ? 0.0 : 2.0 * uniform(rng) - 0.5;
    }
    const Field v = mollify(u, rho);
    const double a = phi_MNG(v, G, t);
    const double b = phi_MNG(u, G, t);
    worst = std::max(worst, rel_excess(a, b));
    if (a > b * (1.0 + 1e-12)) ++violations;
    if (phi_G(v, G) > phi_G(u, G) * (1.0 + 1e-12)) ++violations;
  }
  r.passed = violations == 0 && opt.mollifier_pairs >= 100;
  r.metrics = {{"pairs", static_cast<double>(opt.mollifier_pairs)},
               {"violations", static_cast<double>(violations)},
               {"worst_relative_change", worst}};
  r.detail = std::to_string(opt.mollifier_pairs) + " (u, rho) pairs, " +
             std::to_string(violations) + " violations, worst relative change " + fmt(worst);
  return r;
}

CriterionResult criterion_gradient(const AcceptanceOptions& opt) {
  CriterionResult r{7, "gradient and duality", true, "", {}};
  Rng rng(opt.seed + 7);
  const auto youngs = builtin_youngs();
  const Grid g1(1, 1.0 / 12, 12);
  const Grid g2(2, 1.0 / 5, 5);
  const auto k1 = KernelPair::besov_log(0.5, 0.25, 1);
  const auto k2 = KernelPair::fractional(0.5, 2);
  const PairTable t1(g1, k1);
  const PairTable t2(g2, k2);
  double worst_fd = 0.0;
  double worst_dual = 0.0;
  std::size_t fd_checks = 0;
  for (int i = 0; i < opt.duality_pairs; ++i) {
    const bool two = i % 3 == 2;
    const Grid& g = two ? g2 : g1;
    const PairTable& t = two ? t2 : t1;
    const auto& G = youngs[static_cast<std::size_t>(i) % youngs.size()];
    Field u(g);
    Field v(g);
    for (double& x : u.values()) x = 2.0 * uniform(rng) - 0.7;
    for (double& x : v.values()) x = 2.0 * uniform(rng) - 1.0;
    const Field grad = modular_gradient(u, G, t);
    ExactSum dot;
    double scale = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      dot.add(grad[c] * v[c]);
      scale += std::abs(grad[c] * v[c]);
    }
    const double pr = pairing(u, v, G, t);
    worst_dual = std::max(worst_dual, std::abs(dot.value() - pr) / std::max(std::abs(pr), scale));
    if (i % 4 == 0) {
      double gmax = 0.0;
      for (double x : grad.values()) gmax = std::max(gmax, std::abs(x));
      for (int k = 0; k < 4; ++k) {
        const auto c = static_cast<std::size_t>(pick(rng, static_cast<int>(u.size())));
        const double step = 1e-6 * (1.0 + std::abs(u[c]));
        Field up = u;
        Field um = u;
        up[c] += step;
        um[c] -= step;
        const double fd = (phi_MNG(up, G, t) - phi_MNG(um, G, t)) / (2.0 * step);
        worst_fd = std::max(worst_fd, std::abs(fd - grad[c]) / std::max(std::abs(grad[c]), 1e-3 * gmax));
        ++fd_checks;
      }
    }
  }
  r.passed = worst_fd <= 1e-5 && worst_dual <= 1e-12 && opt.duality_pairs >= 100;
  r.metrics = {{"pairs", static_cast<double>(opt.duality_pairs)},
               {"fd_checks", static_cast<double>(fd_checks)},
               {"worst_fd_error", worst_fd},
               {"worst_duality_error", worst_dual}};
  r.detail = std::to_string(opt.duality_pairs) + " (u, v) pairs, " + std::to_string(fd_checks) +
             " finite-difference checks, worst FD error " + fmt(worst_fd) + ", worst duality error " +
             fmt(worst_dual);
  return r;
}

struct EigenCheck {
  double lambda;
  double phi_mng;
  double mu;
  double pm;
  double pp;
};

bool lambda_in_bracket(const EigenCheck& e) {
  const double base = e.phi_mng / e.mu;
  return e.lambda >= (e.pm / e.pp) * base * (1.0 - 1e-12) &&
         e.lambda <= (e.pp / e.pm) * base * (1.0 + 1e-12);
}

CriterionResult criterion_brackets(const AcceptanceOptions& opt, const Corpus& corpus) {
  CriterionResult r{8, "exponent brackets", true, "", {}};
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  auto check = [&](double lo, double mid, double hi) {
    const double scale = std::max(std::abs(mid), std::numeric_limits<double>::min());
    worst = std::max({worst, (lo - mid) / scale, (mid - hi) / scale});
    if (lo > mid * (1.0 + 1e-12) || mid > hi * (1.0 + 1e-12)) ++violations;
  };
  for (const Sample* s : corpus.all()) {
    const auto& G = corpus.young(*s);
    const auto& table = corpus.table(*s);
    const double pm = G.p_minus();
    const double pp = G.p_plus();
    const double pg = phi_G(s->u, G);
    check(pm * pg, sum_g_u(s->u, G), pp * pg);
    const double pn = phi_MNG(s->u, G, table);
    check(pm * pn, pairing(s->u, s->u, G, table), pp * pn);
  }
  // Eigenvalue bracket at the computed minimizers.
  const Grid g(1, 1.0 / 8, 8);
  std::vector<CellIndex> cells;
  for (int i = -3; i < 3; ++i) cells.push_back({i, 0});
  const auto omega = DomainMask::from_cells(g, cells);
  const auto kernel = KernelPair::fractional(0.5, 1);
  const PairTable table(omega, kernel);
  std::size_t eigen_checks = 0;
  for (const auto& G : {YoungFunction::power_sum(2.0, 4.0), YoungFunction::power_log(2.0)}) {
    for (double mu : {1e-2, 1.0, 1e2}) {
      OptimizerSettings settings;
      settings.restarts = 2;
      settings.seed = opt.seed;
      const auto res = minimize_alpha_mu(EigenProblem{omega, mu, G, kernel, settings}, table);
      ++eigen_checks;
      if (!lambda_in_bracket({res.lambda_mu, res.alpha_mu, mu, G.p_minus(), G.p_plus()})) ++violations;
    }
  }
  r.passed = violations == 0;
  r.metrics = {{"fields", static_cast<double>(corpus.all().size())},
               {"eigen_checks", static_cast<double>(eigen_checks)},
               {"violations", static_cast<double>(violations)},
               {"worst_relative_excess", worst}};
  r.detail = std::to_string(corpus.all().size()) + " fields and " + std::to_string(eigen_checks) +
             " minimizers, " + std::to_string(violations) + " violations, worst excess " + fmt(worst);
  return r;
}

// Independent reference for a single cell at the origin side, h = 1, fractional
// s = 1/2 in 1D, power-sum (2,4): 2 * sum_{z != 0} G(t / sqrt|z|) / |z|.
double single_cell_reference(const YoungFunction& G, double t) {
  constexpr long kTerms = 2000000;
  ExactSum s;
  for (long k = 1; k <= kTerms; ++k) {
    const double kd = static_cast<double>(k);
    s.add(2.0 * G.G(t / std::sqrt(kd)) / kd);
  }
  // Remaining terms as an integral from kTerms + 1/2; for (x^2 + x^4)/2 the
  // integrand is t^2/(2 x^2) + t^4/(2 x^3) per side.
  const double X = kTerms + 0.5;
  s.add(t * t / X + t * t * t * t / (2.0 * X * X));
  return 2.0 * s.value();
}

CriterionResult criterion_eigen(const AcceptanceOptions& opt) {
  CriterionResult r{9, "eigen sanity", true, "", {}};
  const auto ps = YoungFunction::power_sum(2.0, 4.0);
  const auto kernel = KernelPair::fractional(0.5, 1);
  OptimizerSettings settings;
  settings.seed = opt.seed;

  const Grid g(1, 1.0, 8);
  const auto single = DomainMask::from_cells(g, {{0, 0}});
  double worst_single = 0.0;
  for (double mu : {1e-2, 1.0, 1e2}) {
    const auto res = minimize_alpha_mu(EigenProblem{single, mu, ps, kernel, settings});
    const double want = single_cell_reference(ps, ps.inverse(mu));
    worst_single = std::max(worst_single, std::abs(res.alpha_mu / want - 1.0));
  }

  const Grid g2(1, 1.0 / 8, 12);
  std::vector<CellIndex> cells;
  for (int i = -7; i < -2; ++i) cells.push_back({i, 0});
  for (int i = 2; i < 6; ++i) cells.push_back({i, 0});
  const auto omega = DomainMask::from_cells(g2, cells);
  const PairTable table(omega, kernel);
  double worst_spread = 0.0;
  for (double p : {2.0, 3.0}) {
    const auto G = YoungFunction::power(p);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double mu : {1e-2, 1.0, 1e2}) {
      const auto res = minimize_alpha_mu(EigenProblem{omega, mu, G, kernel, settings}, table);
      lo = std::min(lo, res.alpha_mu / mu);
      hi = std::max(hi, res.alpha_mu / mu);
    }
    worst_spread = std::max(worst_spread, (hi - lo) / lo);
  }
  r.passed = worst_single <= 1e-6 && worst_spread <= 1e-4;
  r.metrics = {{"single_cell_error", worst_single}, {"homogeneity_spread", worst_spread}};
  r.detail = "single-cell relative error " + fmt(worst_single) + ", alpha/mu spread " +
             fmt(worst_spread);
  return r;
}

CriterionResult criterion_faber_krahn(const AcceptanceOptions& opt, const Corpus& corpus) {
  CriterionResult r{10, "faber-krahn 1D", true, "", {}};
  const Grid g(1, 1.0 / 8, 12);
  std::vector<CellIndex> cells;
  for (int i = -8; i < -4; ++i) cells.push_back({i, 0});
  for (int i = 4; i < 8; ++i) cells.push_back({i, 0});
  const auto omega = DomainMask::from_cells(g, cells);
  const auto kernel = KernelPair::fractional(0.5, 1);
  OptimizerSettings settings;
  settings.seed = opt.seed;
  settings.tol = 1e-14;
  const auto mus = log_grid(1e-2, 1e2, 9);
  bool ok = true;
  double worst_alpha_margin = std::numeric_limits<double>::infinity();
  double worst_lambda_margin = std::numeric_limits<double>::infinity();
  for (const auto& G : {YoungFunction::power(2.0), YoungFunction::power_sum(2.0, 4.0)}) {
    const auto rep = faber_krahn_compare(omega, mus, G, kernel, settings);
    const double margin = (rep.omega.alpha_1 - rep.ball.alpha_1) / rep.omega.alpha_1;
    worst_alpha_margin = std::min(worst_alpha_margin, margin);
    ok &= rep.alpha_ok && margin >= 1e-3;
    if (rep.h_convex) {
      const double lm = (rep.omega.lambda_1 - rep.ball.lambda_1) / rep.omega.lambda_1;
      worst_lambda_margin = std::min(worst_lambda_margin, lm);
      ok &= rep.lambda_ok.value_or(false) && lm >= 1e-3;
    }
  }
  // Pairing monotonicity under polarization when h(t) = t g(t) is convex.
  std::size_t checks = 0;
  std::size_t violations = 0;
  const std::size_t count = std::min<std::size_t>(corpus.one_d().size(), 100);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = corpus.one_d()[i];
    const auto& G = corpus.young(s);
    if (!h_convex(G)) continue;
    const auto& table = corpus.table(s);
    const double base = pairing(s.u, s.u, G, table);
    for (const auto& H : compatible_half_spaces(s.u.grid())) {
      const Field uH = polarize(s.u, H);
      ++checks;
      if (pairing(uH, uH, G, table) > base * (1.0 + 1e-12)) ++violations;
    }
  }
  ok &= violations == 0 && checks > 0;
  r.passed = ok;
  r.metrics = {{"alpha_margin", worst_alpha_margin},
               {"lambda_margin", worst_lambda_margin},
               {"pairing_checks", static_cast<double>(checks)},
               {"pairing_violations", static_cast<double>(violations)}};
  r.detail = "alpha margin " + fmt(worst_alpha_margin) + ", lambda margin " +
             fmt(worst_lambda_margin) + ", " + std::to_string(checks) + " pairing checks, " +
             std::to_string(violations) + " violations";
  return r;
}

CriterionResult criterion_translation(const AcceptanceOptions& opt) {
  CriterionResult r{11, "translation bound", true, "", {}};
  Rng rng(opt.seed + 11);
  const auto youngs = builtin_youngs();
  const Grid g(1, 1.0 / 32, 32);
  std::vector<std::pair<KernelPair, std::shared_ptr<PairTable>>> kernels;
  for (double s : {0.25, 0.5, 0.75}) {
    const auto k = KernelPair::fractional(s, 1);
    kernels.emplace_back(k, std::make_shared<PairTable>(g, k));
  }
  std::size_t violations = 0;
  double worst = 0.0;
  for (int i = 0; i < opt.translation_cases; ++i) {
    const auto& G = youngs[static_cast<std::size_t>(i) % youngs.size()];
    const auto& [kernel, table] = kernels[static_cast<std::size_t>(i / 4) % kernels.size()];
    const double c = (uniform(rng) - 0.5) * 0.8;
    const double w = 0.05 + 0.25 * uniform(rng);
    const bool smooth = i % 2 == 0;
    const Field u = sample_field(g, [&](const Point& x) {
      const double d = std::abs(x[0] - c) / w;
      if (smooth) return d < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - d * d)) : 0.0;
      return std::max(0.0, 1.0 - d);
    });
    const int shift = 1 + pick(rng, 15);  // |h| <= 15/32 < 1/2
    const auto tr = translation_ratio(u, {shift, 0}, G, kernel, *table, G.p_minus());
    const double bound = translation_constant(G, 1);
    worst = std::max(worst, tr.ratio / bound);
    if (tr.ratio > bound) ++violations;
  }
  r.passed = violations == 0 && opt.translation_cases >= 50;
  r.metrics = {{"cases", static_cast<double>(opt.translation_cases)},
               {"violations", static_cast<double>(violations)},
               {"worst_ratio_over_bound", worst}};
  r.detail = std::to_string(opt.translation_cases) + " bumps and shifts, " +
             std::to_string(violations) + " violations, worst ratio / (2C/omega_n) " + fmt(worst);
  return r;
}

CriterionResult criterion_luxemburg(const Corpus& corpus) {
  CriterionResult r{12, "luxemburg contract", true, "", {}};
  double worst = 0.0;
  for (const Sample* s : corpus.all()) {
    const auto& G = corpus.young(*s);
    const auto& table = corpus.table(*s);
    const auto norms = luxemburg(s->u, G, table);
    Field a(s->u.grid());
    Field b(s->u.grid());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = s->u[i] / norms.lg_norm;
      b[i] = s->u[i] / norms.seminorm;
    }
    worst = std::max(worst, std::abs(phi_G(a, G) - 1.0));
    worst = std::max(worst, std::abs(phi_MNG(b, G, table) - 1.0));
  }
  const auto& s0 = corpus.all().front();
  const Field zero(s0->u.grid());
  const auto zn = luxemburg(zero, corpus.young(*s0), corpus.table(*s0));
  const bool zero_ok = zn.lg_norm == 0.0 && zn.seminorm == 0.0 && zn.full_norm == 0.0;
  r.passed = worst <= 1e-8 && zero_ok;
  r.metrics = {{"fields", static_cast<double>(corpus.all().size())},
               {"worst_unit_ball_error", worst},
               {"zero_field_ok", zero_ok ? 1.0 : 0.0}};
  r.detail = std::to_string(corpus.all().size()) + " fields, worst |Phi(u/norm) - 1| " + fmt(worst) +
             (zero_ok ? ", zero field gives zero norms" : ", zero field FAILED");
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::set<int> wanted(options.criteria.begin(), options.criteria.end());
  if (wanted.empty()) {
    for (int i = 1; i <= 12; ++i) wanted.insert(i);
  }
  for (int id : wanted) {
    if (id < 1 || id > 12) throw DomainError("acceptance: criteria are numbered 1..12");
  }
  std::unique_ptr<Corpus> corpus;
  auto need_corpus = [&]() -> const Corpus& {
    if (!corpus) corpus = std::make_unique<Corpus>(options, builtin_youngs());
    return *corpus;
  };
  std::vector<CriterionResult> out;
  for (int id : wanted) {
    CriterionResult res;
    try {
      switch (id) {
        case 1: res = criterion_young(options); break;
        case 2: res = criterion_kernels(); break;
        case 3: res = criterion_one_step(options, need_corpus()); break;
        case 4: res = criterion_full_ps(need_corpus()); break;
        case 5: res = criterion_iterated(options, need_corpus()); break;
        case 6: res = criterion_mollify(options); break;
        case 7: res = criterion_gradient(options); break;
        case 8: res = criterion_brackets(options, need_corpus()); break;
        case 9: res = criterion_eigen(options); break;
        case 10: res = criterion_faber_krahn(options, need_corpus()); break;
        case 11: res = criterion_translation(options); break;
        case 12: res = criterion_luxemburg(need_corpus()); break;
        default: break;
      }
    } catch (const std::exception& e) {
      res = CriterionResult{id, "criterion " + std::to_string(id), false,
                            std::string("error: ") + e.what(), {}};
    }
    out.push_back(res);
  }
  return out;
}

std::string format_line(const CriterionResult& result) {
  std::ostringstream out;
  out << (result.passed ? "PASS" : "FAIL") << "  criterion " << result.id << " (" << result.title
      << "): " << result.detail;
  return out.str();
}

}  // namespace orlicz
