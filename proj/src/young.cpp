#include "orlicz/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "orlicz/numerics.hpp"

namespace orlicz {

std::vector<double> SampleGrid::points() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw DomainError("SampleGrid: need 0 < t_min < t_max and count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lo = std::log(t_min);
  const double step = (std::log(t_max) - lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(lo + step * i);
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

namespace {

void require_exponent(double p, const char* what) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << what << ": exponent must be finite and > 1, got " << p;
    throw DomainError(msg.str());
  }
}

}  // namespace

YoungFunction::YoungFunction(YoungFamily family, std::string name, std::vector<double> params,
                             std::function<double(double)> G, std::function<double(double)> g,
                             std::optional<ExponentBounds> analytic)
    : family_(family),
      name_(std::move(name)),
      params_(std::move(params)),
      G_(std::move(G)),
      g_(std::move(g)) {
  const SampleGrid grid;
  sampled_ = extremize_exponents(*this, grid);
  analytic_ = analytic.has_value();
  exponents_ = analytic ? *analytic : sampled_;
  delta2_ = sample_delta2(*this, grid);
}

YoungFunction YoungFunction::power(double p) {
  require_exponent(p, "power");
  return YoungFunction(
      YoungFamily::kPower, "power", {p}, [p](double t) { return std::pow(t, p); },
      [p](double t) { return p * std::pow(t, p - 1.0); }, ExponentBounds{p, p});
}

YoungFunction YoungFunction::power_sum(double p, double q) {
  require_exponent(p, "power-sum");
  require_exponent(q, "power-sum");
  return YoungFunction(
      YoungFamily::kPowerSum, "power-sum", {p, q},
      [p, q](double t) { return 0.5 * (std::pow(t, p) + std::pow(t, q)); },
      [p, q](double t) { return 0.5 * (p * std::pow(t, p - 1.0) + q * std::pow(t, q - 1.0)); },
      ExponentBounds{std::min(p, q), std::max(p, q)});
}

YoungFunction YoungFunction::power_log(double p) {
  require_exponent(p, "power-log");
  const double c = 1.0 / std::numbers::ln2;
  return YoungFunction(
      YoungFamily::kPowerLog, "power-log", {p},
      [p, c](double t) { return c * std::pow(t, p) * std::log1p(t); },
      [p, c](double t) {
        return c * (p * std::pow(t, p - 1.0) * std::log1p(t) + std::pow(t, p) / (1.0 + t));
      },
      ExponentBounds{p, p + 1.0});
}

YoungFunction YoungFunction::custom(std::string name, std::function<double(double)> G,
                                    std::function<double(double)> g,
                                    std::optional<ExponentBounds> exponents) {
  if (!G || !g) throw DomainError("custom Young function needs both G and g");
  return YoungFunction(YoungFamily::kCustom, std::move(name), {}, std::move(G), std::move(g),
                       exponents);
}

double YoungFunction::G(double t) const {
  if (!std::isfinite(t)) throw DomainError("G: argument must be finite");
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  const double v = G_(a);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "G(" << t << ") overflows the double range";
    throw RangeError(msg.str());
  }
  return v;
}

double YoungFunction::g(double t) const {
  if (!std::isfinite(t)) throw DomainError("g: argument must be finite");
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  const double v = g_(a);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "g(" << t << ") overflows the double range";
    throw RangeError(msg.str());
  }
  return t < 0.0 ? -v : v;
}

double YoungFunction::conjugate_derivative(double a) const {
  if (!(a >= 0.0)) throw DomainError("conjugate: argument must be >= 0");
  if (a == 0.0) return 0.0;
  return solve_increasing([this](double t) { return g(t); }, a);
}

double YoungFunction::conjugate(double a) const {
  const double t = conjugate_derivative(a);
  return std::max(0.0, a * t - G(t));
}

double YoungFunction::inverse(double y) const {
  if (!(y >= 0.0)) throw DomainError("inverse_G: argument must be >= 0");
  return solve_increasing([this](double t) { return G(t); }, y);
}

ExponentBounds extremize_exponents(const YoungFunction& G, const SampleGrid& grid) {
  ExponentBounds out{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
  for (double t : grid.points()) {
    const double ratio = t * G.g(t) / G.G(t);
    out.p_minus = std::min(out.p_minus, ratio);
    out.p_plus = std::max(out.p_plus, ratio);
  }
  return out;
}

double sample_delta2(const YoungFunction& G, const SampleGrid& grid) {
  double best = 0.0;
  for (double t : grid.points()) best = std::max(best, G.G(2.0 * t) / G.G(t));
  return best;
}

std::size_t YoungReport::failures() const {
  std::size_t n = 0;
  for (const auto& p : points) {
    n += !p.G_lower + !p.G_upper + !p.g_lower + !p.g_upper + !p.conjugate_ok +
         !p.conjugate_exponent_ok;
  }
  for (const auto& q : pairs) n += !q.scaling_ok + !q.young_ok;
  n += !normalized + !monotone + !convex;
  return n;
}

namespace {

bool leq_rel(double lhs, double rhs, double rel) {
  return lhs <= rhs + rel * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

YoungReport verify_properties(const YoungFunction& G, const SampleGrid& grid) {
  constexpr double kGrowthTol = 1e-10;
  constexpr double kConjugateTol = 1e-8;
  const double pm = G.p_minus();
  const double pp = G.p_plus();
  const double conj_lo = pp / (pp - 1.0);  // (p+)'
  const double conj_hi = pm / (pm - 1.0);  // (p-)'
  const auto ts = grid.points();

  YoungReport report;
  report.extremized = extremize_exponents(G, grid);
  report.delta2 = sample_delta2(G, grid);
  report.normalized = std::abs(G.G(1.0) - 1.0) <= 1e-12 && G.G(0.0) == 0.0;

  std::vector<double> values(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) values[i] = G.G(ts[i]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(values[i] > values[i - 1])) report.monotone = false;
    if (i + 1 < ts.size()) {
      const double left = (values[i] - values[i - 1]) / (ts[i] - ts[i - 1]);
      const double right = (values[i + 1] - values[i]) / (ts[i + 1] - ts[i]);
      if (right - left < -1e-12 * std::max(std::abs(left), std::abs(right))) report.convex = false;
    }
  }

  for (double t : ts) {
    YoungPointCheck c;
    c.t = t;
    const double Gt = G.G(t);
    const double gt = G.g(t);
    c.exponent_ratio = t * gt / Gt;
    if (t >= 1.0) {
      c.G_lower = leq_rel(std::pow(t, pm), Gt, kGrowthTol);
      c.G_upper = leq_rel(Gt, std::pow(t, pp), kGrowthTol);
      c.g_lower = leq_rel(pm * std::pow(t, pm - 1.0), gt, kGrowthTol);
      c.g_upper = leq_rel(gt, pp * std::pow(t, pp - 1.0), kGrowthTol);
    } else {
      c.G_lower = leq_rel(std::pow(t, pp), Gt, kGrowthTol);
      c.G_upper = leq_rel(Gt, std::pow(t, pm), kGrowthTol);
      c.g_lower = leq_rel(pm * std::pow(t, pp - 1.0), gt, kGrowthTol);
      c.g_upper = leq_rel(gt, pp * std::pow(t, pm - 1.0), kGrowthTol);
    }
    try {
      const double a = gt;
      const double root = G.conjugate_derivative(a);
      const double conj = std::max(0.0, a * root - G.G(root));
      c.conjugate_residual = std::abs(conj - (t * gt - Gt));
      c.conjugate_ok = c.conjugate_residual <= kConjugateTol * (1.0 + t * gt);
      const double ratio = a * root / conj;
      c.conjugate_exponent_ok =
          leq_rel(conj_lo, ratio, kConjugateTol) && leq_rel(ratio, conj_hi, kConjugateTol);
    } catch (const std::exception&) {
      c.conjugate_ok = false;
      c.conjugate_exponent_ok = false;
    }
    report.points.push_back(c);
  }

  // Two-variable bounds on a coarser set of a-values.
  std::vector<double> as;
  for (std::size_t i = 0; i < ts.size(); i += 10) as.push_back(ts[i]);
  as.push_back(ts.back());
  for (double s : as) {
    double a_young = 0.0;
    double conj = 0.0;
    bool conj_valid = true;
    try {
      a_young = G.g(s);
      conj = G.conjugate(a_young);
    } catch (const std::exception&) {
      conj_valid = false;
    }
    const double g_s = G.g(s);
    for (double t : ts) {
      YoungPairCheck q;
      q.a = s;
      q.t = t;
      if (t < 1.0) {
        const double g_st = G.g(s * t);
        q.scaling_ok = leq_rel((pm / pp) * g_s * std::pow(t, pp - 1.0), g_st, kGrowthTol) &&
                       leq_rel(g_st, (pp / pm) * g_s * std::pow(t, pm - 1.0), kGrowthTol);
      }
      if (conj_valid) {
        const double lhs = a_young * t;
        const double rhs = G.G(t) + conj;
        q.young_ok = lhs <= rhs + 1e-9 * (1.0 + lhs);
      } else {
        q.young_ok = false;
      }
      report.pairs.push_back(q);
    }
  }
  return report;
}

}  // namespace orlicz
