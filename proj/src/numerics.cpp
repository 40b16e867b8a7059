#include "orlicz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace orlicz {

double unit_ball_volume(int n) {
  if (n < 1) throw DomainError("unit_ball_volume: dimension must be >= 1");
  const double half = 0.5 * static_cast<double>(n);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

void ExactSum::add(double x) {
  if (!std::isfinite(x)) {
    nonfinite_ += x;
    has_nonfinite_ = true;
    return;
  }
  std::size_t used = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[used++] = lo;
    x = hi;
  }
  partials_.resize(used);
  partials_.push_back(x);
}

void ExactSum::merge(const ExactSum& other) {
  for (double p : other.partials_) add(p);
  if (other.has_nonfinite_) {
    nonfinite_ += other.nonfinite_;
    has_nonfinite_ = true;
  }
}

double ExactSum::value() const {
  if (has_nonfinite_) return nonfinite_;
  if (partials_.empty()) return 0.0;
  std::size_t j = partials_.size() - 1;
  double hi = partials_[j];
  double lo = 0.0;
  while (j > 0) {
    const double x = hi;
    const double y = partials_[--j];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Round-half-even correction when the remaining partials push past a tie.
  if (j > 0 && ((lo < 0.0 && partials_[j - 1] < 0.0) || (lo > 0.0 && partials_[j - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

QuadratureResult integrate_unit_singular(const std::function<double(double)>& f, double tol,
                                         int max_panels) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult out;
  ExactSum total;
  double err_total = 0.0;
  std::vector<double> contributions;
  double upper = 1.0;
  const double panel_tol = std::min(1e-12, tol * 1e-3);
  for (int k = 0; k < max_panels; ++k) {
    const double lower = 0.5 * upper;
    double err = 0.0;
    const double c = gauss_kronrod<double, 15>::integrate(f, lower, upper, 12, panel_tol, &err);
    if (!std::isfinite(c)) {
      out.diverged = true;
      out.panels = k + 1;
      return out;
    }
    total.add(c);
    err_total += err;
    contributions.push_back(std::abs(c));
    upper = lower;
    out.panels = k + 1;

    const double partial = total.value();
    if (std::abs(partial) > 1.0 / tol) {
      out.diverged = true;
      out.value = partial;
      return out;
    }
    if (k < 8) continue;
    const std::size_t m = contributions.size();
    const double last = contributions[m - 1];
    if (last == 0.0 && contributions[m - 2] == 0.0) break;
    double ratio = 0.0;
    for (std::size_t i = m - 3; i < m; ++i) {
      if (contributions[i - 1] > 0.0) ratio = std::max(ratio, contributions[i] / contributions[i - 1]);
    }
    if (ratio < 1.0) {
      const double remainder = last * ratio / (1.0 - ratio);
      if (remainder < 0.25 * tol) {
        out.value = partial + (partial >= 0.0 ? remainder : -remainder);
        out.error = err_total + remainder;
        return out;
      }
    }
    if (upper < 1e-300) break;
  }
  const double partial = total.value();
  out.value = partial;
  out.error = err_total;
  // Either the panels never started to decay geometrically or the range ran out.
  const std::size_t m = contributions.size();
  if (m >= 2 && contributions[m - 1] > 0.0 && contributions[m - 1] >= 0.999 * contributions[m - 2]) {
    out.diverged = true;
  }
  return out;
}

double solve_increasing(const std::function<double(double)>& f, double target,
                        double initial_upper) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw DomainError("solve_increasing: target must be finite and >= 0");
  }
  double lo = 0.0;
  double hi = initial_upper > 0.0 ? initial_upper : 1.0;
  try {
    if (f(lo) >= target) return 0.0;
    double f_hi = f(hi);
    while (f_hi < target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw RangeError("solve_increasing: no upper bracket below 1e300");
      f_hi = f(hi);
    }
    // Tighten the lower end as well so tiny targets are resolved in relative terms.
    while (lo == 0.0 && f(0.5 * hi) >= target && hi > 1e-300) hi *= 0.5;
    if (lo == 0.0) lo = 0.5 * hi;
  } catch (const RangeError& e) {
    throw RangeError(std::string("solve_increasing: bracketing failed: ") + e.what());
  }
  if (lo == hi) return lo;
  auto residual = [&](double t) { return f(t) - target; };
  std::uintmax_t max_iter = 300;
  const auto [a, b] = boost::math::tools::toms748_solve(
      residual, lo, hi, boost::math::tools::eps_tolerance<double>(53), max_iter);
  return std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
}

std::vector<QuadratureNode> gauss_legendre(double a, double b) {
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<QuadratureNode> nodes;
  nodes.reserve(16);
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back({mid - half * x[i], half * w[i]});
    nodes.push_back({mid + half * x[i], half * w[i]});
  }
  std::sort(nodes.begin(), nodes.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
  return nodes;
}

}  // namespace orlicz
