#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

/// Raised when an argument lies outside an operation's domain (r <= 0, negative field values, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a value leaves the representable range (overflow, failed bracketing).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Volume of the unit ball in R^n, so that |B_r| = omega_n r^n.
double unit_ball_volume(int n);

/// Correctly rounded floating-point summation (Shewchuk partials).
///
/// The result depends only on the multiset of added terms, never on their order,
/// which makes reductions reproducible across partitions and thread counts.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  [[nodiscard]] double value() const;

 private:
  std::vector<double> partials_;
  double nonfinite_ = 0.0;
  bool has_nonfinite_ = false;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool diverged = false;
  int panels = 0;
};

/// Integrates f over (0, 1] where f may be (integrably) singular at 0.
///
/// The interval is split into dyadic panels [2^-k-1, 2^-k]; each panel is
/// integrated by adaptive Gauss-Kronrod and the geometric decay of the panel
/// contributions is used to bound the remainder. Partial sums exceeding
/// 1/tol, or panels that stop decaying, are reported as divergence.
QuadratureResult integrate_unit_singular(const std::function<double(double)>& f, double tol,
                                         int max_panels = 4000);

/// Finds t >= 0 with f(t) = target for f continuous and strictly increasing on [0, inf)
/// with f(0) <= target. Throws RangeError if no upper bracket is found.
double solve_increasing(const std::function<double(double)>& f, double target,
                        double initial_upper = 1.0);

struct QuadratureNode {
  double x;
  double w;
};

/// Nodes and weights of the 16-point Gauss-Legendre rule on [a, b], sorted by abscissa.
std::vector<QuadratureNode> gauss_legendre(double a, double b);

}  // namespace orlicz
