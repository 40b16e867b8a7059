#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orlicz {

/// Log-spaced sample points used for every sampled property of a Young function.
struct SampleGrid {
  double t_min = 1e-3;
  double t_max = 1e3;
  int count = 200;

  [[nodiscard]] std::vector<double> points() const;
};

enum class YoungFamily { kPower, kPowerSum, kPowerLog, kCustom };

struct ExponentBounds {
  double p_minus;
  double p_plus;
};

/// An even convex Young function G with derivative g, normalized so that G(1) = 1.
///
/// Built-in families:
///   power      |t|^p
///   power-sum  (|t|^p + |t|^q) / 2
///   power-log  |t|^p log(1 + |t|) / log 2
/// For these the growth exponents p-, p+ are known in closed form. A custom G
/// takes its exponents from the caller or, failing that, from the sample grid.
///
/// Instances are immutable after construction; all evaluators are thread-safe.
class YoungFunction {
 public:
  static YoungFunction power(double p);
  static YoungFunction power_sum(double p, double q);
  static YoungFunction power_log(double p);
  static YoungFunction custom(std::string name, std::function<double(double)> G,
                              std::function<double(double)> g,
                              std::optional<ExponentBounds> exponents = std::nullopt);

  /// G(|t|). Throws RangeError instead of returning infinity.
  [[nodiscard]] double G(double t) const;
  /// Odd extension of G'.
  [[nodiscard]] double g(double t) const;
  /// Complementary function G*(a) = sup_{t>0} (a t - G(t)), a >= 0.
  [[nodiscard]] double conjugate(double a) const;
  /// (G*)'(a), i.e. the t > 0 solving g(t) = a.
  [[nodiscard]] double conjugate_derivative(double a) const;
  /// t >= 0 with G(t) = y.
  [[nodiscard]] double inverse(double y) const;

  [[nodiscard]] double p_minus() const { return exponents_.p_minus; }
  [[nodiscard]] double p_plus() const { return exponents_.p_plus; }
  [[nodiscard]] bool exponents_analytic() const { return analytic_; }
  /// inf / sup of t g(t) / G(t) over the default sample grid.
  [[nodiscard]] ExponentBounds sampled_exponents() const { return sampled_; }
  /// sup of G(2t) / G(t) over the default sample grid; grid-dependent by nature.
  [[nodiscard]] double delta2_constant() const { return delta2_; }

  [[nodiscard]] YoungFamily family() const { return family_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<double>& parameters() const { return params_; }

 private:
  YoungFunction(YoungFamily family, std::string name, std::vector<double> params,
                std::function<double(double)> G, std::function<double(double)> g,
                std::optional<ExponentBounds> analytic);

  YoungFamily family_;
  std::string name_;
  std::vector<double> params_;
  std::function<double(double)> G_;
  std::function<double(double)> g_;
  ExponentBounds exponents_{};
  ExponentBounds sampled_{};
  bool analytic_ = false;
  double delta2_ = 0.0;
};

/// Extremized t g(t) / G(t) over an arbitrary grid.
ExponentBounds extremize_exponents(const YoungFunction& G, const SampleGrid& grid);
/// sup G(2t) / G(t) over an arbitrary grid.
double sample_delta2(const YoungFunction& G, const SampleGrid& grid);

struct YoungPointCheck {
  double t = 0.0;
  bool G_lower = true;   // t^{p+} <= G (t<1) or t^{p-} <= G (t>1)
  bool G_upper = true;
  bool g_lower = true;
  bool g_upper = true;
  double exponent_ratio = 0.0;  // t g(t) / G(t)
  double conjugate_residual = 0.0;  // |G*(g(t)) - (t g(t) - G(t))|
  bool conjugate_ok = true;
  bool conjugate_exponent_ok = true;  // (p+)' <= a g*(a) / G*(a) <= (p-)' at a = g(t)
};

struct YoungPairCheck {
  double a = 0.0;
  double t = 0.0;
  bool scaling_ok = true;  // only meaningful for 0 < t < 1
  bool young_ok = true;
};

struct YoungReport {
  std::vector<YoungPointCheck> points;
  std::vector<YoungPairCheck> pairs;
  ExponentBounds extremized{};
  double delta2 = 0.0;
  bool normalized = true;
  bool monotone = true;
  bool convex = true;

  [[nodiscard]] std::size_t failures() const;
  [[nodiscard]] bool passed() const { return failures() == 0; }
};

/// Checks the growth, scaling, conjugate and Young inequalities at every sample.
/// Failures are recorded in the report, never thrown.
YoungReport verify_properties(const YoungFunction& G, const SampleGrid& grid = {});

}  // namespace orlicz
