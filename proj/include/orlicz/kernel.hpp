#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

enum class KernelFamily { kFractional, kSlobodetskii, kBesovLog, kAbs, kCustom };

/// Exponent conditions of the abs family (M(r) = r^s G^{-1}(r^n), N = 1).
///
/// Integrability at infinity needs n/s < (p-)^2 / (p+ - p-); decay of
/// N(2r) M(2r)^{p-} / r^n at the origin needs n/s < p- / (p+ - p-).
/// Both thresholds are infinite when p- == p+.
struct AbsAdmissibility {
  double ratio = 0.0;  // n / s
  double integrability_threshold = 0.0;
  double decay_threshold = 0.0;
  [[nodiscard]] bool integrable() const { return ratio < integrability_threshold; }
  [[nodiscard]] bool decays() const { return ratio < decay_threshold; }
};

enum class Admissibility { kEnforce, kReport };

/// The weight pair (M, N) of the general fractional space.
class KernelPair {
 public:
  /// M(r) = r^s, N(r) = r^n.
  static KernelPair fractional(double s, int n);
  /// M(r) = r, N(r) = r^{n-1}.
  static KernelPair slobodetskii(int n);
  /// M(r) = r^s (1 + |log r|)^beta, N(r) = r^n.
  static KernelPair besov_log(double s, double beta, int n);
  /// M(r) = r^s G^{-1}(r^n), N(r) = 1. With kEnforce the stricter of the two
  /// exponent conditions must hold or DomainError is thrown.
  static KernelPair abs(double s, int n, const YoungFunction& G,
                        Admissibility mode = Admissibility::kEnforce);
  static KernelPair custom(std::string name, int n, std::function<double(double)> M,
                           std::function<double(double)> N);

  [[nodiscard]] double M(double r) const;
  [[nodiscard]] double N(double r) const;
  [[nodiscard]] std::pair<double, double> eval(double r) const { return {M(r), N(r)}; }
  /// log M(r) and log N(r), stable for very large and very small r.
  [[nodiscard]] double log_M(double r) const;
  [[nodiscard]] double log_N(double r) const;

  [[nodiscard]] KernelFamily family() const { return family_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dimension() const { return n_; }
  [[nodiscard]] double s() const { return s_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] const std::optional<AbsAdmissibility>& abs_admissibility() const {
    return abs_;
  }

 private:
  KernelPair(KernelFamily family, std::string name, int n, double s, double beta);

  KernelFamily family_;
  std::string name_;
  int n_;
  double s_;
  double beta_;
  std::optional<YoungFunction> young_;
  std::optional<AbsAdmissibility> abs_;
  std::function<double(double)> custom_M_;
  std::function<double(double)> custom_N_;
};

struct P3Result {
  std::optional<double> low;   // int_0^1 r^{n-1+p} / (N M^p) dr
  std::optional<double> high;  // int_1^inf r^{n-1} / (N M^p) dr
  double low_error = 0.0;
  double high_error = 0.0;
  [[nodiscard]] bool finite() const { return low.has_value() && high.has_value(); }
};

/// Both integrability integrals by dyadic adaptive quadrature; the tail is
/// mapped onto (0, 1] by r -> 1/r. A divergent integral is left empty.
P3Result check_P3(const KernelPair& kernel, double p_minus, double quad_tol = 1e-6);

struct P4Result {
  std::vector<double> sequence;  // q(2^-k), k = 1..40
  double final_value = 0.0;
  bool decays = false;
};

/// Evaluates q(r) = N(2r) M(2r)^p / r^n along r = 2^-k.
P4Result check_P4(const KernelPair& kernel, double p_minus);

struct P1P2Sample {
  double r = 0.0;
  bool positive = true;
  bool M_monotone = true;
  bool N_monotone = true;
  bool M_lower_bound = true;  // M(r) >= min{1, r}
};

struct P1P2Report {
  std::vector<P1P2Sample> samples;
  [[nodiscard]] std::size_t failures() const;
  [[nodiscard]] bool passed() const { return failures() == 0; }
};

P1P2Report verify_P1_P2(const KernelPair& kernel, const SampleGrid& grid = {1e-4, 1e4, 400});

}  // namespace orlicz
