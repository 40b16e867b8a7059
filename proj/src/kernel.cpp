#include "orlicz/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz/numerics.hpp"

namespace orlicz {

namespace {

void require_order(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    std::ostringstream msg;
    msg << "kernel: s must lie in (0,1), got " << s;
    throw DomainError(msg.str());
  }
}

void require_dimension(int n) {
  if (n < 1) throw DomainError("kernel: dimension n must be >= 1");
}

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("kernel: r must be finite and > 0");
}

}  // namespace

KernelPair::KernelPair(KernelFamily family, std::string name, int n, double s, double beta)
    : family_(family), name_(std::move(name)), n_(n), s_(s), beta_(beta) {}

KernelPair KernelPair::fractional(double s, int n) {
  require_order(s);
  require_dimension(n);
  return KernelPair(KernelFamily::kFractional, "fractional", n, s, 0.0);
}

KernelPair KernelPair::slobodetskii(int n) {
  require_dimension(n);
  return KernelPair(KernelFamily::kSlobodetskii, "slobodetskii", n, 1.0, 0.0);
}

KernelPair KernelPair::besov_log(double s, double beta, int n) {
  require_order(s);
  require_dimension(n);
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("kernel: besov-log needs a finite beta >= 0");
  }
  return KernelPair(KernelFamily::kBesovLog, "besov-log", n, s, beta);
}

KernelPair KernelPair::abs(double s, int n, const YoungFunction& G, Admissibility mode) {
  require_order(s);
  require_dimension(n);
  const double pm = G.p_minus();
  const double pp = G.p_plus();
  const double gap = pp - pm;
  const double inf = std::numeric_limits<double>::infinity();
  AbsAdmissibility adm;
  adm.ratio = static_cast<double>(n) / s;
  adm.integrability_threshold = gap > 0.0 ? pm * pm / gap : inf;
  adm.decay_threshold = gap > 0.0 ? pm / gap : inf;
  if (mode == Admissibility::kEnforce && !(adm.integrable() && adm.decays())) {
    std::ostringstream msg;
    msg << "kernel: abs family needs n/s < p-^2/(p+ - p-) = " << adm.integrability_threshold
        << " and n/s < p-/(p+ - p-) = " << adm.decay_threshold << ", got n/s = " << adm.ratio;
    throw DomainError(msg.str());
  }
  KernelPair k(KernelFamily::kAbs, "abs", n, s, 0.0);
  k.young_ = G;
  k.abs_ = adm;
  return k;
}

KernelPair KernelPair::custom(std::string name, int n, std::function<double(double)> M,
                              std::function<double(double)> N) {
  require_dimension(n);
  if (!M || !N) throw DomainError("kernel: custom pair needs both M and N");
  KernelPair k(KernelFamily::kCustom, std::move(name), n, 0.0, 0.0);
  k.custom_M_ = std::move(M);
  k.custom_N_ = std::move(N);
  return k;
}

double KernelPair::M(double r) const {
  require_radius(r);
  switch (family_) {
    case KernelFamily::kFractional:
      return std::pow(r, s_);
    case KernelFamily::kSlobodetskii:
      return r;
    case KernelFamily::kBesovLog:
      return std::pow(r, s_) * std::pow(1.0 + std::abs(std::log(r)), beta_);
    case KernelFamily::kAbs:
      return std::pow(r, s_) * young_->inverse(std::pow(r, n_));
    case KernelFamily::kCustom:
      return custom_M_(r);
  }
  return 0.0;
}

double KernelPair::N(double r) const {
  require_radius(r);
  switch (family_) {
    case KernelFamily::kFractional:
    case KernelFamily::kBesovLog:
      return std::pow(r, n_);
    case KernelFamily::kSlobodetskii:
      return std::pow(r, n_ - 1);
    case KernelFamily::kAbs:
      return 1.0;
    case KernelFamily::kCustom:
      return custom_N_(r);
  }
  return 0.0;
}

double KernelPair::log_M(double r) const {
  require_radius(r);
  const double lr = std::log(r);
  switch (family_) {
    case KernelFamily::kFractional:
      return s_ * lr;
    case KernelFamily::kSlobodetskii:
      return lr;
    case KernelFamily::kBesovLog:
      return s_ * lr + beta_ * std::log1p(std::abs(lr));
    case KernelFamily::kAbs:
      return s_ * lr + std::log(young_->inverse(std::exp(n_ * lr)));
    case KernelFamily::kCustom:
      return std::log(custom_M_(r));
  }
  return 0.0;
}

double KernelPair::log_N(double r) const {
  require_radius(r);
  const double lr = std::log(r);
  switch (family_) {
    case KernelFamily::kFractional:
    case KernelFamily::kBesovLog:
      return n_ * lr;
    case KernelFamily::kSlobodetskii:
      return (n_ - 1) * lr;
    case KernelFamily::kAbs:
      return 0.0;
    case KernelFamily::kCustom:
      return std::log(custom_N_(r));
  }
  return 0.0;
}

P3Result check_P3(const KernelPair& kernel, double p_minus, double quad_tol) {
  if (!(p_minus > 1.0)) throw DomainError("check_P3: p_minus must be > 1");
  if (!(quad_tol > 0.0)) throw DomainError("check_P3: quad_tol must be > 0");
  const double n = kernel.dimension();
  const double p = p_minus;
  // Evaluate in log space; overflowing or undefined samples sit far out in a
  // decaying tail and are dropped.
  auto safe_exp = [](auto&& log_value) {
    try {
      const double v = log_value();
      return std::isfinite(v) ? std::exp(v) : (v == -std::numeric_limits<double>::infinity() ? 0.0 : v);
    } catch (const RangeError&) {
      return 0.0;
    }
  };
  auto low = [&](double r) {
    return safe_exp([&] {
      return (n - 1.0 + p) * std::log(r) - kernel.log_N(r) - p * kernel.log_M(r);
    });
  };
  auto high = [&](double tau) {
    return safe_exp([&] {
      const double r = 1.0 / tau;
      return -(n + 1.0) * std::log(tau) - kernel.log_N(r) - p * kernel.log_M(r);
    });
  };
  P3Result out;
  const auto lo = integrate_unit_singular(low, quad_tol, 1000);
  if (!lo.diverged && std::isfinite(lo.value)) out.low = lo.value;
  out.low_error = lo.error;
  const auto hi = integrate_unit_singular(high, quad_tol, 1000);
  if (!hi.diverged && std::isfinite(hi.value)) out.high = hi.value;
  out.high_error = hi.error;
  return out;
}

P4Result check_P4(const KernelPair& kernel, double p_minus) {
  if (!(p_minus > 1.0)) throw DomainError("check_P4: p_minus must be > 1");
  const double n = kernel.dimension();
  P4Result out;
  for (int k = 1; k <= 40; ++k) {
    const double r = std::ldexp(1.0, -k);
    double q = 0.0;
    try {
      q = std::exp(kernel.log_N(2.0 * r) + p_minus * kernel.log_M(2.0 * r) - n * std::log(r));
    } catch (const RangeError&) {
      q = std::numeric_limits<double>::infinity();
    }
    out.sequence.push_back(q);
  }
  out.final_value = out.sequence.back();
  // Decay: the second half of the sequence is nonincreasing and ends below where it started.
  const std::size_t half = out.sequence.size() / 2;
  bool monotone = true;
  for (std::size_t i = half + 1; i < out.sequence.size(); ++i) {
    if (!(out.sequence[i] <= out.sequence[i - 1] * (1.0 + 1e-12))) monotone = false;
  }
  out.decays = monotone && std::isfinite(out.final_value) && out.final_value < out.sequence[half];
  return out;
}

std::size_t P1P2Report::failures() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += !s.positive + !s.M_monotone + !s.N_monotone + !s.M_lower_bound;
  return n;
}

P1P2Report verify_P1_P2(const KernelPair& kernel, const SampleGrid& grid) {
  constexpr double kTol = 1e-13;
  P1P2Report report;
  double prev_M = 0.0;
  double prev_N = 0.0;
  bool first = true;
  for (double r : grid.points()) {
    P1P2Sample s;
    s.r = r;
    double Mr = std::numeric_limits<double>::quiet_NaN();
    double Nr = std::numeric_limits<double>::quiet_NaN();
    try {
      Mr = kernel.M(r);
      Nr = kernel.N(r);
    } catch (const std::exception&) {
    }
    s.positive = Mr > 0.0 && Nr > 0.0 && std::isfinite(Mr) && std::isfinite(Nr);
    s.M_lower_bound = Mr >= std::min(1.0, r) * (1.0 - kTol);
    if (!first) {
      s.M_monotone = Mr >= prev_M * (1.0 - kTol);
      s.N_monotone = Nr >= prev_N * (1.0 - kTol);
    }
    prev_M = Mr;
    prev_N = Nr;
    first = false;
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace orlicz
