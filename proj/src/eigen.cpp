#include "orlicz/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "orlicz/numerics.hpp"

namespace orlicz {

namespace {

struct RunResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

class Objective {
 public:
  Objective(const EigenProblem& p, const PairTable& table)
      : problem_(p), table_(table), cells_(table.active_cells()) {}

  [[nodiscard]] Field embed(const std::vector<double>& x) const {
    Field u(table_.grid());
    for (std::size_t a = 0; a < cells_.size(); ++a) u[cells_[a]] = x[a];
    return u;
  }

  [[nodiscard]] double phi_G_of(const std::vector<double>& x, double t) const {
    ExactSum s;
    for (double v : x) s.add(problem_.G.G(t * v));
    return s.value() * table_.grid().cell_measure();
  }

  // Rescales x onto {Phi_G = mu}.
  [[nodiscard]] std::vector<double> project(std::vector<double> x) const {
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
      throw DomainError("minimize_alpha_mu: iterate collapsed to zero");
    }
    const double t = solve_increasing([&](double s) { return phi_G_of(x, s); }, problem_.mu);
    for (double& v : x) v *= t;
    return x;
  }

  [[nodiscard]] double value(const std::vector<double>& x) const {
    return phi_MNG(embed(x), problem_.G, table_);
  }

  [[nodiscard]] std::vector<double> gradient(const std::vector<double>& x) const {
    const Field g = modular_gradient(embed(x), problem_.G, table_);
    std::vector<double> out(cells_.size());
    for (std::size_t a = 0; a < cells_.size(); ++a) out[a] = g[cells_[a]];
    return out;
  }

 private:
  const EigenProblem& problem_;
  const PairTable& table_;
  const std::vector<std::size_t>& cells_;
};

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

RunResult descend(const Objective& obj, std::size_t m, const OptimizerSettings& settings,
                  int restart) {
  std::mt19937_64 rng(settings.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(restart));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> x(m);
  for (double& v : x) v = unif(rng);
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    throw DomainError("minimize_alpha_mu: all-zero initialization");
  }
  RunResult run;
  run.x = obj.project(std::move(x));
  run.f = obj.value(run.x);
  run.trace.push_back(run.f);
  double step = -1.0;
  int stalls = 0;
  for (int it = 0; it < settings.max_iter; ++it) {
    run.iterations = it + 1;
    const auto grad = obj.gradient(run.x);
    const double gn = norm2(grad);
    if (gn == 0.0) {
      run.converged = true;
      break;
    }
    if (step < 0.0) step = 0.1 * norm2(run.x) / gn;
    bool accepted = false;
    std::vector<double> y(m);
    double fy = 0.0;
    for (int tries = 0; tries < 80; ++tries) {
      for (std::size_t a = 0; a < m; ++a) y[a] = run.x[a] - step * grad[a];
      try {
        y = obj.project(std::move(y));
        fy = obj.value(y);
        if (fy < run.f) {
          accepted = true;
          break;
        }
      } catch (const std::exception&) {
        y.assign(m, 0.0);
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent direction left at floating-point resolution.
      run.converged = true;
      break;
    }
    const double decrease = (run.f - fy) / run.f;
    run.x = std::move(y);
    run.f = fy;
    run.trace.push_back(fy);
    step *= 2.0;
    if (decrease < settings.tol) {
      if (++stalls >= 3) {
        run.converged = true;
        break;
      }
    } else {
      stalls = 0;
    }
  }
  return run;
}

}  // namespace

EigenResult minimize_alpha_mu(const EigenProblem& problem) {
  const PairTable table(problem.omega, problem.kernel, problem.table_options);
  return minimize_alpha_mu(problem, table);
}

EigenResult minimize_alpha_mu(const EigenProblem& problem, const PairTable& table) {
  if (!(problem.mu > 0.0) || !std::isfinite(problem.mu)) {
    throw DomainError("minimize_alpha_mu: mu must be finite and > 0");
  }
  if (problem.omega.count() == 0) throw DomainError("minimize_alpha_mu: empty domain");
  if (table.active_cells() != problem.omega.cells()) {
    throw DomainError("minimize_alpha_mu: pair table must be built over the domain cells");
  }
  if (problem.settings.restarts < 1) throw DomainError("minimize_alpha_mu: need >= 1 restart");
  const Objective obj(problem, table);
  const std::size_t m = problem.omega.count();
  const int R = problem.settings.restarts;

  std::vector<RunResult> runs(static_cast<std::size_t>(R));
  const unsigned threads = std::thread::hardware_concurrency();
  if (threads > 1 && R > 1) {
    std::vector<std::future<RunResult>> jobs;
    for (int r = 0; r < R; ++r) {
      jobs.push_back(std::async(std::launch::async,
                                [&, r] { return descend(obj, m, problem.settings, r); }));
    }
    for (int r = 0; r < R; ++r) runs[static_cast<std::size_t>(r)] = jobs[static_cast<std::size_t>(r)].get();
  } else {
    for (int r = 0; r < R; ++r) runs[static_cast<std::size_t>(r)] = descend(obj, m, problem.settings, r);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].f < runs[best].f) best = r;
  }
  EigenResult out{obj.embed(runs[best].x), runs[best].f, 0.0, runs[best].trace,
                  static_cast<int>(best), runs[best].iterations, runs[best].converged};
  out.lambda_mu = lambda_from_minimizer(out.minimizer, problem.G, table);
  return out;
}

double lambda_from_minimizer(const Field& u, const YoungFunction& G, const PairTable& table) {
  const double denom = sum_g_u(u, G);
  if (denom == 0.0) throw DomainError("lambda_from_minimizer: zero denominator");
  return pairing(u, u, G, table) / denom;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw DomainError("log_grid: need 0 < lo <= hi and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

ScanResult scan_mu(const DomainMask& omega, const std::vector<double>& mu_grid,
                   const YoungFunction& G, const KernelPair& kernel,
                   const OptimizerSettings& settings, const PairTableOptions& table_options) {
  if (mu_grid.empty()) throw DomainError("scan_mu: empty mu grid");
  const PairTable table(omega, kernel, table_options);
  ScanResult out;
  out.alpha_1 = std::numeric_limits<double>::infinity();
  out.lambda_1 = std::numeric_limits<double>::infinity();
  for (double mu : mu_grid) {
    ScanRow row;
    row.mu = mu;
    try {
      const EigenProblem p{omega, mu, G, kernel, settings, table_options};
      const auto r = minimize_alpha_mu(p, table);
      row.ok = true;
      row.alpha_mu = r.alpha_mu;
      row.lambda_mu = r.lambda_mu;
      row.converged = r.converged;
      out.alpha_1 = std::min(out.alpha_1, r.alpha_mu);
      out.lambda_1 = std::min(out.lambda_1, r.lambda_mu);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(row);
  }
  return out;
}

bool h_convex(const YoungFunction& G, const SampleGrid& grid) {
  const auto ts = grid.points();
  std::vector<double> hv(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) hv[i] = ts[i] * G.g(ts[i]);
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    const double left = (hv[i] - hv[i - 1]) / (ts[i] - ts[i - 1]);
    const double right = (hv[i + 1] - hv[i]) / (ts[i + 1] - ts[i]);
    if (right - left < -1e-10 * std::max(std::abs(left), std::abs(right))) return false;
  }
  return true;
}

DomainMask centered_ball(const DomainMask& omega) {
  const Grid& g = omega.grid();
  const auto order = radial_order(g);
  std::vector<bool> inside(g.size(), false);
  for (std::size_t k = 0; k < omega.count(); ++k) inside[order[k]] = true;
  return DomainMask(g, std::move(inside));
}

FaberKrahnReport faber_krahn_compare(const DomainMask& omega, const std::vector<double>& mu_grid,
                                     const YoungFunction& G, const KernelPair& kernel,
                                     const OptimizerSettings& settings,
                                     const PairTableOptions& table_options) {
  if (omega.count() == 0) throw DomainError("faber_krahn_compare: empty domain");
  FaberKrahnReport out;
  const DomainMask ball = centered_ball(omega);
  out.omega = scan_mu(omega, mu_grid, G, kernel, settings, table_options);
  out.ball = scan_mu(ball, mu_grid, G, kernel, settings, table_options);
  out.h_convex = h_convex(G);
  out.alpha_ok = out.ball.alpha_1 <= out.omega.alpha_1;
  if (out.h_convex) out.lambda_ok = out.ball.lambda_1 <= out.omega.lambda_1;
  return out;
}

}  // namespace orlicz
