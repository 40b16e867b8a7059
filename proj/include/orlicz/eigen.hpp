#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/field.hpp"
#include "orlicz/kernel.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

struct OptimizerSettings {
  int max_iter = 2000;
  double tol = 1e-12;  // relative decrease below which a step counts as stalled
  int restarts = 8;
  std::uint64_t seed = 1;
};

struct EigenProblem {
  DomainMask omega;
  double mu;
  YoungFunction G;
  KernelPair kernel;
  OptimizerSettings settings{};
  PairTableOptions table_options{};
};

struct EigenResult {
  Field minimizer;
  double alpha_mu = 0.0;
  double lambda_mu = 0.0;
  std::vector<double> trace;  // objective after every accepted step of the best run
  int best_restart = 0;
  int iterations = 0;
  bool converged = false;
};

/// Projected gradient descent on {Phi_G(u) = mu, u = 0 off Omega} with
/// backtracking and multi-start; returns the best run.
EigenResult minimize_alpha_mu(const EigenProblem& problem);
/// Same, reusing a pair table built over the domain cells.
EigenResult minimize_alpha_mu(const EigenProblem& problem, const PairTable& table);

/// pairing(u, u) / sum g(u_i) u_i h^n.
double lambda_from_minimizer(const Field& u, const YoungFunction& G, const PairTable& table);

/// mu_count log-spaced levels in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

struct ScanRow {
  double mu = 0.0;
  bool ok = false;
  double alpha_mu = 0.0;
  double lambda_mu = 0.0;
  bool converged = false;
  std::string error;
};

struct ScanResult {
  double alpha_1 = 0.0;
  double lambda_1 = 0.0;
  std::vector<ScanRow> rows;
};

ScanResult scan_mu(const DomainMask& omega, const std::vector<double>& mu_grid,
                   const YoungFunction& G, const KernelPair& kernel,
                   const OptimizerSettings& settings = {},
                   const PairTableOptions& table_options = {});

/// Sampled second differences of h(t) = t g(t) are all >= -1e-10 (relative).
bool h_convex(const YoungFunction& G, const SampleGrid& grid = {});

/// The |omega| cells closest to the origin (same ordering as schwarz).
DomainMask centered_ball(const DomainMask& omega);

struct FaberKrahnReport {
  ScanResult omega;
  ScanResult ball;
  bool h_convex = false;
  bool alpha_ok = false;
  std::optional<bool> lambda_ok;  // only when h_convex
};

FaberKrahnReport faber_krahn_compare(const DomainMask& omega, const std::vector<double>& mu_grid,
                                     const YoungFunction& G, const KernelPair& kernel,
                                     const OptimizerSettings& settings = {},
                                     const PairTableOptions& table_options = {});

}  // namespace orlicz
