#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/field.hpp"
#include "orlicz/kernel.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/young.hpp"

namespace orlicz::cli {

enum class Command { kVerify, kModular, kRearrange, kPolarize, kEigen, kFaberKrahn, kKernels };

struct GridSpec {
  int n = 1;
  double h = 0.125;
  int K = 12;
};

struct RunPlan {
  Command command = Command::kVerify;
  std::string young_family = "power-sum";
  double p = 2.0;
  double q = 4.0;
  std::string kernel_family = "fractional";
  double s = 0.5;
  double beta = 0.25;
  GridSpec grid;
  Exterior exterior = Exterior::kZeroExtension;
  std::string input;
  std::string output;
  std::string report;
  std::string trace;
  bool json = false;
  std::uint64_t seed = 20261018;
  std::vector<double> mu;
  double tol = 1e-12;
  int max_iter = 2000;
  int restarts = 8;
  std::vector<CellIndex> domain;          // empty means the default two-interval domain
  std::optional<HalfSpace> half_space;    // polarize: single step when set, iterated otherwise
  std::vector<int> criteria;              // verify: empty runs all

  // Injected into the verify suite next to the built-in Young functions.
  std::optional<YoungFunction> extra_young;

  [[nodiscard]] YoungFunction young() const;
  [[nodiscard]] KernelPair kernel(int n) const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct ParseResult {
  std::optional<RunPlan> plan;
  std::vector<std::string> errors;
};

/// Line-based `key = value` config; overrides are applied afterwards and win.
ParseResult parse(const std::string& config_text, const Overrides& overrides = {});

std::string command_name(Command c);

/// Runs the plan. Returns 0 on success, 1 on a property failure, 2 on usage or I/O errors.
int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

}  // namespace orlicz::cli
