#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

struct AcceptanceOptions {
  std::uint64_t seed = 20261018;
  std::vector<int> criteria;               // empty runs all twelve
  std::optional<YoungFunction> extra_young;  // checked with the built-ins in criterion 1
  int fields_1d = 300;
  int fields_2d = 200;
  int iterated_fields = 100;
  int mollifier_pairs = 120;
  int duality_pairs = 120;
  int translation_cases = 60;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
};

/// Runs the selected acceptance criteria; deterministic for a given seed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "PASS  3 one-step polarization: ..." style summary line.
std::string format_line(const CriterionResult& result);

}  // namespace orlicz
