#include "orlicz/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "orlicz/acceptance.hpp"
#include "orlicz/eigen.hpp"
#include "orlicz/numerics.hpp"
#include "orlicz/rearrange.hpp"

namespace orlicz::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
std::optional<T> to_number(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"verify", Command::kVerify},       {"modular", Command::kModular},
      {"rearrange", Command::kRearrange}, {"polarize", Command::kPolarize},
      {"eigen", Command::kEigen},         {"faber-krahn", Command::kFaberKrahn},
      {"kernels", Command::kKernels}};
  return table;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "command", "young",  "p",     "q",        "kernel",   "s",         "beta",
      "grid",    "exterior", "input", "output", "report",   "trace",     "json",
      "seed",    "mu",     "tol",   "max_iter", "restarts", "domain",    "halfspace",
      "criteria"};
  return keys;
}

bool reads_field(Command c) {
  return c == Command::kModular || c == Command::kRearrange || c == Command::kPolarize;
}

bool uses_domain(Command c) { return c == Command::kEigen || c == Command::kFaberKrahn; }

// "a:b" half-open cell range.
std::optional<std::pair<int, int>> parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) return std::nullopt;
  const auto a = to_number<int>(parts[0]);
  const auto b = to_number<int>(parts[1]);
  if (!a || !b || *a >= *b) return std::nullopt;
  return std::make_pair(*a, *b);
}

// Comma-separated pieces; a piece is "a:b" in 1D or "a:b/c:d" in 2D.
std::optional<std::vector<CellIndex>> parse_domain(const std::string& s, int n) {
  std::set<CellIndex> cells;
  for (const auto& piece : split(s, ',')) {
    const auto axes = split(piece, '/');
    if (static_cast<int>(axes.size()) != n) return std::nullopt;
    const auto x = parse_range(axes[0]);
    if (!x) return std::nullopt;
    if (n == 1) {
      for (int i = x->first; i < x->second; ++i) cells.insert({i, 0});
    } else {
      const auto y = parse_range(axes[1]);
      if (!y) return std::nullopt;
      for (int i = x->first; i < x->second; ++i) {
        for (int k = y->first; k < y->second; ++k) cells.insert({i, k});
      }
    }
  }
  if (cells.empty()) return std::nullopt;
  return std::vector<CellIndex>(cells.begin(), cells.end());
}

// below:AXIS:OFFSET2, above:AXIS:OFFSET2, diagonal:upper|lower, antidiagonal:upper|lower.
// OFFSET2 is the boundary position in units of h/2.
std::optional<HalfSpace> parse_half_space(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.empty()) return std::nullopt;
  if ((parts[0] == "below" || parts[0] == "above") && parts.size() == 3) {
    const auto axis = to_number<int>(parts[1]);
    const auto off = to_number<int>(parts[2]);
    if (!axis || !off || *axis < 0 || *axis > 1) return std::nullopt;
    return parts[0] == "below" ? HalfSpace::below(*axis, *off) : HalfSpace::above(*axis, *off);
  }
  if ((parts[0] == "diagonal" || parts[0] == "antidiagonal") && parts.size() == 2 &&
      (parts[1] == "upper" || parts[1] == "lower")) {
    const bool upper = parts[1] == "upper";
    return parts[0] == "diagonal" ? HalfSpace::diagonal(upper) : HalfSpace::antidiagonal(upper);
  }
  return std::nullopt;
}

std::vector<CellIndex> default_domain(const GridSpec& g) {
  const int m = std::max(1, g.K / 3);
  std::vector<CellIndex> cells;
  if (g.n == 1) {
    for (int i = -2 * m; i < -m; ++i) cells.push_back({i, 0});
    for (int i = m; i < 2 * m; ++i) cells.push_back({i, 0});
  } else {
    for (int i = -2 * m; i < -m; ++i) {
      for (int k = -2 * m; k < -m; ++k) cells.push_back({i, k});
    }
    for (int i = m; i < 2 * m; ++i) {
      for (int k = m; k < 2 * m; ++k) cells.push_back({i, k});
    }
  }
  return cells;
}

Json field_summary(const Field& u) {
  const Grid& g = u.grid();
  return Json{{"n", g.n()}, {"h", g.h()}, {"K", g.K()}, {"cells", g.size()}};
}

Json young_json(const YoungFunction& G) {
  return Json{{"family", G.name()},
              {"parameters", G.parameters()},
              {"p_minus", G.p_minus()},
              {"p_plus", G.p_plus()},
              {"exponents_analytic", G.exponents_analytic()},
              {"delta2", G.delta2_constant()}};
}

Json kernel_json(const KernelPair& k) {
  Json j{{"family", k.name()}, {"n", k.dimension()}, {"s", k.s()}};
  if (k.family() == KernelFamily::kBesovLog) j["beta"] = k.beta();
  return j;
}

Field read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  try {
    return read_field_csv(in);
  } catch (const DomainError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw UsageError("write to '" + path + "' failed");
}

void write_field(const std::string& path, const Field& u) {
  std::ostringstream s;
  write_field_csv(s, u);
  write_text(path, s.str());
}

struct Outcome {
  Json report;
  std::string summary;
  bool passed = true;
};

PairTableOptions table_options(const RunPlan& plan) {
  PairTableOptions o;
  o.exterior = plan.exterior;
  return o;
}

Outcome run_verify(const RunPlan& plan) {
  AcceptanceOptions opt;
  opt.seed = plan.seed;
  opt.criteria = plan.criteria;
  opt.extra_young = plan.extra_young ? *plan.extra_young : plan.young();
  const auto results = run_acceptance(opt);
  Outcome o;
  Json rows = Json::array();
  std::ostringstream text;
  for (const auto& r : results) {
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    rows.push_back(Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed},
                        {"detail", r.detail}, {"metrics", metrics}});
    text << format_line(r) << "\n";
    o.passed = o.passed && r.passed;
  }
  o.report = Json{{"command", "verify"}, {"seed", plan.seed}, {"passed", o.passed},
                  {"criteria", rows}};
  o.summary = text.str();
  return o;
}

Outcome run_modular(const RunPlan& plan) {
  const Field u = read_field(plan.input);
  const auto G = plan.young();
  const auto kernel = plan.kernel(u.grid().n());
  const PairTable table(u.grid(), kernel, table_options(plan));
  const auto norms = luxemburg(u, G, table);
  Outcome o;
  o.report = Json{{"command", "modular"},
                  {"grid", field_summary(u)},
                  {"young", young_json(G)},
                  {"kernel", kernel_json(kernel)},
                  {"phi_G", phi_G(u, G)},
                  {"phi_MNG", phi_MNG(u, G, table)},
                  {"lg_norm", norms.lg_norm},
                  {"seminorm", norms.seminorm},
                  {"full_norm", norms.full_norm}};
  std::ostringstream text;
  text.precision(12);
  text << "phi_G     " << o.report["phi_G"].get<double>() << "\n"
       << "phi_MNG   " << o.report["phi_MNG"].get<double>() << "\n"
       << "lg_norm   " << norms.lg_norm << "\n"
       << "seminorm  " << norms.seminorm << "\n"
       << "full_norm " << norms.full_norm << "\n";
  o.summary = text.str();
  return o;
}

Outcome run_rearrange(const RunPlan& plan) {
  const Field u = read_field(plan.input);
  const auto G = plan.young();
  const auto kernel = plan.kernel(u.grid().n());
  const PairTable table(u.grid(), kernel, table_options(plan));
  const Field star = schwarz(u);
  const double before = phi_MNG(u, G, table);
  const double after = phi_MNG(star, G, table);
  const auto nu = luxemburg(u, G, table);
  const auto ns = luxemburg(star, G, table);
  // Exactness is only expected in 1D; in 2D the comparison is reported.
  const bool asserted = u.grid().n() == 1;
  const bool holds = after <= before * (1.0 + 1e-12) && ns.seminorm <= nu.seminorm * (1.0 + 1e-8);
  write_field(plan.output, star);
  Outcome o;
  o.passed = !asserted || holds;
  o.report = Json{{"command", "rearrange"},
                  {"grid", field_summary(u)},
                  {"phi_MNG_before", before},
                  {"phi_MNG_after", after},
                  {"seminorm_before", nu.seminorm},
                  {"seminorm_after", ns.seminorm},
                  {"full_norm_before", nu.full_norm},
                  {"full_norm_after", ns.full_norm},
                  {"inequality_asserted", asserted},
                  {"inequality_holds", holds}};
  std::ostringstream text;
  text.precision(12);
  text << "phi_MNG " << before << " -> " << after << (holds ? " (nonincreasing)" : " (INCREASED)")
       << "\nwrote " << plan.output << "\n";
  o.summary = text.str();
  return o;
}

Outcome run_polarize(const RunPlan& plan) {
  const Field u = read_field(plan.input);
  const auto G = plan.young();
  const auto kernel = plan.kernel(u.grid().n());
  const PairTable table(u.grid(), kernel, table_options(plan));
  Outcome o;
  std::ostringstream text;
  text.precision(12);
  if (plan.half_space) {
    const HalfSpace& H = *plan.half_space;
    if (!is_grid_compatible(H, u.grid())) {
      throw UsageError("half-space " + H.describe(u.grid().h()) + " is not grid-compatible");
    }
    const Field uH = polarize(u, H);
    const double before = phi_MNG(u, G, table);
    const double after = phi_MNG(uH, G, table);
    o.passed = after <= before * (1.0 + 1e-12) + 1e-12;
    write_field(plan.output, uH);
    o.report = Json{{"command", "polarize"},
                    {"grid", field_summary(u)},
                    {"half_space", H.describe(u.grid().h())},
                    {"phi_MNG_before", before},
                    {"phi_MNG_after", after},
                    {"inequality_holds", o.passed}};
    text << H.describe(u.grid().h()) << ": phi_MNG " << before << " -> " << after << "\n";
  } else {
    const int max_iter = plan.max_iter;
    const double tol = plan.tol;
    const auto run = iterate_polarizations(u, G, table, plan.seed, tol, max_iter);
    bool monotone = true;
    double prev = run.trace.initial_phi;
    Json steps = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "step,half_space,phi_MNG,distance,changed\n";
    int k = 0;
    for (const auto& st : run.trace.steps) {
      monotone = monotone && st.phi <= prev;
      prev = st.phi;
      steps.push_back(Json{{"half_space", st.half_space.describe(u.grid().h())},
                           {"phi_MNG", st.phi},
                           {"distance", st.distance},
                           {"changed", st.changed}});
      csv << ++k << "," << st.half_space.describe(u.grid().h()) << "," << st.phi << ","
          << st.distance << "," << (st.changed ? 1 : 0) << "\n";
    }
    o.passed = run.trace.converged && monotone;
    write_field(plan.output, run.result);
    if (!plan.trace.empty()) write_text(plan.trace, csv.str());
    o.report = Json{{"command", "polarize"},
                    {"grid", field_summary(u)},
                    {"seed", plan.seed},
                    {"tol", tol},
                    {"initial_phi_MNG", run.trace.initial_phi},
                    {"initial_distance", run.trace.initial_distance},
                    {"iterations", run.trace.iterations},
                    {"converged", run.trace.converged},
                    {"trace_nonincreasing", monotone},
                    {"steps", steps}};
    text << (run.trace.converged ? "converged" : "did not converge") << " after "
         << run.trace.iterations << " steps; phi_MNG " << run.trace.initial_phi << " -> " << prev
         << (monotone ? "" : " (trace INCREASED)") << "\n";
  }
  text << "wrote " << plan.output << "\n";
  o.summary = text.str();
  return o;
}

DomainMask plan_domain(const RunPlan& plan, const Grid& grid) {
  return DomainMask::from_cells(grid, plan.domain.empty() ? default_domain(plan.grid) : plan.domain);
}

std::vector<double> plan_mu(const RunPlan& plan) {
  return plan.mu.empty() ? log_grid(1e-2, 1e2, 9) : plan.mu;
}

OptimizerSettings plan_settings(const RunPlan& plan) {
  OptimizerSettings s;
  s.max_iter = plan.max_iter;
  s.tol = plan.tol;
  s.restarts = plan.restarts;
  s.seed = plan.seed;
  return s;
}

Outcome run_eigen(const RunPlan& plan) {
  const Grid grid(plan.grid.n, plan.grid.h, plan.grid.K);
  const auto G = plan.young();
  const auto kernel = plan.kernel(grid.n());
  const auto omega = plan_domain(plan, grid);
  const PairTable table(omega, kernel, table_options(plan));
  const auto settings = plan_settings(plan);
  Outcome o;
  Json rows = Json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "mu,iteration,objective\n";
  std::ostringstream text;
  text.precision(10);
  double alpha_1 = std::numeric_limits<double>::infinity();
  double lambda_1 = std::numeric_limits<double>::infinity();
  for (double mu : plan_mu(plan)) {
    const auto r = minimize_alpha_mu(EigenProblem{omega, mu, G, kernel, settings, table_options(plan)}, table);
    const double base = r.alpha_mu / mu;
    const double lo = G.p_minus() / G.p_plus() * base;
    const double hi = G.p_plus() / G.p_minus() * base;
    const bool bracket = r.lambda_mu >= lo * (1.0 - 1e-12) && r.lambda_mu <= hi * (1.0 + 1e-12);
    bool monotone = true;
    for (std::size_t k = 1; k < r.trace.size(); ++k) monotone = monotone && r.trace[k] <= r.trace[k - 1];
    o.passed = o.passed && bracket && monotone;
    alpha_1 = std::min(alpha_1, r.alpha_mu);
    lambda_1 = std::min(lambda_1, r.lambda_mu);
    rows.push_back(Json{{"mu", mu},
                        {"alpha_mu", r.alpha_mu},
                        {"lambda_mu", r.lambda_mu},
                        {"lambda_bracket", {lo, hi}},
                        {"lambda_in_bracket", bracket},
                        {"trace_nonincreasing", monotone},
                        {"best_restart", r.best_restart},
                        {"iterations", r.iterations},
                        {"converged", r.converged}});
    for (std::size_t k = 0; k < r.trace.size(); ++k) csv << mu << "," << k << "," << r.trace[k] << "\n";
    text << "mu " << mu << "  alpha " << r.alpha_mu << "  lambda " << r.lambda_mu
         << (bracket ? "" : "  (lambda outside bracket)") << "\n";
  }
  if (!plan.trace.empty()) write_text(plan.trace, csv.str());
  o.report = Json{{"command", "eigen"},
                  {"grid", {{"n", grid.n()}, {"h", grid.h()}, {"K", grid.K()}}},
                  {"domain_cells", omega.count()},
                  {"young", young_json(G)},
                  {"kernel", kernel_json(kernel)},
                  {"seed", plan.seed},
                  {"rows", rows},
                  {"alpha_1", alpha_1},
                  {"lambda_1", lambda_1}};
  text << "alpha_1 " << alpha_1 << "  lambda_1 " << lambda_1 << " (infimum over the mu grid)\n";
  o.summary = text.str();
  return o;
}

Json scan_json(const ScanResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row{{"mu", r.mu}, {"ok", r.ok}};
    if (r.ok) {
      row["alpha_mu"] = r.alpha_mu;
      row["lambda_mu"] = r.lambda_mu;
      row["converged"] = r.converged;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(row);
  }
  return Json{{"alpha_1", s.alpha_1}, {"lambda_1", s.lambda_1}, {"rows", rows}};
}

Outcome run_faber_krahn(const RunPlan& plan) {
  const Grid grid(plan.grid.n, plan.grid.h, plan.grid.K);
  const auto G = plan.young();
  const auto kernel = plan.kernel(grid.n());
  const auto omega = plan_domain(plan, grid);
  const auto rep = faber_krahn_compare(omega, plan_mu(plan), G, kernel, plan_settings(plan),
                                       table_options(plan));
  Outcome o;
  o.passed = rep.alpha_ok && rep.lambda_ok.value_or(true);
  o.report = Json{{"command", "faber-krahn"},
                  {"grid", {{"n", grid.n()}, {"h", grid.h()}, {"K", grid.K()}}},
                  {"domain_cells", omega.count()},
                  {"young", young_json(G)},
                  {"kernel", kernel_json(kernel)},
                  {"seed", plan.seed},
                  {"omega", scan_json(rep.omega)},
                  {"ball", scan_json(rep.ball)},
                  {"h_convex", rep.h_convex},
                  {"alpha_ok", rep.alpha_ok}};
  o.report["lambda_ok"] = rep.lambda_ok ? Json(*rep.lambda_ok) : Json(nullptr);
  std::ostringstream text;
  text.precision(10);
  text << "alpha_1: domain " << rep.omega.alpha_1 << ", ball " << rep.ball.alpha_1
       << (rep.alpha_ok ? " (ok)" : " (VIOLATED)") << "\n"
       << "lambda_1: domain " << rep.omega.lambda_1 << ", ball " << rep.ball.lambda_1;
  if (rep.lambda_ok) {
    text << (*rep.lambda_ok ? " (ok)" : " (VIOLATED)") << "\n";
  } else {
    text << " (not compared: t g(t) is not convex)\n";
  }
  o.summary = text.str();
  return o;
}

Outcome run_kernels(const RunPlan& plan) {
  const auto G = plan.young();
  const auto kernel = plan.kernel(plan.grid.n);
  const auto p12 = verify_P1_P2(kernel);
  const auto p3 = check_P3(kernel, G.p_minus());
  const auto p4 = check_P4(kernel, G.p_minus());
  Outcome o;
  o.passed = p12.passed() && p3.finite() && p4.decays;
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  o.report = Json{{"command", "kernels"},
                  {"young", young_json(G)},
                  {"kernel", kernel_json(kernel)},
                  {"P1_P2", {{"samples", p12.samples.size()}, {"failures", p12.failures()}}},
                  {"P3", {{"low", opt(p3.low)}, {"high", opt(p3.high)},
                          {"low_error", p3.low_error}, {"high_error", p3.high_error}}},
                  {"P4", {{"sequence", p4.sequence}, {"final", p4.final_value},
                          {"decays", p4.decays}}}};
  if (const auto& a = kernel.abs_admissibility()) {
    o.report["abs_admissibility"] = Json{{"n_over_s", a->ratio},
                                         {"integrability_threshold", a->integrability_threshold},
                                         {"decay_threshold", a->decay_threshold}};
  }
  std::ostringstream text;
  text.precision(8);
  text << kernel.name() << " with p- = " << G.p_minus() << "\n"
       << "P1/P2: " << p12.failures() << " failures over " << p12.samples.size() << " radii\n"
       << "P3: low " << (p3.low ? std::to_string(*p3.low) : "divergent") << ", high "
       << (p3.high ? std::to_string(*p3.high) : "divergent") << "\n"
       << "P4: q(2^-40) = " << p4.final_value << (p4.decays ? " (decays)" : " (does not decay)") << "\n";
  o.summary = text.str();
  return o;
}

}  // namespace

YoungFunction RunPlan::young() const {
  if (young_family == "power") return YoungFunction::power(p);
  if (young_family == "power-sum") return YoungFunction::power_sum(p, q);
  if (young_family == "power-log") return YoungFunction::power_log(p);
  throw DomainError("unknown Young family '" + young_family + "' (power, power-sum, power-log)");
}

KernelPair RunPlan::kernel(int n) const {
  if (kernel_family == "fractional") return KernelPair::fractional(s, n);
  if (kernel_family == "slobodetskii") return KernelPair::slobodetskii(n);
  if (kernel_family == "besov-log") return KernelPair::besov_log(s, beta, n);
  if (kernel_family == "abs") return KernelPair::abs(s, n, young());
  throw DomainError("unknown kernel family '" + kernel_family +
                    "' (fractional, slobodetskii, besov-log, abs)");
}

std::string command_name(Command c) {
  for (const auto& [name, cmd] : commands()) {
    if (cmd == c) return name;
  }
  return "?";
}

ParseResult parse(const std::string& config_text, const Overrides& overrides) {
  ParseResult res;
  auto& errors = res.errors;
  std::map<std::string, std::string> kv;

  std::istringstream in(config_text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!known_keys().count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;
    }
    if (!kv.emplace(key, value).second) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  for (const auto& [key, value] : overrides) {
    if (!known_keys().count(key)) {
      errors.push_back("unknown option '" + key + "'");
      continue;
    }
    kv[key] = value;
  }

  RunPlan plan;
  auto number = [&](const char* key, auto& target) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    using T = std::decay_t<decltype(target)>;
    if (const auto v = to_number<T>(it->second)) {
      target = *v;
    } else {
      errors.push_back(std::string(key) + ": cannot parse '" + it->second + "' as a number");
    }
  };

  if (const auto it = kv.find("command"); it != kv.end()) {
    if (const auto c = commands().find(it->second); c != commands().end()) {
      plan.command = c->second;
    } else {
      errors.push_back("command: unknown command '" + it->second +
                       "' (verify, modular, rearrange, polarize, eigen, faber-krahn, kernels)");
    }
  } else {
    errors.push_back("command: no command given");
  }
  if (const auto it = kv.find("young"); it != kv.end()) plan.young_family = it->second;
  if (const auto it = kv.find("kernel"); it != kv.end()) plan.kernel_family = it->second;
  number("p", plan.p);
  number("q", plan.q);
  number("s", plan.s);
  number("beta", plan.beta);
  number("seed", plan.seed);
  number("tol", plan.tol);
  number("max_iter", plan.max_iter);
  number("restarts", plan.restarts);
  if (const auto it = kv.find("grid"); it != kv.end()) {
    const auto parts = split(it->second, ',');
    std::optional<int> n;
    std::optional<double> h;
    std::optional<int> K;
    if (parts.size() == 3) {
      n = to_number<int>(parts[0]);
      h = to_number<double>(parts[1]);
      K = to_number<int>(parts[2]);
    }
    if (n && h && K) {
      plan.grid = {*n, *h, *K};
    } else {
      errors.push_back("grid: expected 'n,h,K', got '" + it->second + "'");
    }
  }
  if (const auto it = kv.find("exterior"); it != kv.end()) {
    if (it->second == "zero") {
      plan.exterior = Exterior::kZeroExtension;
    } else if (it->second == "none") {
      plan.exterior = Exterior::kNone;
    } else {
      errors.push_back("exterior: expected 'zero' or 'none'");
    }
  }
  for (const char* key : {"input", "output", "report", "trace"}) {
    if (const auto it = kv.find(key); it != kv.end()) {
      std::string& dst = std::string(key) == "input"    ? plan.input
                         : std::string(key) == "output" ? plan.output
                         : std::string(key) == "report" ? plan.report
                                                        : plan.trace;
      dst = it->second;
    }
  }
  if (const auto it = kv.find("json"); it != kv.end()) {
    if (it->second == "true" || it->second == "1") {
      plan.json = true;
    } else if (it->second == "false" || it->second == "0") {
      plan.json = false;
    } else {
      errors.push_back("json: expected true or false");
    }
  }
  if (const auto it = kv.find("mu"); it != kv.end()) {
    for (const auto& part : split(it->second, ',')) {
      const auto v = to_number<double>(part);
      if (!v || !(*v > 0.0) || !std::isfinite(*v)) {
        errors.push_back("mu: every value must be a finite number > 0, got '" + part + "'");
        continue;
      }
      plan.mu.push_back(*v);
    }
  }
  if (const auto it = kv.find("criteria"); it != kv.end()) {
    for (const auto& part : split(it->second, ',')) {
      const auto v = to_number<int>(part);
      if (!v || *v < 1 || *v > 12) {
        errors.push_back("criteria: expected numbers 1..12, got '" + part + "'");
        continue;
      }
      plan.criteria.push_back(*v);
    }
  }
  if (const auto it = kv.find("halfspace"); it != kv.end()) {
    plan.half_space = parse_half_space(it->second);
    if (!plan.half_space) {
      errors.push_back("halfspace: expected below:AXIS:OFFSET2, above:AXIS:OFFSET2, "
                       "diagonal:upper|lower or antidiagonal:upper|lower");
    }
  }

  // Semantic checks, reusing the module constructors for their messages.
  if (!(plan.tol >= 0.0)) errors.push_back("tol: must be >= 0");
  if (plan.max_iter < 1) errors.push_back("max_iter: must be >= 1");
  if (plan.restarts < 1) errors.push_back("restarts: must be >= 1");
  bool grid_ok = true;
  try {
    (void)Grid(plan.grid.n, plan.grid.h, plan.grid.K);
  } catch (const std::exception& e) {
    errors.push_back(std::string("grid: ") + e.what());
    grid_ok = false;
  }
  bool young_ok = true;
  try {
    (void)plan.young();
  } catch (const std::exception& e) {
    errors.push_back(std::string("young: ") + e.what());
    young_ok = false;
  }
  if (young_ok && plan.grid.n >= 1) {
    try {
      (void)plan.kernel(plan.grid.n);
    } catch (const std::exception& e) {
      errors.push_back(std::string("kernel: ") + e.what());
    }
  }
  if (const auto it = kv.find("domain"); it != kv.end() && grid_ok) {
    if (const auto cells = parse_domain(it->second, plan.grid.n)) {
      plan.domain = *cells;
    } else {
      errors.push_back("domain: expected comma-separated ranges a:b (1D) or a:b/c:d (2D)");
    }
  }
  if (uses_domain(plan.command) && grid_ok) {
    try {
      const Grid g(plan.grid.n, plan.grid.h, plan.grid.K);
      (void)DomainMask::from_cells(g, plan.domain.empty() ? default_domain(plan.grid) : plan.domain);
    } catch (const std::exception& e) {
      errors.push_back(std::string("domain: ") + e.what());
    }
  }
  if (reads_field(plan.command)) {
    if (plan.input.empty()) {
      errors.push_back("input: command '" + command_name(plan.command) + "' needs an input field CSV");
    } else if (!std::filesystem::exists(plan.input)) {
      errors.push_back("input: file '" + plan.input + "' does not exist");
    }
  }
  if ((plan.command == Command::kRearrange || plan.command == Command::kPolarize) &&
      plan.output.empty()) {
    errors.push_back("output: command '" + command_name(plan.command) + "' needs an output path");
  }
  if (errors.empty()) res.plan = std::move(plan);
  return res;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    switch (plan.command) {
      case Command::kVerify: o = run_verify(plan); break;
      case Command::kModular: o = run_modular(plan); break;
      case Command::kRearrange: o = run_rearrange(plan); break;
      case Command::kPolarize: o = run_polarize(plan); break;
      case Command::kEigen: o = run_eigen(plan); break;
      case Command::kFaberKrahn: o = run_faber_krahn(plan); break;
      case Command::kKernels: o = run_kernels(plan); break;
    }
    o.report["passed"] = o.passed;
    const std::string json = o.report.dump(2) + "\n";
    const bool field_command =
        plan.command == Command::kRearrange || plan.command == Command::kPolarize;
    std::string report_path = plan.report;
    if (report_path.empty() && !field_command) report_path = plan.output;
    if (!report_path.empty()) write_text(report_path, json);
    out << (plan.json ? json : o.summary);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return o.passed ? 0 : 1;
}

}  // namespace orlicz::cli
