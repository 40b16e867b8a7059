#include "orlicz/modular.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "orlicz/numerics.hpp"

namespace orlicz {

namespace {

constexpr int kDefaultFarCells1D = 256;
constexpr int kDefaultFarCells2D = 32;
constexpr std::size_t kChunk = 8192;

// Splits [0, count) into fixed chunks, sums each chunk exactly and merges the
// partial sums. The result is independent of the split and of thread count.
template <typename Body>
double exact_reduce(std::size_t count, const Body& body) {
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<ExactSum> partial(chunks);
  auto run = [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    body(lo, std::min(count, lo + kChunk), partial[c]);
  };
  const unsigned threads = std::thread::hardware_concurrency();
  if (threads > 1 && chunks > 4) {
    const std::size_t workers = std::min<std::size_t>(threads, chunks);
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run(c);
      }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
  }
  ExactSum total;
  for (const auto& p : partial) total.merge(p);
  return total.value();
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw RangeError(std::string(what) + ": value overflows the double range");
  }
  return v;
}

void require_same_grid(const Field& u, const Grid& g, const char* what) {
  if (!(u.grid() == g)) throw DomainError(std::string(what) + ": field grid does not match");
}

}  // namespace

PairTable::PairTable(const Grid& grid, const KernelPair& kernel, PairTableOptions options)
    : grid_(grid), options_(options) {
  active_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) active_[i] = i;
  build(kernel);
}

PairTable::PairTable(const DomainMask& active, const KernelPair& kernel, PairTableOptions options)
    : grid_(active.grid()), options_(options), active_(active.cells()) {
  if (active_.empty()) throw DomainError("PairTable: active set is empty");
  build(kernel);
}

void PairTable::build(const KernelPair& kernel) {
  const int n = grid_.n();
  if (kernel.dimension() != n) throw DomainError("PairTable: kernel dimension differs from grid");
  const double h = grid_.h();
  const double h2n = std::pow(h, 2 * n);

  std::vector<CellIndex> idx;
  idx.reserve(active_.size());
  for (std::size_t f : active_) idx.push_back(grid_.index(f));

  // Distance classes and pairs among active cells.
  long max_q = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const long d0 = idx[a][0] - idx[b][0];
      const long d1 = idx[a][1] - idx[b][1];
      max_q = std::max(max_q, d0 * d0 + d1 * d1);
    }
  }
  std::vector<int> class_of_q(static_cast<std::size_t>(max_q) + 1, -1);
  auto class_for = [&](long q) {
    int& slot = class_of_q[static_cast<std::size_t>(q)];
    if (slot < 0) {
      const double d = h * std::sqrt(static_cast<double>(q));
      const double M = kernel.M(d);
      const double N = kernel.N(d);
      if (!(M > 0.0) || !(N > 0.0) || !std::isfinite(M) || !std::isfinite(N)) {
        throw DomainError("PairTable: kernel weights must be positive and finite");
      }
      slot = static_cast<int>(classes_.size());
      classes_.push_back({q, d, 1.0 / M, h2n / N, 0});
    }
    return static_cast<std::uint32_t>(slot);
  };
  pairs_.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const long d0 = idx[a][0] - idx[b][0];
      const long d1 = idx[a][1] - idx[b][1];
      const auto cls = class_for(d0 * d0 + d1 * d1);
      ++classes_[cls].pair_count;
      pairs_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), cls});
    }
  }

  if (options_.exterior == Exterior::kNone) return;

  // Far field: explicit lattice shells up to radius A, then a radial tail.
  int A = options_.far_cells > 0 ? options_.far_cells
                                 : (n == 1 ? kDefaultFarCells1D : kDefaultFarCells2D);
  A = std::max(A, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_q)))));
  far_cells_ = A;
  const long A2 = static_cast<long>(A) * A;
  std::vector<long> shell(static_cast<std::size_t>(A2) + 1, 0);
  if (n == 1) {
    for (long a = 1; a <= A; ++a) shell[static_cast<std::size_t>(a * a)] += 2;
  } else {
    for (long a = -A; a <= A; ++a) {
      for (long b = -A; b <= A; ++b) {
        const long q = a * a + b * b;
        if (q > 0 && q <= A2) ++shell[static_cast<std::size_t>(q)];
      }
    }
  }
  long points = 1;
  for (long q = 1; q <= A2; ++q) {
    const long count = shell[static_cast<std::size_t>(q)];
    if (count == 0) continue;
    points += count;
    const double d = h * std::sqrt(static_cast<double>(q));
    far_.push_back({1.0 / kernel.M(d), static_cast<double>(count) * h2n / kernel.N(d)});
  }
  // The lattice points used so far fill a ball of radius R_eff; the rest of
  // space is integrated in y = log(r / R_eff).
  const double omega = unit_ball_volume(n);
  const double R_eff = h * std::pow(static_cast<double>(points) / omega, 1.0 / n);
  const double tail_scale = std::pow(h, n) * n * omega;
  std::vector<double> breaks{0.0, 0.5};
  for (double y = 1.0; y <= 512.0; y *= 2.0) breaks.push_back(y);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    for (const auto& node : gauss_legendre(breaks[k], breaks[k + 1])) {
      const double log_r = std::log(R_eff) + node.x;
      const double r = std::exp(log_r);
      try {
        const double inv_M = std::exp(-kernel.log_M(r));
        const double w = node.w * tail_scale * std::exp(n * log_r - kernel.log_N(r));
        if (std::isfinite(inv_M) && std::isfinite(w) && w > 0.0 && inv_M > 0.0) {
          far_.push_back({inv_M, w});
        }
      } catch (const std::exception&) {
        // Beyond the representable range the tail contributes nothing.
      }
    }
  }
}

double PairTable::far_field(const YoungFunction& G, double t) const {
  if (t == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& node : far_) acc += node.weight * G.G(t * node.inv_M);
  return acc;
}

double PairTable::far_field_derivative(const YoungFunction& G, double t) const {
  if (t == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& node : far_) acc += node.weight * node.inv_M * G.g(t * node.inv_M);
  return acc;
}

std::vector<double> PairTable::gather(const Field& u) const {
  require_same_grid(u, grid_, "PairTable");
  std::vector<double> vals(active_.size());
  for (std::size_t a = 0; a < active_.size(); ++a) vals[a] = u[active_[a]];
  if (active_.size() != grid_.size()) {
    std::vector<bool> on(grid_.size(), false);
    for (std::size_t f : active_) on[f] = true;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!on[i] && u[i] != 0.0) {
        throw DomainError("PairTable: field is nonzero outside the active cells");
      }
    }
  }
  return vals;
}

double phi_G(const Field& u, const YoungFunction& G) {
  ExactSum s;
  for (double v : u.values()) s.add(G.G(v));
  return checked(s.value() * u.grid().cell_measure(), "phi_G");
}

double sum_g_u(const Field& u, const YoungFunction& G) {
  ExactSum s;
  for (double v : u.values()) s.add(G.g(v) * v);
  return checked(s.value() * u.grid().cell_measure(), "sum_g_u");
}

double phi_MNG(const Field& u, const YoungFunction& G, const PairTable& table) {
  const auto vals = table.gather(u);
  const bool ext = table.exterior() == Exterior::kZeroExtension;
  const auto& pairs = table.pairs();
  const auto& cls = table.classes();
  const double pair_part = exact_reduce(pairs.size(), [&](std::size_t lo, std::size_t hi, ExactSum& s) {
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& p = pairs[k];
      const auto& c = cls[p.cls];
      const double ua = vals[p.a];
      const double ub = vals[p.b];
      if (ua != ub) s.add(2.0 * c.weight * G.G((ua - ub) * c.inv_M));
      if (ext) {
        if (ua != 0.0) s.add(-2.0 * c.weight * G.G(ua * c.inv_M));
        if (ub != 0.0) s.add(-2.0 * c.weight * G.G(ub * c.inv_M));
      }
    }
  });
  ExactSum total;
  total.add(pair_part);
  if (ext) {
    for (double v : vals) {
      if (v != 0.0) total.add(2.0 * table.far_field(G, v));
    }
  }
  // Rounding in the cancelling exterior terms can leave a tiny negative residue.
  return checked(std::max(0.0, total.value()), "phi_MNG");
}

double pairing(const Field& u, const Field& v, const YoungFunction& G, const PairTable& table) {
  if (!(u.grid() == v.grid())) throw DomainError("pairing: fields live on different grids");
  const auto uv = table.gather(u);
  const auto vv = table.gather(v);
  const bool ext = table.exterior() == Exterior::kZeroExtension;
  const auto& pairs = table.pairs();
  const auto& cls = table.classes();
  const double pair_part = exact_reduce(pairs.size(), [&](std::size_t lo, std::size_t hi, ExactSum& s) {
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& p = pairs[k];
      const auto& c = cls[p.cls];
      const double wm = 2.0 * c.weight * c.inv_M;
      const double du = uv[p.a] - uv[p.b];
      if (du != 0.0) s.add(wm * G.g(du * c.inv_M) * (vv[p.a] - vv[p.b]));
      if (ext) {
        if (uv[p.a] != 0.0) s.add(-wm * G.g(uv[p.a] * c.inv_M) * vv[p.a]);
        if (uv[p.b] != 0.0) s.add(-wm * G.g(uv[p.b] * c.inv_M) * vv[p.b]);
      }
    }
  });
  ExactSum total;
  total.add(pair_part);
  if (ext) {
    for (std::size_t a = 0; a < uv.size(); ++a) {
      if (uv[a] != 0.0 && vv[a] != 0.0) {
        total.add(2.0 * vv[a] * table.far_field_derivative(G, uv[a]));
      }
    }
  }
  return checked(total.value(), "pairing");
}

Field modular_gradient(const Field& u, const YoungFunction& G, const PairTable& table) {
  const auto vals = table.gather(u);
  const bool ext = table.exterior() == Exterior::kZeroExtension;
  std::vector<ExactSum> acc(vals.size());
  for (const auto& p : table.pairs()) {
    const auto& c = table.classes()[p.cls];
    const double wm = 2.0 * c.weight * c.inv_M;
    const double du = vals[p.a] - vals[p.b];
    if (du != 0.0) {
      const double t = wm * G.g(du * c.inv_M);
      acc[p.a].add(t);
      acc[p.b].add(-t);
    }
    if (ext) {
      if (vals[p.a] != 0.0) acc[p.a].add(-wm * G.g(vals[p.a] * c.inv_M));
      if (vals[p.b] != 0.0) acc[p.b].add(-wm * G.g(vals[p.b] * c.inv_M));
    }
  }
  Field out(u.grid());
  const auto& cells = table.active_cells();
  for (std::size_t a = 0; a < vals.size(); ++a) {
    if (ext && vals[a] != 0.0) acc[a].add(2.0 * table.far_field_derivative(G, vals[a]));
    out[cells[a]] = checked(acc[a].value(), "modular_gradient");
  }
  return out;
}

double luxemburg_scale(const std::function<double(double)>& modular_at) {
  constexpr double kBig = 1e300;
  auto f = [&](double lambda) {
    try {
      const double v = modular_at(lambda);
      return std::isfinite(v) ? v - 1.0 : kBig;
    } catch (const RangeError&) {
      return kBig;
    }
  };
  double lo = 1.0;
  double hi = 1.0;
  double f_lo = f(1.0);
  double f_hi = f_lo;
  if (f_lo > 0.0) {
    while (f_hi > 0.0) {
      lo = hi;
      f_lo = f_hi;
      hi *= 2.0;
      if (hi > 1e300) throw RangeError("luxemburg: modular stays above 1 for every scale");
      f_hi = f(hi);
    }
  } else {
    while (f_lo <= 0.0) {
      hi = lo;
      f_hi = f_lo;
      lo *= 0.5;
      if (lo < 1e-300) throw RangeError("luxemburg: modular stays below 1 for every scale");
      f_lo = f(lo);
    }
  }
  if (f_hi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(44), iters);
  // f decreases, so b is the end with modular <= 1.
  return f(b) <= 0.0 ? b : hi;
}

double lg_norm(const Field& u, const YoungFunction& G) {
  const auto& vals = u.values();
  if (std::all_of(vals.begin(), vals.end(), [](double v) { return v == 0.0; })) return 0.0;
  const double hn = u.grid().cell_measure();
  return luxemburg_scale([&](double lambda) {
    ExactSum s;
    for (double v : vals) s.add(G.G(v / lambda));
    return s.value() * hn;
  });
}

double seminorm(const Field& u, const YoungFunction& G, const PairTable& table) {
  const auto& vals = u.values();
  const double first = vals.empty() ? 0.0 : vals.front();
  const bool constant = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == first; });
  if (constant && (first == 0.0 || table.exterior() == Exterior::kNone)) return 0.0;
  return luxemburg_scale([&](double lambda) {
    Field scaled(u.grid());
    for (std::size_t i = 0; i < vals.size(); ++i) scaled[i] = vals[i] / lambda;
    return phi_MNG(scaled, G, table);
  });
}

LuxemburgNorms luxemburg(const Field& u, const YoungFunction& G, const PairTable& table) {
  LuxemburgNorms out;
  out.lg_norm = lg_norm(u, G);
  out.seminorm = seminorm(u, G, table);
  out.full_norm = out.lg_norm + out.seminorm;
  return out;
}

double translation_constant(const YoungFunction& G, int n) {
  return 2.0 * G.delta2_constant() / unit_ball_volume(n);
}

TranslationResult translation_ratio(const Field& u, const CellIndex& shift, const YoungFunction& G,
                                    const KernelPair& kernel, const PairTable& table,
                                    double p_minus) {
  const Grid& g = u.grid();
  const int n = g.n();
  const CellIndex s{shift[0], n == 2 ? shift[1] : 0};
  TranslationResult out;
  out.shift_length = g.h() * std::hypot(static_cast<double>(s[0]), static_cast<double>(s[1]));
  if (out.shift_length == 0.0) throw DomainError("translation_ratio: shift must be nonzero");

  // Every lattice cell x with x or x + shift inside the grid.
  ExactSum lhs;
  const int K = g.K();
  const int lo0 = -K - std::abs(s[0]);
  const int hi0 = K + std::abs(s[0]);
  const int lo1 = n == 2 ? -K - std::abs(s[1]) : 0;
  const int hi1 = n == 2 ? K + std::abs(s[1]) : 1;
  for (int i = lo0; i < hi0; ++i) {
    for (int j = lo1; j < hi1; ++j) {
      const double d = u.at({i + s[0], j + s[1]}) - u.at({i, j});
      if (d != 0.0) lhs.add(G.G(d));
    }
  }
  out.lhs = lhs.value() * g.cell_measure();

  const double r2 = 2.0 * out.shift_length;
  const double factor = std::exp(kernel.log_N(r2) + p_minus * kernel.log_M(r2) -
                                 n * std::log(out.shift_length));
  out.bound_factor = factor * phi_MNG(u, G, table);
  if (out.bound_factor == 0.0) {
    if (out.lhs != 0.0) throw DomainError("translation_ratio: zero denominator");
    out.ratio = 0.0;
  } else {
    out.ratio = out.lhs / out.bound_factor;
  }
  return out;
}

EmbeddingResult embedding_bound(const Field& u, const std::vector<Field>& grad,
                                const YoungFunction& G, const KernelPair& kernel,
                                const PairTable& table, double p_minus, double quad_tol) {
  const Grid& g = u.grid();
  if (grad.size() != static_cast<std::size_t>(g.n())) {
    throw DomainError("embedding_bound: need one gradient field per axis");
  }
  Field magnitude(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double sq = 0.0;
    for (const auto& gk : grad) {
      require_same_grid(gk, g, "embedding_bound");
      sq += gk[i] * gk[i];
    }
    magnitude[i] = std::sqrt(sq);
  }
  EmbeddingResult out;
  out.lhs = phi_MNG(u, G, table);
  out.rhs = phi_G(magnitude, G) + phi_G(u, G);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  const auto p3 = check_P3(kernel, p_minus, quad_tol);
  if (p3.finite()) {
    out.constant = g.n() * unit_ball_volume(g.n()) *
                   std::max(*p3.low, 2.0 * G.delta2_constant() * *p3.high);
  } else {
    out.constant = std::numeric_limits<double>::infinity();
  }
  return out;
}

PoincareResult poincare_check(const Field& u, const DomainMask& omega, const YoungFunction& G,
                              const PairTable& table, double C_trial) {
  if (!vanishes_outside(u, omega)) throw DomainError("poincare_check: u is nonzero outside the domain");
  if (!(C_trial >= 0.0)) throw DomainError("poincare_check: C_trial must be >= 0");
  Field scaled(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) scaled[i] = C_trial * u[i];
  PoincareResult out;
  out.modular_ok = phi_G(u, G) <= phi_MNG(scaled, G, table);
  out.norm_ok = lg_norm(u, G) <= C_trial * seminorm(u, G, table);
  return out;
}

double poincare_search(const std::vector<Field>& fields, const DomainMask& omega,
                       const YoungFunction& G, const PairTable& table, double C0, double factor,
                       int max_steps) {
  if (!(C0 > 0.0) || !(factor > 1.0)) throw DomainError("poincare_search: need C0 > 0, factor > 1");
  std::vector<double> phi(fields.size());
  std::vector<double> ratio(fields.size());
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!vanishes_outside(fields[k], omega)) {
      throw DomainError("poincare_search: field is nonzero outside the domain");
    }
    phi[k] = phi_G(fields[k], G);
    const double semi = seminorm(fields[k], G, table);
    ratio[k] = semi > 0.0 ? lg_norm(fields[k], G) / semi : 0.0;
  }
  double C = C0;
  for (int step = 0; step <= max_steps; ++step, C *= factor) {
    bool ok = true;
    for (std::size_t k = 0; k < fields.size() && ok; ++k) {
      if (ratio[k] > C) {
        ok = false;
        break;
      }
      Field scaled(fields[k].grid());
      for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = C * fields[k][i];
      ok = phi[k] <= phi_MNG(scaled, G, table);
    }
    if (ok) return C;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace orlicz
