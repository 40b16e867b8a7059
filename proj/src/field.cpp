#include "orlicz/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "orlicz/numerics.hpp"

namespace orlicz {

Grid::Grid(int n, double h, int K) : n_(n), h_(h), K_(K) {
  if (n != 1 && n != 2) throw DomainError("Grid: dimension must be 1 or 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("Grid: spacing h must be finite and > 0");
  if (K < 1) throw DomainError("Grid: half-extent K must be >= 1");
  const auto side = static_cast<std::size_t>(2 * K);
  size_ = n == 1 ? side : side * side;
  measure_ = std::pow(h, n);
}

bool Grid::contains(const CellIndex& c) const {
  for (int a = 0; a < n_; ++a) {
    if (c[a] < -K_ || c[a] >= K_) return false;
  }
  return n_ == 2 || c[1] == 0;
}

CellIndex Grid::index(std::size_t flat) const {
  const auto side = static_cast<std::size_t>(2 * K_);
  if (n_ == 1) return {static_cast<int>(flat) - K_, 0};
  return {static_cast<int>(flat / side) - K_, static_cast<int>(flat % side) - K_};
}

std::optional<std::size_t> Grid::flat(const CellIndex& c) const {
  if (!contains(c)) return std::nullopt;
  const auto side = static_cast<std::size_t>(2 * K_);
  const auto i = static_cast<std::size_t>(c[0] + K_);
  if (n_ == 1) return i;
  return i * side + static_cast<std::size_t>(c[1] + K_);
}

Point Grid::center(std::size_t flat) const {
  const auto c = index(flat);
  Point p{(c[0] + 0.5) * h_, 0.0};
  if (n_ == 2) p[1] = (c[1] + 0.5) * h_;
  return p;
}

double Grid::radius(std::size_t flat) const {
  const auto p = center(flat);
  return std::hypot(p[0], p[1]);
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    std::ostringstream msg;
    msg << "Field: expected " << grid_.size() << " values, got " << values_.size();
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream msg;
      msg << "Field: non-finite value at cell " << i;
      throw DomainError(msg.str());
    }
  }
}

double Field::at(const CellIndex& c) const {
  const auto f = grid_.flat(c);
  return f ? values_[*f] : 0.0;
}

DomainMask::DomainMask(Grid grid, std::vector<bool> inside)
    : grid_(grid), inside_(std::move(inside)) {
  if (inside_.size() != grid_.size()) throw DomainError("DomainMask: size does not match the grid");
  for (std::size_t i = 0; i < inside_.size(); ++i) {
    if (inside_[i]) cells_.push_back(i);
  }
}

DomainMask DomainMask::from_cells(const Grid& grid, const std::vector<CellIndex>& cells) {
  std::vector<bool> inside(grid.size(), false);
  for (const auto& c : cells) {
    const auto f = grid.flat(c);
    if (!f) throw DomainError("DomainMask: cell outside the grid");
    inside[*f] = true;
  }
  return DomainMask(grid, std::move(inside));
}

bool vanishes_outside(const Field& u, const DomainMask& omega) {
  if (!(u.grid() == omega.grid())) throw DomainError("vanishes_outside: grid mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!omega.contains(i) && u[i] != 0.0) return false;
  }
  return true;
}

bool HalfSpace::contains(const CellIndex& c) const {
  switch (kind) {
    case Kind::kAxis: {
      const int twice = 2 * c[axis] + 1;
      return upper ? twice >= offset2 : twice <= offset2;
    }
    case Kind::kDiagonal:
      return upper ? c[0] >= c[1] : c[0] <= c[1];
    case Kind::kAntiDiagonal:
      return upper ? c[0] + c[1] + 1 >= 0 : c[0] + c[1] + 1 <= 0;
  }
  return false;
}

CellIndex HalfSpace::reflect(const CellIndex& c) const {
  switch (kind) {
    case Kind::kAxis: {
      CellIndex r = c;
      r[axis] = offset2 - 1 - c[axis];
      return r;
    }
    case Kind::kDiagonal:
      return {c[1], c[0]};
    case Kind::kAntiDiagonal:
      return {-c[1] - 1, -c[0] - 1};
  }
  return c;
}

bool HalfSpace::contains_origin() const {
  if (kind != Kind::kAxis) return true;
  return upper ? offset2 <= 0 : offset2 >= 0;
}

bool HalfSpace::origin_interior() const {
  if (kind != Kind::kAxis) return false;
  return upper ? offset2 < 0 : offset2 > 0;
}

std::string HalfSpace::describe(double h) const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kAxis:
      out << "x" << axis << (upper ? " >= " : " <= ") << std::setprecision(17) << offset2 * h / 2.0;
      break;
    case Kind::kDiagonal:
      out << (upper ? "x0 >= x1" : "x0 <= x1");
      break;
    case Kind::kAntiDiagonal:
      out << (upper ? "x0 + x1 >= 0" : "x0 + x1 <= 0");
      break;
  }
  return out.str();
}

bool is_grid_compatible(const HalfSpace& H, const Grid& grid) {
  if (H.kind == HalfSpace::Kind::kAxis) {
    if (H.axis < 0 || H.axis >= grid.n()) return false;
  } else if (grid.n() != 2) {
    return false;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto c = grid.index(i);
    if (!H.contains(c) && !grid.contains(H.reflect(c))) return false;
  }
  return true;
}

std::vector<HalfSpace> compatible_half_spaces(const Grid& grid) {
  std::vector<HalfSpace> candidates;
  const int span = 2 * grid.K() - 1;
  for (int axis = 0; axis < grid.n(); ++axis) {
    for (int j = -span; j <= span; ++j) {
      candidates.push_back(HalfSpace::below(axis, j));
      candidates.push_back(HalfSpace::above(axis, j));
    }
  }
  if (grid.n() == 2) {
    for (bool up : {false, true}) {
      candidates.push_back(HalfSpace::diagonal(up));
      candidates.push_back(HalfSpace::antidiagonal(up));
    }
  }
  std::vector<HalfSpace> out;
  for (const auto& H : candidates) {
    if (!is_grid_compatible(H, grid)) continue;
    // Skip half-spaces that leave every cell where it is.
    bool moves = false;
    for (std::size_t i = 0; i < grid.size() && !moves; ++i) {
      const auto c = grid.index(i);
      moves = !H.contains(c);
    }
    if (moves) out.push_back(H);
  }
  return out;
}

Mollifier::Mollifier(int n, int radius, std::vector<double> weights)
    : n_(n), radius_(radius), weights_(std::move(weights)) {}

namespace {

std::size_t box_side(int radius) { return static_cast<std::size_t>(2 * radius + 1); }

std::size_t box_size(int n, int radius) {
  const auto side = box_side(radius);
  return n == 1 ? side : side * side;
}

CellIndex box_offset(int n, int radius, std::size_t k) {
  const auto side = box_side(radius);
  if (n == 1) return {static_cast<int>(k) - radius, 0};
  return {static_cast<int>(k / side) - radius, static_cast<int>(k % side) - radius};
}

std::size_t box_flat(int n, int radius, const CellIndex& z) {
  const auto side = box_side(radius);
  const auto i = static_cast<std::size_t>(z[0] + radius);
  if (n == 1) return i;
  return i * side + static_cast<std::size_t>(z[1] + radius);
}

// Replaces the center weight by one minus all the others.
void close_center(int n, int radius, std::vector<double>& w) {
  const std::size_t mid = box_flat(n, radius, {0, 0});
  ExactSum others;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k != mid) others.add(w[k]);
  }
  w[mid] = 1.0 - others.value();
  if (w[mid] < 0.0) throw DomainError("Mollifier: off-center weights exceed 1");
}

}  // namespace

Mollifier Mollifier::bump(int n, int radius) {
  if (n != 1 && n != 2) throw DomainError("Mollifier: dimension must be 1 or 2");
  if (radius < 0) throw DomainError("Mollifier: radius must be >= 0");
  const std::size_t size = box_size(n, radius);
  std::vector<double> w(size, 0.0);
  const double scale = radius + 1.0;
  ExactSum total;
  for (std::size_t k = 0; k < size; ++k) {
    const auto z = box_offset(n, radius, k);
    const double q = static_cast<double>(z[0] * z[0] + z[1] * z[1]) / (scale * scale);
    w[k] = q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
    total.add(w[k]);
  }
  const double norm = total.value();
  for (double& x : w) x /= norm;
  close_center(n, radius, w);
  return Mollifier(n, radius, std::move(w));
}

Mollifier Mollifier::from_weights(int n, int radius, std::vector<double> weights) {
  if (n != 1 && n != 2) throw DomainError("Mollifier: dimension must be 1 or 2");
  if (radius < 0) throw DomainError("Mollifier: radius must be >= 0");
  if (weights.size() != box_size(n, radius)) throw DomainError("Mollifier: wrong number of weights");
  ExactSum total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double x = weights[k];
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("Mollifier: weights must be >= 0");
    const auto z = box_offset(n, radius, k);
    if (weights[box_flat(n, radius, {-z[0], -z[1]})] != x) {
      throw DomainError("Mollifier: weights must satisfy rho(-z) = rho(z)");
    }
    total.add(x);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw DomainError("Mollifier: weights must sum to 1");
  close_center(n, radius, weights);
  return Mollifier(n, radius, std::move(weights));
}

double Mollifier::weight(const CellIndex& z) const {
  for (int a = 0; a < n_; ++a) {
    if (std::abs(z[a]) > radius_) return 0.0;
  }
  if (n_ == 1 && z[1] != 0) return 0.0;
  return weights_[box_flat(n_, radius_, z)];
}

Field sample_field(const Grid& grid, const std::function<double(const Point&)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid.center(i));
    if (!std::isfinite(v)) {
      const auto c = grid.index(i);
      std::ostringstream msg;
      msg << "sample_field: non-finite value at cell (" << c[0];
      if (grid.n() == 2) msg << "," << c[1];
      msg << ")";
      throw DomainError(msg.str());
    }
    values[i] = v;
  }
  return Field(grid, std::move(values));
}

Field translate(const Field& u, const CellIndex& shift) {
  const Grid& g = u.grid();
  Field out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.index(i);
    out[i] = u.at({c[0] + shift[0], g.n() == 2 ? c[1] + shift[1] : 0});
  }
  return out;
}

Field mollify(const Field& u, const Mollifier& rho) {
  const Grid& g = u.grid();
  if (rho.n() != g.n()) throw DomainError("mollify: kernel dimension does not match the grid");
  const int r = rho.radius();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (u[i] == 0.0) continue;
    const auto c = g.index(i);
    for (int a = 0; a < g.n(); ++a) {
      if (c[a] - r < -g.K() || c[a] + r >= g.K()) {
        throw DomainError("mollify: support plus kernel radius leaves the grid; enlarge K");
      }
    }
  }
  Field out(g);
  const auto& w = rho.weights();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.index(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] == 0.0) continue;
      const auto z = box_offset(g.n(), r, k);
      acc += w[k] * u.at({c[0] - z[0], c[1] - z[1]});
    }
    out[i] = acc;
  }
  return out;
}

Field truncate(const Field& u, double k) {
  if (!(k > 0.0)) throw DomainError("truncate: k must be > 0");
  const Grid& g = u.grid();
  Field out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.radius(i);
    double eta = 1.0;
    if (r >= 2.0 * k) {
      eta = 0.0;
    } else if (r > k) {
      eta = (2.0 * k - r) / k;
    }
    out[i] = eta * u[i];
  }
  return out;
}

std::vector<std::size_t> radial_order(const Grid& grid) {
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  // Squared distances in units of (h/2)^2 are exact integers.
  auto key = [&](std::size_t f) {
    const auto c = grid.index(f);
    const long a = 2L * c[0] + 1;
    const long b = grid.n() == 2 ? 2L * c[1] + 1 : 0;
    return a * a + b * b;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const long kx = key(x);
    const long ky = key(y);
    if (kx != ky) return kx < ky;
    return grid.index(x) < grid.index(y);
  });
  return order;
}

double superlevel_measure(const Field& u, double lambda) {
  std::size_t count = 0;
  for (double v : u.values()) count += v > lambda;
  return static_cast<double>(count) * u.grid().cell_measure();
}

void write_field_csv(std::ostream& out, const Field& u) {
  const Grid& g = u.grid();
  out << "n,h,K\n" << g.n() << ',' << std::setprecision(17) << g.h() << ',' << g.K() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.index(i);
    out << c[0] << ',';
    if (g.n() == 2) out << c[1] << ',';
    out << std::setprecision(17) << u[i] << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ' && ch != '\t' && ch != '\r') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    std::ostringstream msg;
    msg << "field CSV line " << line << ": cannot parse '" << s << "'";
    throw DomainError(msg.str());
  }
  return value;
}

}  // namespace

Field read_field_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (split_commas(line) != std::vector<std::string>{""}) return true;
    }
    return false;
  };
  if (!next() || split_commas(line) != std::vector<std::string>{"n", "h", "K"}) {
    throw DomainError("field CSV: first line must be the header n,h,K");
  }
  if (!next()) throw DomainError("field CSV: missing grid line");
  const auto head = split_commas(line);
  if (head.size() != 3) throw DomainError("field CSV: grid line must read n,h,K");
  const Grid grid(parse_number<int>(head[0], line_no), parse_number<double>(head[1], line_no),
                  parse_number<int>(head[2], line_no));
  Field u(grid);
  std::vector<bool> seen(grid.size(), false);
  const std::size_t width = static_cast<std::size_t>(grid.n()) + 1;
  while (next()) {
    const auto parts = split_commas(line);
    if (parts.size() != width) {
      std::ostringstream msg;
      msg << "field CSV line " << line_no << ": expected " << width << " columns";
      throw DomainError(msg.str());
    }
    CellIndex c{parse_number<int>(parts[0], line_no), 0};
    if (grid.n() == 2) c[1] = parse_number<int>(parts[1], line_no);
    const auto f = grid.flat(c);
    if (!f) {
      std::ostringstream msg;
      msg << "field CSV line " << line_no << ": cell outside the grid";
      throw DomainError(msg.str());
    }
    if (seen[*f]) {
      std::ostringstream msg;
      msg << "field CSV line " << line_no << ": duplicate cell";
      throw DomainError(msg.str());
    }
    seen[*f] = true;
    const double v = parse_number<double>(parts.back(), line_no);
    if (!std::isfinite(v)) throw DomainError("field CSV: non-finite value");
    u[*f] = v;
  }
  return u;
}

}  // namespace orlicz
