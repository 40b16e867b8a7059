#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace orlicz {

/// Integer cell coordinates; the second entry is 0 in one dimension.
using CellIndex = std::array<int, 2>;
using Point = std::array<double, 2>;

/// Uniform symmetric grid: 2K cells per axis with centers (i + 1/2) h, i = -K..K-1.
class Grid {
 public:
  Grid(int n, double h, int K);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] int K() const { return K_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] double cell_measure() const { return measure_; }

  [[nodiscard]] bool contains(const CellIndex& c) const;
  [[nodiscard]] CellIndex index(std::size_t flat) const;
  /// Row-major flat position, or nullopt outside the grid.
  [[nodiscard]] std::optional<std::size_t> flat(const CellIndex& c) const;
  [[nodiscard]] Point center(std::size_t flat) const;
  [[nodiscard]] double radius(std::size_t flat) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.h_ == b.h_ && a.K_ == b.K_;
  }

 private:
  int n_;
  double h_;
  int K_;
  std::size_t size_;
  double measure_;
};

/// Piecewise-constant function on a grid, zero outside it.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::vector<double>& values() { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Value at a cell, 0 for cells outside the grid.
  [[nodiscard]] double at(const CellIndex& c) const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

class DomainMask {
 public:
  DomainMask(Grid grid, std::vector<bool> inside);
  /// Mask of the listed cells.
  static DomainMask from_cells(const Grid& grid, const std::vector<CellIndex>& cells);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] bool contains(std::size_t flat) const { return inside_[flat]; }
  /// Flat indices of the cells in the mask, ascending.
  [[nodiscard]] const std::vector<std::size_t>& cells() const { return cells_; }
  [[nodiscard]] std::size_t count() const { return cells_.size(); }

 private:
  Grid grid_;
  std::vector<bool> inside_;
  std::vector<std::size_t> cells_;
};

/// True when u vanishes on every cell outside the mask.
bool vanishes_outside(const Field& u, const DomainMask& omega);

/// Closed half-space whose boundary is an axis hyperplane at offset2 * h / 2
/// or, in 2D, one of the diagonals x1 = x2 and x1 = -x2.
struct HalfSpace {
  enum class Kind { kAxis, kDiagonal, kAntiDiagonal };

  Kind kind = Kind::kAxis;
  int axis = 0;
  int offset2 = 0;     // boundary at offset2 * h / 2 (axis kind only)
  bool upper = false;  // axis: {x_k >= b}; diagonal: {x1 >= x2}; antidiagonal: {x1 + x2 >= 0}

  static HalfSpace below(int axis, int offset2) { return {Kind::kAxis, axis, offset2, false}; }
  static HalfSpace above(int axis, int offset2) { return {Kind::kAxis, axis, offset2, true}; }
  static HalfSpace diagonal(bool upper) { return {Kind::kDiagonal, 0, 0, upper}; }
  static HalfSpace antidiagonal(bool upper) { return {Kind::kAntiDiagonal, 0, 0, upper}; }

  [[nodiscard]] bool contains(const CellIndex& c) const;
  [[nodiscard]] CellIndex reflect(const CellIndex& c) const;
  /// 0 lies in H, i.e. its complement mirrors towards the origin.
  [[nodiscard]] bool contains_origin() const;
  /// 0 is an interior point of H.
  [[nodiscard]] bool origin_interior() const;
  [[nodiscard]] std::string describe(double h) const;

  friend bool operator==(const HalfSpace&, const HalfSpace&) = default;
};

/// Every cell outside H reflects onto a grid cell, and the half-space fits the dimension.
bool is_grid_compatible(const HalfSpace& H, const Grid& grid);
/// All grid-compatible half-spaces with a nontrivial boundary inside the grid.
std::vector<HalfSpace> compatible_half_spaces(const Grid& grid);

/// Symmetric nonnegative discrete kernel on [-radius, radius]^n.
class Mollifier {
 public:
  /// Smooth bump exp(-1 / (1 - (|z| / (radius + 1))^2)); the center weight closes the sum.
  static Mollifier bump(int n, int radius);
  /// Caller-supplied weights in row-major order over the (2 radius + 1)^n box.
  static Mollifier from_weights(int n, int radius, std::vector<double> weights);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int radius() const { return radius_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double weight(const CellIndex& z) const;

 private:
  Mollifier(int n, int radius, std::vector<double> weights);
  int n_;
  int radius_;
  std::vector<double> weights_;
};

Field sample_field(const Grid& grid, const std::function<double(const Point&)>& f);
/// (tau u)(x_i) = u(x_{i + shift}), zero-filled.
Field translate(const Field& u, const CellIndex& shift);
/// Discrete convolution; throws DomainError when supp u plus the radius leaves the grid.
Field mollify(const Field& u, const Mollifier& rho);
/// u times the radial profile equal to 1 on |x| <= k, 0 on |x| >= 2k, linear between.
Field truncate(const Field& u, double k);
/// Flat cell indices ordered by distance to the origin, ties broken by the
/// lexicographically smaller center.
std::vector<std::size_t> radial_order(const Grid& grid);

/// h^n times the number of cells with u > lambda.
double superlevel_measure(const Field& u, double lambda);

void write_field_csv(std::ostream& out, const Field& u);
Field read_field_csv(std::istream& in);

}  // namespace orlicz
