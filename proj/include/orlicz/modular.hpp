#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "orlicz/field.hpp"
#include "orlicz/kernel.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// How cells outside the table's active set enter the double integral.
///
/// kZeroExtension treats the field as zero on the whole lattice hZ^n: pairs
/// with one cell outside the active set are summed through a radial far-field
/// term. This is the discretization of the integral over R^n x R^n.
/// kNone sums over pairs of active cells only.
enum class Exterior { kZeroExtension, kNone };

struct PairTableOptions {
  Exterior exterior = Exterior::kZeroExtension;
  /// Radius (in cells) of the explicit lattice sum in the far-field term;
  /// 0 picks a default. Always raised to at least the active-set diameter.
  int far_cells = 0;
};

/// Cell pairs of a grid (or of a subset of it) grouped by distance class.
class PairTable {
 public:
  struct DistanceClass {
    long q;           // squared distance in cell units
    double distance;  // h sqrt(q)
    double inv_M;     // 1 / M(distance)
    double weight;    // h^{2n} / N(distance)
    std::size_t pair_count;
  };
  struct Pair {
    std::uint32_t a;  // positions into active_cells()
    std::uint32_t b;
    std::uint32_t cls;
  };
  struct FarNode {
    double inv_M;
    double weight;
  };

  PairTable(const Grid& grid, const KernelPair& kernel, PairTableOptions options = {});
  PairTable(const DomainMask& active, const KernelPair& kernel, PairTableOptions options = {});

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] Exterior exterior() const { return options_.exterior; }
  [[nodiscard]] const std::vector<std::size_t>& active_cells() const { return active_; }
  [[nodiscard]] const std::vector<DistanceClass>& classes() const { return classes_; }
  [[nodiscard]] const std::vector<Pair>& pairs() const { return pairs_; }
  [[nodiscard]] const std::vector<FarNode>& far_nodes() const { return far_; }
  [[nodiscard]] int far_cells() const { return far_cells_; }

  /// Sum over all lattice offsets z != 0 of G(t / M(|z|)) h^{2n} / N(|z|).
  [[nodiscard]] double far_field(const YoungFunction& G, double t) const;
  /// d/dt of far_field.
  [[nodiscard]] double far_field_derivative(const YoungFunction& G, double t) const;

  /// Active-cell values of u; throws if u is nonzero on an inactive cell.
  [[nodiscard]] std::vector<double> gather(const Field& u) const;

 private:
  void build(const KernelPair& kernel);

  Grid grid_;
  PairTableOptions options_;
  std::vector<std::size_t> active_;
  std::vector<DistanceClass> classes_;
  std::vector<Pair> pairs_;
  std::vector<FarNode> far_;
  int far_cells_ = 0;
};

/// Sum of G(u_i) h^n.
double phi_G(const Field& u, const YoungFunction& G);
/// Sum of g(u_i) u_i h^n.
double sum_g_u(const Field& u, const YoungFunction& G);
double phi_MNG(const Field& u, const YoungFunction& G, const PairTable& table);
/// Sum over ordered pairs of g(D_M u) D_M v dmu_N.
double pairing(const Field& u, const Field& v, const YoungFunction& G, const PairTable& table);
/// Partial derivatives of phi_MNG with respect to the cell values.
Field modular_gradient(const Field& u, const YoungFunction& G, const PairTable& table);

/// inf { lambda > 0 : modular(lambda) <= 1 } for a modular given as a function of
/// the scale lambda (i.e. lambda -> Phi(u / lambda)), strictly decreasing.
double luxemburg_scale(const std::function<double(double)>& modular_at);

struct LuxemburgNorms {
  double lg_norm = 0.0;
  double seminorm = 0.0;
  double full_norm = 0.0;
};

double lg_norm(const Field& u, const YoungFunction& G);
double seminorm(const Field& u, const YoungFunction& G, const PairTable& table);
LuxemburgNorms luxemburg(const Field& u, const YoungFunction& G, const PairTable& table);

struct TranslationResult {
  double lhs = 0.0;           // Phi_G(tau_h u - u)
  double bound_factor = 0.0;  // N(2|h|) M(2|h|)^{p-} / |h|^n * Phi_MNG(u)
  double ratio = 0.0;         // lhs / bound_factor
  double shift_length = 0.0;  // |h|
};

/// The translation estimate for a shift of whole cells; the field is taken as
/// zero outside the grid, so nothing is lost when the shift leaves it.
TranslationResult translation_ratio(const Field& u, const CellIndex& shift, const YoungFunction& G,
                                    const KernelPair& kernel, const PairTable& table,
                                    double p_minus);
/// 2 C / omega_n with C the Delta_2 constant of G.
double translation_constant(const YoungFunction& G, int n);

struct EmbeddingResult {
  double lhs = 0.0;       // Phi_MNG(u)
  double rhs = 0.0;       // Phi_G(|grad u|) + Phi_G(u)
  double ratio = 0.0;     // lhs / rhs, 0 when both vanish
  double constant = 0.0;  // n omega_n max(I_low, 2 C I_high)
};

/// grad holds one field per axis with samples of the exact gradient.
EmbeddingResult embedding_bound(const Field& u, const std::vector<Field>& grad,
                                const YoungFunction& G, const KernelPair& kernel,
                                const PairTable& table, double p_minus, double quad_tol = 1e-8);

struct PoincareResult {
  bool modular_ok = false;  // Phi_G(u) <= Phi_MNG(C u)
  bool norm_ok = false;     // ||u||_G <= C [u]
};

PoincareResult poincare_check(const Field& u, const DomainMask& omega, const YoungFunction& G,
                              const PairTable& table, double C_trial);

/// Smallest C on the geometric ladder C0 * factor^k passing poincare_check for every field.
double poincare_search(const std::vector<Field>& fields, const DomainMask& omega,
                       const YoungFunction& G, const PairTable& table, double C0 = 1e-3,
                       double factor = 1.1, int max_steps = 400);

}  // namespace orlicz
