#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/parametrix.hpp"

namespace graphheat {

/// Two-point time-dependent function oracle F(x, y; t).
using SpaceTimeFn = std::function<double(VertexIndex, VertexIndex, double)>;

/// Kernel value together with a rigorous decomposition of its truncation
/// error. total_bound = series + spatial + quadrature.
struct KernelEstimate {
  double value = 0.0;
  int series_order = 0;          // Neumann terms kept (L)
  double series_tail_bound = 0.0;
  double spatial_tail_bound = 0.0;
  double quadrature_error = 0.0;  // 0 on the exact combinatorial path
  double correction = 0.0;        // the (H*F)(x,y;t) part of value
  double total_bound = 0.0;
};

/// Majorant of sum_{l >= from} c * norm1^{l-1} t^{k+l-1}/(k+l-1)!
/// (first term times e^{norm1 t}).
double neumann_tail_majorant(double c, double norm1, double t, int k, int from);

/// Truncation order for the Neumann series: smallest L >= 1 whose majorant
/// on the terms l >= L is <= tol, or 0 when even the full series bound is.
int neumann_tail_order(double c, double norm1, double t, int k, double tol);

/// Values of a two-point function (second argument fixed) on a uniform time
/// grid over the whole window: the discretization carrier of the
/// convolution integrals. Node 0 holds the t -> 0 limit.
class TimeGridFunction {
 public:
  TimeGridFunction(const WeightedGraph& g, double t_max, std::size_t intervals);

  const WeightedGraph& graph() const { return *g_; }
  double t_max() const noexcept { return t_max_; }
  std::size_t intervals() const noexcept { return m_; }
  std::size_t nodes() const noexcept { return m_ + 1; }
  double node_time(std::size_t j) const { return t_max_ * static_cast<double>(j) / m_; }

  double at(VertexIndex v, std::size_t node) const { return values_[node * g_->size() + v]; }
  double& at(VertexIndex v, std::size_t node) { return values_[node * g_->size() + v]; }

  /// grid_mismatch / ball_mismatch when the carriers disagree.
  void require_compatible(const TimeGridFunction& other) const;

 private:
  const WeightedGraph* g_;
  double t_max_;
  std::size_t m_;
  std::vector<double> values_;
};

/// Samples F(z, base; s_j) for all window vertices z on the grid.
TimeGridFunction sample_family(const WeightedGraph& g, const SpaceTimeFn& f, VertexIndex base,
                               double t_max, std::size_t intervals);

/// One Volterra level: (f * inner)(z, base; s_j) on the same grid, by the
/// composite trapezoid rule.
TimeGridFunction convolve_step(const SpaceTimeFn& f, const TimeGridFunction& inner);

struct ConvolveResult {
  double value = 0.0;
  double quadrature_error = 0.0;  // Richardson estimate vs half resolution
};

/// (F1 * F2)(x, y; t): time integral over [0,t] of the theta-weighted
/// spatial inner product, composite trapezoid on `intervals` panels.
ConvolveResult convolve(const WeightedGraph& g, const SpaceTimeFn& f1, const SpaceTimeFn& f2,
                        VertexIndex x, VertexIndex y, double t, std::size_t intervals);

/// fold-fold convolution (f)^{*fold}(x, y; t) via the forward level
/// recurrence on the grid.
double iterated_convolution(const WeightedGraph& g, const SpaceTimeFn& f, int fold, VertexIndex x,
                            VertexIndex y, double t, std::size_t intervals);

/// Exact combinatorial evaluation of the Dirac-parametrix Neumann series
/// through the order chosen by neumann_tail_order (or order_override).
/// No quadrature; spatial truncation exact by chain locality.
KernelEstimate heat_kernel_dirac(const WeightedGraph& g, VertexIndex x, VertexIndex y, double t,
                                 double tol, std::optional<int> order_override = {});

/// Whole row H(x, .; t) at the same cost; per-query bounds are uniform over
/// the row and reported through `info` when given.
std::vector<double> heat_kernel_dirac_row(const WeightedGraph& g, VertexIndex x, double t,
                                          double tol, KernelEstimate* info = nullptr,
                                          std::optional<int> order_override = {});

struct GeneralOptions {
  double tol = 1e-4;
  std::size_t initial_intervals = 8;
  std::size_t max_intervals = 2048;
  std::optional<int> order_override;
};

/// H + H*F for an arbitrary parametrix: Neumann series truncated at the
/// tail order, time integrals by composite trapezoid with grid doubling
/// until the Richardson estimate meets tol/2.
KernelEstimate heat_kernel_general(const WeightedGraph& g, const Parametrix& p, VertexIndex x,
                                   VertexIndex y, double t, const GeneralOptions& opts = {});

struct LeadingTerm {
  double value = 0.0;  // (-1)^r (t^r/r!) c_r(x,y)/theta(y)
  double bound = 0.0;  // computed envelope on |H - value| (a t^{r+1} factor)
  int r = 0;
};

/// Small-time leading term of H(x,y;t) for x != y at combinatorial
/// distance r >= 1.
LeadingTerm small_time_leading_term(const WeightedGraph& g, VertexIndex x, VertexIndex y,
                                    double t);

}  // namespace graphheat
