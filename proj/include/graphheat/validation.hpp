#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphheat/engine.hpp"
#include "graphheat/graph.hpp"

namespace graphheat {

/// Spectral heat kernel on a finite window: dense eigendecomposition of the
/// theta-symmetrized Laplacian. Independent of the series engine; the
/// reference oracle for it.
class MatexpOracle {
 public:
  explicit MatexpOracle(const WeightedGraph& g);  // window_too_small beyond ~4000 vertices

  double value(VertexIndex x, VertexIndex y, double t) const;
  SpaceTimeFn as_fn() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

double matexp_oracle(const WeightedGraph& g, VertexIndex x, VertexIndex y, double t);

/// One oracle-vs-engine comparison; pass holds exactly when
/// |engine - oracle| <= engine_bound + oracle_tolerance.
struct OracleResult {
  VertexIndex x = 0, y = 0;
  double t = 0.0;
  double oracle_value = 0.0;
  double engine_value = 0.0;
  double engine_bound = 0.0;
  double oracle_tolerance = 0.0;
  bool pass = false;
};

OracleResult compare_with_oracle(const WeightedGraph& g, const MatexpOracle& oracle,
                                 VertexIndex x, VertexIndex y, double t,
                                 double series_tol = 1e-12, double oracle_tolerance = 1e-10);

struct CtrwResult {
  std::vector<double> frequency;  // vertex-occupancy frequencies at time t
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Continuous-time walk with holding rate mu(x)/theta(x) and jump law
/// w_{xy}/mu(x); E[frequency at y] = H(x,y;t) theta(y). Deterministic in
/// the seed.
CtrwResult ctrw_simulate(const WeightedGraph& g, VertexIndex x, double t, std::size_t n_samples,
                         std::uint64_t seed);

/// |Delta_x kernel(.,y;t) + (kernel(t+h)-kernel(t-h))/(2h)|: the
/// heat-equation residual under a centered time difference.
double residual_check(const WeightedGraph& g, const SpaceTimeFn& kernel, VertexIndex x,
                      VertexIndex y, double t, double h);

struct CheckResult {
  std::string name;
  std::size_t queries = 0;
  double worst_margin = 0.0;  // signed: <= 0 passes
  double tolerance = 0.0;
  bool pass = true;
  bool statistical = false;
  std::optional<std::uint64_t> seed;
};

struct SuiteConfig {
  std::vector<std::string> checks;  // empty = full deterministic suite + ctrw
  std::vector<double> times{0.1, 0.5, 1.0};
  double tolerance = 1e-9;
  double series_tol = 1e-12;
  std::optional<int> series_order_override;  // forced-failure path
  std::size_t max_pairs = 12;
  std::size_t ctrw_samples = 200000;
  std::uint64_t seed = 1;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool deterministic_pass = true;
  std::string to_json() const;
};

/// Known check names: mass, symmetry, positivity, semigroup, heat_equation,
/// small_time, matexp, parametrix_independence, ctrw (statistical,
/// non-gating).
SuiteReport suite_run(const WeightedGraph& g, const SuiteConfig& config);

}  // namespace graphheat
