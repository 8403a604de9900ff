#pragma once

#include <vector>

namespace graphheat {

/// Heat kernel on the integer line between vertices at distance j:
/// e^{-2t} I_j(2t).
double lattice_kernel(int j, double t);

/// Number of walks of length k (k = 0..k_max) between two vertices at
/// distance r in the (q+1)-regular tree. Exact integer recurrence
/// b_{k+1}(r) = b_k(r-1) + q b_k(r+1), b_{k+1}(0) = (q+1) b_k(1),
/// b_0(r) = [r == 0], carried in 128-bit integers and returned as doubles.
std::vector<double> tree_walk_counts(int q, int r, int k_max);

struct TreeKernelValue {
  double value = 0.0;
  double tail_bound = 0.0;  // certified truncation tail of the Bessel series
  int terms = 0;            // number of correction terms summed
};

/// Heat kernel on the (q+1)-regular tree between vertices at distance r:
/// e^{-(q+1)t} [ q^{-r/2} I_r(2 sqrt(q) t)
///              - (q-1) sum_{j>=1} q^{-(r+2j)/2} I_{2j+r}(2 sqrt(q) t) ].
/// The series is truncated once the geometric majorant certifies the
/// remaining tail <= tail_tol (I_nu decreases in nu at fixed argument).
/// q == 1 reduces to lattice_kernel.
TreeKernelValue tree_kernel(int q, int r, double t, double tail_tol);

/// Independent route to the same value: e^{-(q+1)t} sum_k b_k(r) t^k / k!.
double tree_kernel_walk_series(int q, int r, double t, double tail_tol);

/// Taylor coefficients (0..k_max) of the walk-count ordinary generating
/// function, computed by power-series arithmetic; cross-checks
/// tree_walk_counts.
std::vector<double> tree_walk_generating_series(int q, int r, int k_max);

}  // namespace graphheat
