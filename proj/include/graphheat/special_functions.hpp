#pragma once

namespace graphheat {

/// Modified Bessel function of the first kind, integer order n >= 0,
/// ascending power series sum_k (x/2)^{n+2k} / (k! (n+k)!). Terms are
/// positive so the sum carries no cancellation; accumulation stops when a
/// term drops below 1e-16 of the partial sum. Log-domain start term for
/// large n keeps intermediates in range.
double bessel_i(int n, double x);

/// e^{-x} I_n(x). Same series with the exponential folded into the leading
/// term; stays finite for arguments where I_n alone would overflow.
double bessel_i_scaled(int n, double x);

}  // namespace graphheat
