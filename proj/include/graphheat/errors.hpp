#pragma once

#include <stdexcept>
#include <string>

namespace graphheat {

// Failure categories surfaced by the library. Carried on every Error so
// callers (and the CLI exit-code mapping) can dispatch without parsing
// messages.
enum class Errc {
  non_positive_theta,
  self_loop,
  duplicate_edge,
  non_finite_weight,
  unknown_vertex,
  missing_function_value,
  region_too_small,
  window_too_small,
  grid_mismatch,
  ball_mismatch,
  quadrature_not_converged,
  metric_lower_bound_missing,
  assumption_violated,
  invalid_params,
  no_closed_form,
  config_error,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace graphheat
