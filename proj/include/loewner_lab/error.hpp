#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loewner_lab {

enum class ErrorKind {
  argument,
  pole_hit,
  singularity,
  parse,
  duplicate_frequency,
  conjugate_conflict,
  odd_pair_count,
  coincident_point,
  zero_matrix,
  singular_pencil,
  boundary_pole,
  loop_singularity,
  division_by_zero,
  grid_mismatch,
  infeasible,
  evaluation,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every module. The CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace loewner_lab
