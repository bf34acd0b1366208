#include "loewner_lab/error.hpp"

namespace loewner_lab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::pole_hit: return "pole-hit";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::parse: return "parse";
    case ErrorKind::duplicate_frequency: return "duplicate-frequency";
    case ErrorKind::conjugate_conflict: return "conjugate-conflict";
    case ErrorKind::odd_pair_count: return "odd-pair-count";
    case ErrorKind::coincident_point: return "coincident-point";
    case ErrorKind::zero_matrix: return "zero-matrix";
    case ErrorKind::singular_pencil: return "singular-pencil";
    case ErrorKind::boundary_pole: return "boundary-pole";
    case ErrorKind::loop_singularity: return "loop-singularity";
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace loewner_lab
