#include "quasibasis/error.hpp"

namespace qb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::NotHermitian: return "not_hermitian";
    case ErrorKind::NotPositive: return "not_positive";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::SingularWeight: return "singular_weight";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::NotMeasureBasis: return "not_measure_basis";
    case ErrorKind::NotWignerBasis: return "not_wigner_basis";
    case ErrorKind::NotSic: return "not_sic";
    case ErrorKind::NotState: return "not_state";
    case ErrorKind::NotPovm: return "not_povm";
    case ErrorKind::BiasedReference: return "biased_reference";
    case ErrorKind::ConvergenceFailure: return "convergence_failure";
    case ErrorKind::PathDisagreement: return "path_disagreement";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace qb
