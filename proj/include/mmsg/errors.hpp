// Error hierarchy. Every family carries a stable process exit code so the
// CLI can map failures to distinct, documented statuses.
#pragma once

#include <stdexcept>
#include <string>

namespace mmsg {

enum class errc : int {
  internal = 1,
  invalid_config = 2,
  io_error = 3,
  parse_error = 4,
  schema_mismatch = 5,
  rank_deficient = 6,
  no_convergence = 7,
  singular = 8,
  degenerate_input = 9,
  dimension_mismatch = 10,
  asymmetric = 11,
  rank_mismatch = 12,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  errc code_;
};

#define MMSG_ERROR_CLASS(NAME, CODE)                                          \
  class NAME : public Error {                                                 \
   public:                                                                    \
    explicit NAME(const std::string& what) : Error(errc::CODE, what) {}       \
  }

MMSG_ERROR_CLASS(InvalidConfigError, invalid_config);
MMSG_ERROR_CLASS(IoErrorException, io_error);
MMSG_ERROR_CLASS(ParseErrorException, parse_error);
MMSG_ERROR_CLASS(SchemaMismatchError, schema_mismatch);
MMSG_ERROR_CLASS(RankDeficientError, rank_deficient);
MMSG_ERROR_CLASS(NoConvergenceError, no_convergence);
MMSG_ERROR_CLASS(SingularError, singular);
MMSG_ERROR_CLASS(DegenerateInputError, degenerate_input);
MMSG_ERROR_CLASS(DimensionMismatchError, dimension_mismatch);
MMSG_ERROR_CLASS(AsymmetricError, asymmetric);
MMSG_ERROR_CLASS(RankMismatchError, rank_mismatch);

#undef MMSG_ERROR_CLASS

// Vertex-matrix inversion failure inside the membership recovery step.
class SingularVertexMatrixError : public SingularError {
 public:
  explicit SingularVertexMatrixError(const std::string& what) : SingularError(what) {}
};

}  // namespace mmsg
