#pragma once

#include <stdexcept>
#include <string>

namespace gaussk {

/// Base class of all library errors. The `code()` string is stable and used
/// by the CLI to map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define GAUSSK_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

GAUSSK_DEFINE_ERROR(DimensionMismatch);
GAUSSK_DEFINE_ERROR(SingularStructure);
GAUSSK_DEFINE_ERROR(IncompatiblePair);
GAUSSK_DEFINE_ERROR(SpectrumClassificationFailure);
GAUSSK_DEFINE_ERROR(NoCartanDecomposition);
GAUSSK_DEFINE_ERROR(NotPositiveDefinite);
GAUSSK_DEFINE_ERROR(DegenerateForm);
GAUSSK_DEFINE_ERROR(IllConditioned);
GAUSSK_DEFINE_ERROR(BranchViolation);
GAUSSK_DEFINE_ERROR(NotAComplexStructure);
GAUSSK_DEFINE_ERROR(FermionDisplacement);
GAUSSK_DEFINE_ERROR(NotGroupElement);
GAUSSK_DEFINE_ERROR(PureDirection);
GAUSSK_DEFINE_ERROR(SingularJ);
GAUSSK_DEFINE_ERROR(WrongStatistics);
GAUSSK_DEFINE_ERROR(SpectrumOutOfRange);
GAUSSK_DEFINE_ERROR(InvalidSubsystem);
GAUSSK_DEFINE_ERROR(UnstableHamiltonian);
GAUSSK_DEFINE_ERROR(DegenerateSpectrum);
GAUSSK_DEFINE_ERROR(BudgetExceeded);
GAUSSK_DEFINE_ERROR(TruncationTooSmall);
GAUSSK_DEFINE_ERROR(DegenerateKernel);
GAUSSK_DEFINE_ERROR(IoError);
GAUSSK_DEFINE_ERROR(ValidationError);

#undef GAUSSK_DEFINE_ERROR

}  // namespace gaussk
