#pragma once

#include <stdexcept>
#include <string>

namespace qlv {

// Error categories map to process exit codes: parse errors exit 2, shape
// errors 3, semantic errors 4, budget exhaustion 5.
enum class ErrorCategory { parse = 2, shape = 3, semantic = 4, budget = 5 };

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory cat, std::string const &what)
        : std::runtime_error(what), cat_(cat)
    {}
    ErrorCategory category() const { return cat_; }
    int exit_code() const { return static_cast<int>(cat_); }

  private:
    ErrorCategory cat_;
};

#define QLV_DEFINE_ERROR(Name, Cat)                                            \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(std::string const &what)                                 \
            : Error(ErrorCategory::Cat, std::string(#Name ": ") + what)        \
        {}                                                                     \
    }

QLV_DEFINE_ERROR(ParseError, parse);

QLV_DEFINE_ERROR(ShapeError, shape);
QLV_DEFINE_ERROR(RangeError, shape);

QLV_DEFINE_ERROR(InvariantViolation, semantic);
QLV_DEFINE_ERROR(DegenerateInput, semantic);
QLV_DEFINE_ERROR(GramMismatch, semantic);
QLV_DEFINE_ERROR(NotPSD, semantic);
QLV_DEFINE_ERROR(NotPosDef, semantic);
QLV_DEFINE_ERROR(LabelError, semantic);
QLV_DEFINE_ERROR(KindError, semantic);
QLV_DEFINE_ERROR(NotSliced, semantic);
QLV_DEFINE_ERROR(NotASolution, semantic);
QLV_DEFINE_ERROR(NotFeasible, semantic);
QLV_DEFINE_ERROR(Inconsistent, semantic);
QLV_DEFINE_ERROR(Infeasible, semantic);
QLV_DEFINE_ERROR(IndependenceViolation, semantic);
QLV_DEFINE_ERROR(SubspaceError, semantic);
QLV_DEFINE_ERROR(EntryDomainError, semantic);
QLV_DEFINE_ERROR(NotACycle, semantic);

QLV_DEFINE_ERROR(BudgetExceeded, budget);

#undef QLV_DEFINE_ERROR

} // namespace qlv
