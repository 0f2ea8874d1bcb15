#pragma once

#include <stdexcept>
#include <string>

namespace hqcalc {

/// Base of every error raised by the library. `kind()` is the stable name
/// used in reports and CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define HQCALC_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

HQCALC_DEFINE_ERROR(ZeroDivision);
HQCALC_DEFINE_ERROR(DomainError);
HQCALC_DEFINE_ERROR(NonCommuting);
HQCALC_DEFINE_ERROR(NonSymmetric);
HQCALC_DEFINE_ERROR(SpectralPoint);
HQCALC_DEFINE_ERROR(Unsupported);
HQCALC_DEFINE_ERROR(NotSectorial);
HQCALC_DEFINE_ERROR(OutOfDomain);
HQCALC_DEFINE_ERROR(HypothesisViolation);
HQCALC_DEFINE_ERROR(NotIntrinsic);
HQCALC_DEFINE_ERROR(StepTooLarge);
HQCALC_DEFINE_ERROR(UnreachableTolerance);
HQCALC_DEFINE_ERROR(KernelSingular);
HQCALC_DEFINE_ERROR(NonFinite);
HQCALC_DEFINE_ERROR(ZeroInSector);
HQCALC_DEFINE_ERROR(RegularizerSingular);
HQCALC_DEFINE_ERROR(ProductNotDecaying);
HQCALC_DEFINE_ERROR(ConfigError);

#undef HQCALC_DEFINE_ERROR

} // namespace hqcalc
