#pragma once

#include <stdexcept>
#include <string>

namespace hcsel {

// Base for all library errors. `code()` is a stable machine-readable tag;
// the CLI prints it as `error: <code>: <message>` on a single line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define HCSEL_DEFINE_ERROR(Name)                                 \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& message)                \
            : Error(#Name, message) {}                           \
    }

HCSEL_DEFINE_ERROR(InvalidArgument);
HCSEL_DEFINE_ERROR(IoError);
HCSEL_DEFINE_ERROR(IndivisibleRegion);
HCSEL_DEFINE_ERROR(EmptySelection);
HCSEL_DEFINE_ERROR(OverlappingRegions);
HCSEL_DEFINE_ERROR(OutOfBounds);
HCSEL_DEFINE_ERROR(OracleContractViolation);
HCSEL_DEFINE_ERROR(InvalidPerturbation);
HCSEL_DEFINE_ERROR(InsufficientSamples);
HCSEL_DEFINE_ERROR(DimensionMismatch);
HCSEL_DEFINE_ERROR(InvalidAblation);
HCSEL_DEFINE_ERROR(InvalidBoundParams);
HCSEL_DEFINE_ERROR(UnknownUnit);
HCSEL_DEFINE_ERROR(OracleNotDecomposable);
HCSEL_DEFINE_ERROR(DensityTooHigh);
HCSEL_DEFINE_ERROR(TileMismatch);
HCSEL_DEFINE_ERROR(NoReports);
HCSEL_DEFINE_ERROR(ConfigError);

#undef HCSEL_DEFINE_ERROR

} // namespace hcsel
