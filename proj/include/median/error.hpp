#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace median {

enum class Errc {
    EmptyCarrier,
    NotMedianClosed,
    DimensionMismatch,
    DuplicatePoint,
    PointNotInCarrier,
    NotConvex,
    NotDisjoint,
    NotHalfspace,
    NotCovering,
    EmptySide,
    EmptySet,
    GroundSizeTooLarge,
    AxiomViolation,
    EmbeddingNotFaithful,
    NotSurjective,
    NotMedianPreserving,
    ShapeError,
    BoundExceeded,
    TypeMismatch,
    IndexOutOfRange,
    ResourceLimit,
    NotLinked,
    ParseError,
    UnsupportedSchema,
    InternalInvariantViolation,
};

std::string_view errc_name(Errc code) noexcept;

/// Every library failure.  `witness` carries the offending objects (bit strings,
/// indices) in a form suitable for reports.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string & message, std::vector<std::string> witness = {})
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), detail_(message),
          witness_(std::move(witness))
    {
    }

    Errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string & detail() const noexcept { return detail_; }
    const std::vector<std::string> & witness() const noexcept { return witness_; }

private:
    Errc code_;
    std::string detail_;
    std::vector<std::string> witness_;
};

[[noreturn]] inline void fail(Errc code, const std::string & message, std::vector<std::string> witness = {})
{
    throw Error(code, message, std::move(witness));
}

inline void ensure(bool condition, const char * what)
{
    if (! condition)
        fail(Errc::InternalInvariantViolation, what);
}

} // namespace median
