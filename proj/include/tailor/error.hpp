#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tailor {

enum class ErrorCode {
    DegenerateTriangle,
    SingularFrame,
    MismatchedTopology,
    EmptySource,
    EmptyIsoline,
    InvalidIndex,
    NoSymmetryDeclared,
    UnpairedPanel,
    DegenerateChord,
    SolverFailure,
    NonFiniteInput,
    InvalidFactor,
    DisconnectedRegion,
    NoNearbyBone,
    OffsetOutOfRange,
    SeamNotFound,
    NoIntersection,
    OpenLoop,
    NoBoundary,
    SelfIntersection,
    InvalidParameter,
    ParseError,
    ValidationError,
    UnsupportedVersion,
    NonTriangleFace,
    MissingGroup,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type. `entity` names
// the offending object (e.g. "panel 2", "triangle 17") when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string entity = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          entity_(std::move(entity)),
          detail_(std::move(message)) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& entity() const noexcept { return entity_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string entity_;
    std::string detail_;
};

} // namespace tailor
