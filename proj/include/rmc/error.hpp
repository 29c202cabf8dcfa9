#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rmc
{

// Stable machine-readable error codes surfaced through the session protocol.
enum class ErrorCode
{
    Parse,
    Validation,
    Overlap,
    Bounds,
    IncompatibleVis,
    NotEditable,
    UnknownId,
    UnknownAttribute,
    UnknownCommand,
    BadPayload,
    Sequence,
    NoSession,
    NoActiveEdit,
    NonFinite,
    Diagonal,
    MissingSimilarity,
    EmptyStack,
    Io,
};

inline std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::Validation: return "E_VALIDATION";
    case ErrorCode::Overlap: return "E_OVERLAP";
    case ErrorCode::Bounds: return "E_BOUNDS";
    case ErrorCode::IncompatibleVis: return "E_INCOMPATIBLE_VIS";
    case ErrorCode::NotEditable: return "E_NOT_EDITABLE";
    case ErrorCode::UnknownId: return "E_UNKNOWN_ID";
    case ErrorCode::UnknownAttribute: return "E_UNKNOWN_ATTRIBUTE";
    case ErrorCode::UnknownCommand: return "E_UNKNOWN_COMMAND";
    case ErrorCode::BadPayload: return "E_BAD_PAYLOAD";
    case ErrorCode::Sequence: return "E_SEQ";
    case ErrorCode::NoSession: return "E_NO_SESSION";
    case ErrorCode::NoActiveEdit: return "E_NO_ACTIVE_EDIT";
    case ErrorCode::NonFinite: return "E_NON_FINITE";
    case ErrorCode::Diagonal: return "E_DIAGONAL";
    case ErrorCode::MissingSimilarity: return "E_MISSING_SIMILARITY";
    case ErrorCode::EmptyStack: return "E_EMPTY_STACK";
    case ErrorCode::Io: return "E_IO";
    }
    return "E_UNKNOWN";
}

inline std::optional<ErrorCode> parse_error_code(std::string_view s) noexcept
{
    for (int i = 0; i <= static_cast<int>(ErrorCode::Io); ++i)
        if (to_string(static_cast<ErrorCode>(i)) == s)
            return static_cast<ErrorCode>(i);
    return std::nullopt;
}

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace rmc
