#pragma once

#include <stdexcept>
#include <string>

namespace isoops {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    DegreeMismatch,
    TooFewDirections,
    GapTooLarge,
    RankDeficient,
    Singular,
    StabilityViolation,
    BoundaryVertex,
    DegenerateProjection,
    UnpairableNeighbor,
    Io,
    Parse,
};

inline const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::TooFewDirections: return "TooFewDirections";
    case ErrorCode::GapTooLarge: return "GapTooLarge";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::BoundaryVertex: return "BoundaryVertex";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::UnpairableNeighbor: return "UnpairableNeighbor";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , m_code(code)
    {}

    ErrorCode code() const noexcept { return m_code; }

    /// Process exit status used by the command-line tool.
    int exit_status() const noexcept
    {
        switch (m_code) {
        case ErrorCode::RankDeficient:
        case ErrorCode::Singular:
        case ErrorCode::StabilityViolation:
        case ErrorCode::GapTooLarge:
        case ErrorCode::TooFewDirections:
        case ErrorCode::BoundaryVertex:
        case ErrorCode::DegenerateProjection:
        case ErrorCode::UnpairableNeighbor: return 1;
        case ErrorCode::Io:
        case ErrorCode::Parse: return 3;
        default: return 2;
        }
    }

private:
    ErrorCode m_code;
};

/// Data-dependent failure carrying the achieved rank of a linear system.
class RankDeficientError : public Error
{
public:
    RankDeficientError(int rank, int required, const std::string& message)
        : Error(ErrorCode::RankDeficient,
                message + " (rank " + std::to_string(rank) + ", need " + std::to_string(required) + ")")
        , m_rank(rank)
    {}

    int rank() const noexcept { return m_rank; }

private:
    int m_rank;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message)
{
    if (!condition) fail(code, message);
}

} // namespace isoops
