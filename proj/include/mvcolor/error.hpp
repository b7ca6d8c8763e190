#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvcolor {

enum class ErrorCode {
    Parse,
    InvalidSpec,
    InvalidConfig,
    AmbiguousRelation,
    CyclicHierarchy,
    MultipleParents,
    ParentsTooClose,
    AllRejected,
    SchemaMismatch,
    UnknownEntity,
    DerivedEntity,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::AmbiguousRelation: return "AmbiguousRelation";
    case ErrorCode::CyclicHierarchy: return "CyclicHierarchy";
    case ErrorCode::MultipleParents: return "MultipleParents";
    case ErrorCode::ParentsTooClose: return "ParentsTooClose";
    case ErrorCode::AllRejected: return "AllRejected";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::DerivedEntity: return "DerivedEntity";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code. Every failure the library
/// reports goes through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    /// True for failures raised while building the view graph.
    bool is_graph_error() const noexcept
    {
        return code_ == ErrorCode::AmbiguousRelation || code_ == ErrorCode::CyclicHierarchy
            || code_ == ErrorCode::MultipleParents;
    }

private:
    ErrorCode code_;
};

} // namespace mvcolor
