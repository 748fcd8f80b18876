#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace corec {

enum class errc {
    duplicate_symbol,
    empty_signature,
    size_limit_exceeded,
    unbound_atom,
    arity_mismatch,
    undeclared_name,
    signature_mismatch,
    reserved_parameter,
    missing_assignment,
    non_unary_signature,
    has_parameters,
    parameter_mismatch,
    invalid_anchor,
    no_large_arity_symbol,
    invalid_system,
    parse_error,
    incomplete_table,
};

inline std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::duplicate_symbol: return "DuplicateSymbol";
    case errc::empty_signature: return "EmptySignature";
    case errc::size_limit_exceeded: return "SizeLimitExceeded";
    case errc::unbound_atom: return "UnboundAtom";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::undeclared_name: return "UndeclaredName";
    case errc::signature_mismatch: return "SignatureMismatch";
    case errc::reserved_parameter: return "ReservedParameter";
    case errc::missing_assignment: return "MissingAssignment";
    case errc::non_unary_signature: return "NonUnarySignature";
    case errc::has_parameters: return "HasParameters";
    case errc::parameter_mismatch: return "ParameterMismatch";
    case errc::invalid_anchor: return "InvalidAnchor";
    case errc::no_large_arity_symbol: return "NoLargeAritySymbol";
    case errc::invalid_system: return "InvalidSystem";
    case errc::parse_error: return "ParseError";
    case errc::incomplete_table: return "IncompleteTable";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what)
    {}

    [[nodiscard]] errc code() const noexcept { return code_; }
    /// what() without the code prefix
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    errc code_;
    std::string detail_;
};

/// Upper bound on the size of any exhaustive enumeration.  Exceeding it is
/// reported as errc::size_limit_exceeded, never by truncating the search.
struct Budget {
    static constexpr std::uint64_t default_limit = 1'000'000;

    std::uint64_t limit = default_limit;

    void require(std::uint64_t amount, std::string_view what) const
    {
        if (amount > limit)
            throw error(errc::size_limit_exceeded,
                        std::string(what) + " needs " + std::to_string(amount) +
                            " > budget " + std::to_string(limit));
    }
};

/// Saturating a^b; returns UINT64_MAX on overflow.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) noexcept
{
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > UINT64_MAX / base)
            return UINT64_MAX;
        result *= base;
    }
    return result;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept
{
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept
{
    if (a != 0 && b > UINT64_MAX / a)
        return UINT64_MAX;
    return a * b;
}

} // namespace corec
