#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlambda {

/// Failure categories surfaced by the library. The CLI reports these per row.
enum class ErrorCode {
    invalid_argument,
    inadmissible_parameters,
    complex_mu_nu,
    degenerate_bound,
    non_convergence,
    invalid_weight,
    io_error,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::inadmissible_parameters: return "inadmissible_parameters";
    case ErrorCode::complex_mu_nu: return "complex_mu_nu";
    case ErrorCode::degenerate_bound: return "degenerate_bound";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::invalid_weight: return "invalid_weight";
    case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace vlambda
