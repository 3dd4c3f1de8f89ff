#pragma once

#include "output.hpp"

namespace vlambda::cli {

struct SelftestOptions {
    /// Corrupts one computed coefficient so the harness can prove it notices.
    bool inject_fault = false;
    /// Every check tolerance is raised to at least this value.
    double min_tolerance = 0.0;
};

/// Runs the golden-value suite. Rows carry value, expected, tolerance and pass;
/// no timing is recorded, so the output is reproducible byte for byte.
Report run_selftest(const SelftestOptions& opt, bool& all_pass);

} // namespace vlambda::cli
