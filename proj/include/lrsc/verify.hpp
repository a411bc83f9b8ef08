#pragma once

#include <string>
#include <vector>

namespace lrsc {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Re-derives the reference values of the brute-force checks (grid search,
/// sampling falsifiers, enumeration, gradient descent, Gram-matrix rank) and
/// compares both the oracle and the library against the stored values.
std::vector<VerifyCheck> run_verification();

} // namespace lrsc
