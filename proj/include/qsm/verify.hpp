// verify.hpp — the randomized inequality battery: Klein, marginal-G
// monotonicity, canonical extremality, contact Lyapunov monotonicity, the
// temperature-flow theorem, and the Clausius cycle sum.
#pragma once

#include "qsm/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qsm {

struct CheckResult {
    std::string name;
    long trials = 0;
    long failures = 0;
    double worst_margin = 0.0; // min over trials; pass needs worst_margin >= -tolerance
    double tolerance = 0.0;
    bool passed = false;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    long trials = 100;
    int dim_min = 2;
    int dim_max = 4;
    bool parallel = true;
};

CheckResult check_klein(const VerifyOptions& opt);
CheckResult check_marginal_g_monotonicity(const VerifyOptions& opt);
CheckResult check_canonical_extremality(const VerifyOptions& opt);
CheckResult check_contact_lyapunov(const VerifyOptions& opt);
CheckResult check_temperature_flow(const VerifyOptions& opt);
CheckResult check_clausius_cycles(const VerifyOptions& opt);

// All six checks in a fixed order.
std::vector<CheckResult> verify_suite(const VerifyOptions& opt);

} // namespace qsm
