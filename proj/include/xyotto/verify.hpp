// verify.hpp - Randomised invariant suites over all modules

#pragma once

#include "xyotto/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace xyotto {

using Rng = std::mt19937_64;

// Jx, Jy in [0, 10]; h2 in [0.1, 5]; h1 = h2 + [0.1, 5]; T1, T2 log-uniform in [0.05, 20];
// tau log-uniform in [1e-3, 50].
ModelParams draw_params(Rng& rng);

double draw_log_uniform(Rng& rng, double lo, double hi);

struct CheckResult {
    std::string module;
    std::string name;
    bool passed{false};
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed{1};
    int static_samples{200};    // closed-form checks
    int dynamic_samples{20};    // checks that run the propagators
    int g_samples{10000};
};

// The seven properties of g over draws x in (0, 50], y in (0, 5], r in (1, 3].
std::vector<CheckResult> g_property_checks(std::uint64_t seed, int draws);

std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts = {});

}  // namespace xyotto
