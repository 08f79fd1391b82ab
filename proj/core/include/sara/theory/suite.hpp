#pragma once

#include "sara/theory/checks.hpp"
#include "sara/theory/generator.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace sara::theory {

inline const std::vector<std::string> kAllClaims = {
    "reach",        "error-zeroone", "error-prob",
    "decomposition", "mixed-error",          "multipath"};

struct SuiteConfig {
    GeneratorConfig generator;
    int count = 500;
    std::vector<std::string> claims = kAllClaims;  // subset of kAllClaims
    double tolerance = 1e-9;
};

struct SuiteResult {
    std::vector<VerificationReport> reports;  // one per claim
    bool pass = false;
    int instances_checked = 0;
    int instances_skipped = 0;

    /// Machine-readable summary: per-claim pass flag, inequality count and
    /// minimum slack, plus seed and totals. Deterministic given the seed.
    nlohmann::ordered_json summary() const;
};

/// Runs every requested claim over `count` generated instances. Deterministic
/// given the seed; generator rejections are logged and skipped.
/// Throws std::invalid_argument when count < 1 or a claim name is unknown.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace sara::theory
