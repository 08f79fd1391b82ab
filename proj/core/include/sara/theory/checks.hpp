#pragma once

#include "sara/pgm/enumerate.hpp"
#include "sara/pgm/inference.hpp"
#include "sara/pgm/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sara::theory {

/// One checked inequality lhs >= rhs (or identity |lhs - rhs| = 0 when
/// `identity` is set). Slack is lhs - rhs; comparisons are exact, the stored
/// doubles are for reporting only.
struct Inequality {
    std::string label;
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    bool holds = false;
    bool strict = false;
    bool identity = false;
};

struct VerificationReport {
    std::string claim_id;
    int instances_checked = 0;
    std::vector<Inequality> inequalities;
    bool pass = true;
    std::vector<bool> strict_flags;
    std::uint64_t seed = 0;
    double tolerance = 0;  // informational; checks themselves are exact
    bool precondition_violation = false;
    std::string note;

    nlohmann::ordered_json to_json() const;
    void merge(const VerificationReport& other);
};

/// Verifies that P(reach target | hint prefix) is nondecreasing along the
/// hint and >= the unconditioned reach probability; asserts strictness of the
/// full-hint inequality whenever P(hint in path) < 1.
VerificationReport check_reach_chain(const pgm::QueryInstance& instance,
                                const pgm::AnalysisHint& hint,
                                const pgm::ExplorationPolicy& policy);

/// Verifies that the expected reasoning error is nonincreasing along the hint
/// prefixes and that conditioning on the full hint does not increase it.
VerificationReport check_error_chain(const pgm::QueryInstance& instance,
                                  const pgm::AnalysisHint& hint,
                                  const pgm::ExplorationPolicy& policy,
                                  pgm::ErrorKind kind);

/// Verifies bias + variance = error_prob for the path, and that the error of
/// every correct path is exactly zero.
VerificationReport check_decomposition(const pgm::QueryInstance& instance,
                                       const pgm::ReasoningPath& path);

/// Splits paths by hint membership and verifies the mixed total error
/// p*e(with hint) + (1-p)*e(without hint) is affine, nonincreasing in p, has
/// matching endpoints, and that the hint-free side is no better.
VerificationReport check_mixed_error(const pgm::QueryInstance& instance,
                                 const pgm::AnalysisHint& hint,
                                 const std::vector<double>& reach_grid,
                                 const pgm::ExplorationPolicy& policy,
                                 pgm::ErrorKind kind);

/// Reach-probability and error chains on a multi-correct-path instance with a
/// hint shared by every correct path.
VerificationReport check_multipath(const pgm::QueryInstance& instance,
                                   const pgm::AnalysisHint& shared_hint,
                                   const pgm::ExplorationPolicy& policy);

}  // namespace sara::theory
