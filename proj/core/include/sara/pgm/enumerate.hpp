#pragma once

#include "sara/pgm/model.hpp"

namespace sara::pgm {

/// Enumerates every outcome of the uniform non-revisiting walk with its exact
/// probability. Entries are sorted by visited sequence; probabilities sum to 1.
PathDistribution enumerate_paths(const QueryInstance& instance,
                                 const ExplorationPolicy& policy);

/// Restricts to paths containing every hint index and renormalizes.
/// Throws std::domain_error if the conditioning event has zero probability.
PathDistribution condition_on_hint(const PathDistribution& dist,
                                   const AnalysisHint& hint);

/// Probability mass of paths whose visited set contains the target.
Rational reach_probability(const PathDistribution& dist, Index target);

/// 1 iff the path misses the target.
int error_zero_one(const ReasoningPath& path, Index target);

}  // namespace sara::pgm
