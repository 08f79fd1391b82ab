#pragma once

#include "sara/pgm/model.hpp"

#include <cstddef>
#include <vector>

namespace sara::pgm {

/// Full joint over all observed variables given the anchor evidence. Each row
/// is a configuration (value per index 1..N, position i-1 holds X_i) with its
/// exact probability. Rows with zero probability are kept out.
struct JointTable {
    std::vector<std::pair<std::vector<int>, Rational>> rows;

    Rational total() const;
};

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 20;

/// Throws std::domain_error when the configuration count exceeds the cap.
JointTable joint_distribution(const Pgm& pgm,
                              std::size_t cap = kDefaultJointCap);

/// Exact conditional p(X_T = x_t | x0, {X_i = v_i}_{i in S}) for one evidence
/// configuration. The anchor is always part of the evidence via x0.
/// Throws std::domain_error if the evidence configuration has zero probability.
Rational posterior_target(const QueryInstance& instance,
                          const std::vector<std::pair<Index, int>>& evidence,
                          std::size_t cap = kDefaultJointCap);

/// Expected squared gap between the path-conditioned posterior of the target
/// value and the all-variables-conditioned posterior, taken under the joint
/// given the anchor evidence. Zero whenever the path contains the target.
Rational error_prob(const QueryInstance& instance, const ReasoningPath& path,
                    std::size_t cap = kDefaultJointCap);

/// The two terms of the bias/variance split of error_prob, each computed
/// directly from its own defining expectation.
struct ErrorDecomposition {
    Rational bias;
    Rational variance;
};

ErrorDecomposition decompose_error_prob(const QueryInstance& instance,
                                        const ReasoningPath& path,
                                        std::size_t cap = kDefaultJointCap);

enum class ErrorKind { ZeroOne, Prob };

/// Path-probability-weighted mean error over the distribution.
Rational expected_error(const PathDistribution& dist, ErrorKind kind,
                        const QueryInstance& instance,
                        std::size_t cap = kDefaultJointCap);

}  // namespace sara::pgm
