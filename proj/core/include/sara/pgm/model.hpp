#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace sara::pgm {

/// Exact rational probability. All pgm computations stay in this type;
/// convert to double only at the reporting boundary.
using Rational = boost::multiprecision::cpp_rational;

using Index = int;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// Noisy-copy conditional table for a binary observed variable: copies the
/// tree-parent's value with probability 1-flip, flips it with probability flip.
struct NoisyCopyCpt {
    Index parent = 0;
    Rational flip;  // in [0, 1/2]
};

/// Graphical model of pre-training data: hidden concept indices 1..n_hidden,
/// one binary observed variable per index, exploration edges between indices,
/// and a fixed observed value at the anchor index.
struct Pgm {
    int n_hidden = 0;
    std::vector<std::pair<Index, Index>> edges;  // unordered pairs
    Index anchor = 1;
    int anchor_value = 1;
    std::map<Index, NoisyCopyCpt> cpts;  // every non-anchor index

    std::vector<Index> neighbors(Index v) const;
    bool has_edge(Index a, Index b) const;

    /// Throws std::invalid_argument on any structural violation.
    void validate() const;
};

/// A query against the model: which index is the target, which observed value
/// counts as correct, and the correct exploration path(s).
struct QueryInstance {
    Pgm pgm;
    Index target = 0;
    int target_value = 1;
    std::vector<std::vector<Index>> correct_paths;

    void validate() const;
    bool single_path() const { return correct_paths.size() == 1; }
};

/// Ordered walk over hidden indices starting at the anchor. Membership
/// predicates use set semantics over the visited indices.
struct ReasoningPath {
    std::vector<Index> visited;

    bool contains(Index v) const {
        return std::find(visited.begin(), visited.end(), v) != visited.end();
    }
    bool contains_all(const std::vector<Index>& ids) const {
        return std::all_of(ids.begin(), ids.end(),
                           [&](Index v) { return contains(v); });
    }
    auto operator<=>(const ReasoningPath&) const = default;
};

/// Uniform non-revisiting walk: at each step pick uniformly among unvisited
/// neighbors, halt at a dead end or once max_length indices are visited.
/// Depends only on graph structure, never on observed values.
struct ExplorationPolicy {
    int max_length = 0;  // 0 means "number of hidden indices"

    int effective_length(const Pgm& pgm) const {
        return max_length > 0 ? max_length : pgm.n_hidden;
    }
};

/// Indices surfaced by the structure-oriented analysis, in hint order.
struct AnalysisHint {
    std::vector<Index> indices;

    bool empty() const { return indices.empty(); }
    AnalysisHint prefix(std::size_t k) const {
        return AnalysisHint{{indices.begin(),
                             indices.begin() + std::min(k, indices.size())}};
    }
};

/// Exhaustive walk distribution, optionally conditioned on a hint.
struct PathDistribution {
    std::vector<std::pair<ReasoningPath, Rational>> entries;
    AnalysisHint conditioning;

    Rational total() const;
};

}  // namespace sara::pgm
