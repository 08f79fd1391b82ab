#include "sara/pgm/enumerate.hpp"

#include <stdexcept>

namespace sara::pgm {

namespace {

void walk(const Pgm& pgm, int max_len, ReasoningPath& current,
          const Rational& prob,
          std::vector<std::pair<ReasoningPath, Rational>>& out) {
    if (static_cast<int>(current.visited.size()) >= max_len) {
        out.emplace_back(current, prob);
        return;
    }
    std::vector<Index> next;
    for (Index nb : pgm.neighbors(current.visited.back())) {
        if (!current.contains(nb)) next.push_back(nb);
    }
    if (next.empty()) {
        out.emplace_back(current, prob);
        return;
    }
    Rational branch = prob / static_cast<int>(next.size());
    for (Index nb : next) {
        current.visited.push_back(nb);
        walk(pgm, max_len, current, branch, out);
        current.visited.pop_back();
    }
}

}  // namespace

PathDistribution enumerate_paths(const QueryInstance& instance,
                                 const ExplorationPolicy& policy) {
    const Pgm& pgm = instance.pgm;
    pgm.validate();
    int max_len = policy.effective_length(pgm);
    if (max_len < 1) throw std::invalid_argument("policy: max_length < 1");

    PathDistribution dist;
    ReasoningPath start{{pgm.anchor}};
    walk(pgm, max_len, start, Rational(1), dist.entries);
    std::sort(dist.entries.begin(), dist.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return dist;
}

PathDistribution condition_on_hint(const PathDistribution& dist,
                                   const AnalysisHint& hint) {
    if (hint.empty()) return dist;
    PathDistribution out;
    out.conditioning = hint;
    Rational mass(0);
    for (const auto& [path, p] : dist.entries) {
        if (path.contains_all(hint.indices)) {
            out.entries.emplace_back(path, p);
            mass += p;
        }
    }
    if (mass == 0)
        throw std::domain_error(
            "condition_on_hint: conditioning event has zero probability");
    for (auto& [path, p] : out.entries) p /= mass;
    return out;
}

Rational reach_probability(const PathDistribution& dist, Index target) {
    Rational mass(0);
    for (const auto& [path, p] : dist.entries) {
        if (path.contains(target)) mass += p;
    }
    return mass;
}

int error_zero_one(const ReasoningPath& path, Index target) {
    return path.contains(target) ? 0 : 1;
}

}  // namespace sara::pgm
