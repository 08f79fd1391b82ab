#include "sara/pgm/model.hpp"

#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace sara::pgm {

std::vector<Index> Pgm::neighbors(Index v) const {
    std::vector<Index> out;
    for (const auto& [a, b] : edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Pgm::has_edge(Index a, Index b) const {
    for (const auto& [u, v] : edges) {
        if ((u == a && v == b) || (u == b && v == a)) return true;
    }
    return false;
}

void Pgm::validate() const {
    if (n_hidden < 1) throw std::invalid_argument("pgm: empty graph");
    auto in_range = [&](Index v) { return v >= 1 && v <= n_hidden; };
    if (!in_range(anchor))
        throw std::invalid_argument("pgm: anchor out of range");
    if (anchor_value != 0 && anchor_value != 1)
        throw std::invalid_argument("pgm: anchor value must be binary");
    for (const auto& [a, b] : edges) {
        if (!in_range(a) || !in_range(b))
            throw std::invalid_argument("pgm: edge index out of range");
        if (a == b) throw std::invalid_argument("pgm: self-loop");
    }
    for (Index v = 1; v <= n_hidden; ++v) {
        if (v == anchor) continue;
        auto it = cpts.find(v);
        if (it == cpts.end())
            throw std::invalid_argument("pgm: missing cpt for node " +
                                        std::to_string(v));
        const auto& cpt = it->second;
        if (!in_range(cpt.parent) || cpt.parent == v)
            throw std::invalid_argument("pgm: bad cpt parent for node " +
                                        std::to_string(v));
        if (cpt.flip < 0 || cpt.flip > 1)
            throw std::invalid_argument("pgm: flip probability outside [0,1]");
    }
    if (cpts.count(anchor))
        throw std::invalid_argument("pgm: anchor must not carry a cpt");
}

void QueryInstance::validate() const {
    pgm.validate();
    if (target < 1 || target > pgm.n_hidden)
        throw std::invalid_argument("instance: target out of range");
    if (target_value != 0 && target_value != 1)
        throw std::invalid_argument("instance: target value must be binary");
    if (correct_paths.empty())
        throw std::invalid_argument("instance: no correct path");
    for (const auto& path : correct_paths) {
        if (path.empty() || path.front() != pgm.anchor)
            throw std::invalid_argument(
                "instance: correct path must start at the anchor");
        if (path.back() != target)
            throw std::invalid_argument(
                "instance: correct path must end at the target");
        std::set<Index> seen;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (!seen.insert(path[i]).second)
                throw std::invalid_argument(
                    "instance: correct path revisits a node");
            if (i > 0 && !pgm.has_edge(path[i - 1], path[i]))
                throw std::invalid_argument(
                    "instance: correct path uses a missing edge");
        }
    }
}

Rational PathDistribution::total() const {
    return std::accumulate(entries.begin(), entries.end(), Rational(0),
                           [](Rational acc, const auto& e) {
                               return acc + e.second;
                           });
}

}  // namespace sara::pgm
