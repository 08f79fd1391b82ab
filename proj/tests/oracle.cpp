#include "oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

using sara::pgm::QueryInstance;

std::vector<std::vector<int>> adjacency(const QueryInstance& q) {
    int n = q.pgm.n_hidden;
    std::vector<std::vector<int>> adj(n + 1);
    for (auto [a, b] : q.pgm.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

void extend(const std::vector<std::vector<int>>& adj, std::vector<int>& walk,
            double prob, int max_len, std::vector<WeightedPath>& out) {
    if (static_cast<int>(walk.size()) >= max_len) {
        out.push_back({walk, prob});
        return;
    }
    std::vector<int> next;
    for (int v : adj[walk.back()]) {
        if (std::find(walk.begin(), walk.end(), v) == walk.end())
            next.push_back(v);
    }
    if (next.empty()) {
        out.push_back({walk, prob});
        return;
    }
    for (int v : next) {
        walk.push_back(v);
        extend(adj, walk, prob / static_cast<double>(next.size()), max_len, out);
        walk.pop_back();
    }
}

bool contains(const std::vector<int>& walk, int v) {
    return std::find(walk.begin(), walk.end(), v) != walk.end();
}

bool contains_all(const std::vector<int>& walk, const std::vector<int>& vs) {
    return std::all_of(vs.begin(), vs.end(),
                       [&](int v) { return contains(walk, v); });
}

double mass(const std::vector<std::pair<unsigned, double>>& rows,
            const std::vector<std::pair<int, int>>& evidence) {
    double total = 0;
    for (auto [mask, p] : rows) {
        bool ok = true;
        for (auto [i, v] : evidence) {
            if (((mask >> (i - 1)) & 1u) != static_cast<unsigned>(v)) {
                ok = false;
                break;
            }
        }
        if (ok) total += p;
    }
    return total;
}

}  // namespace

std::vector<WeightedPath> walk_outcomes(const QueryInstance& q, int max_len) {
    if (max_len <= 0) max_len = q.pgm.n_hidden;
    auto adj = adjacency(q);
    std::vector<int> walk{q.pgm.anchor};
    std::vector<WeightedPath> out;
    extend(adj, walk, 1.0, max_len, out);
    return out;
}

double reach(const std::vector<WeightedPath>& outcomes, int target) {
    double total = 0;
    for (const auto& w : outcomes)
        if (contains(w.nodes, target)) total += w.prob;
    return total;
}

double reach_given(const std::vector<WeightedPath>& outcomes, int target,
                   const std::vector<int>& hint) {
    double num = 0, den = 0;
    for (const auto& w : outcomes) {
        if (!contains_all(w.nodes, hint)) continue;
        den += w.prob;
        if (contains(w.nodes, target)) num += w.prob;
    }
    if (den == 0) return -1;
    return num / den;
}

std::vector<std::pair<unsigned, double>> joint(const QueryInstance& q) {
    int n = q.pgm.n_hidden;
    std::vector<std::pair<unsigned, double>> rows;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (((mask >> (q.pgm.anchor - 1)) & 1u) !=
            static_cast<unsigned>(q.pgm.anchor_value))
            continue;
        double p = 1.0;
        for (const auto& [child, cpt] : q.pgm.cpts) {
            unsigned xc = (mask >> (child - 1)) & 1u;
            unsigned xp = (mask >> (cpt.parent - 1)) & 1u;
            double flip = static_cast<double>(cpt.flip);
            p *= xc == xp ? 1.0 - flip : flip;
        }
        if (p > 0) rows.push_back({mask, p});
    }
    return rows;
}

double posterior(const QueryInstance& q,
                 const std::vector<std::pair<int, int>>& evidence) {
    auto rows = joint(q);
    auto with_target = evidence;
    with_target.push_back({q.target, q.target_value});
    double den = mass(rows, evidence);
    if (den == 0) return -1;
    return mass(rows, with_target) / den;
}

double error_prob(const QueryInstance& q, const std::vector<int>& path) {
    auto rows = joint(q);
    double total = 0;
    for (auto [mask, p] : rows) {
        std::vector<std::pair<int, int>> path_evidence;
        for (int i : path)
            path_evidence.push_back({i, static_cast<int>((mask >> (i - 1)) & 1u)});
        double p_path = posterior(q, path_evidence);
        double indicator =
            ((mask >> (q.target - 1)) & 1u) ==
                    static_cast<unsigned>(q.target_value)
                ? 1.0
                : 0.0;
        total += p * (p_path - indicator) * (p_path - indicator);
    }
    return total;
}

double expected_error_zero_one(const QueryInstance& q,
                               const std::vector<int>& hint, int max_len) {
    auto outcomes = walk_outcomes(q, max_len);
    double num = 0, den = 0;
    for (const auto& w : outcomes) {
        if (!contains_all(w.nodes, hint)) continue;
        den += w.prob;
        if (!contains(w.nodes, q.target)) num += w.prob;
    }
    return den == 0 ? -1 : num / den;
}

double expected_error_prob(const QueryInstance& q,
                           const std::vector<int>& hint, int max_len) {
    auto outcomes = walk_outcomes(q, max_len);
    double num = 0, den = 0;
    for (const auto& w : outcomes) {
        if (!contains_all(w.nodes, hint)) continue;
        den += w.prob;
        num += w.prob * error_prob(q, w.nodes);
    }
    return den == 0 ? -1 : num / den;
}

}  // namespace oracle
