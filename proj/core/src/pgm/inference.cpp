#include "sara/pgm/inference.hpp"

#include "sara/pgm/enumerate.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace sara::pgm {

Rational JointTable::total() const {
    return std::accumulate(rows.begin(), rows.end(), Rational(0),
                           [](Rational acc, const auto& r) {
                               return acc + r.second;
                           });
}

namespace {

// Topological order over the cpt-parent forest, anchor first.
std::vector<Index> assignment_order(const Pgm& pgm) {
    std::vector<Index> order{pgm.anchor};
    std::vector<bool> placed(pgm.n_hidden + 1, false);
    placed[pgm.anchor] = true;
    bool progress = true;
    while (static_cast<int>(order.size()) < pgm.n_hidden && progress) {
        progress = false;
        for (Index v = 1; v <= pgm.n_hidden; ++v) {
            if (placed[v]) continue;
            Index parent = pgm.cpts.at(v).parent;
            if (placed[parent]) {
                order.push_back(v);
                placed[v] = true;
                progress = true;
            }
        }
    }
    if (static_cast<int>(order.size()) < pgm.n_hidden)
        throw std::invalid_argument("pgm: cpt parents form a cycle");
    return order;
}

void expand(const Pgm& pgm, const std::vector<Index>& order, std::size_t pos,
            std::vector<int>& config, const Rational& prob, JointTable& out) {
    if (prob == 0) return;
    if (pos == order.size()) {
        out.rows.emplace_back(config, prob);
        return;
    }
    Index v = order[pos];
    const auto& cpt = pgm.cpts.at(v);
    int parent_value = config[cpt.parent - 1];
    for (int value : {0, 1}) {
        Rational p = (value == parent_value) ? Rational(1) - cpt.flip
                                             : cpt.flip;
        config[v - 1] = value;
        expand(pgm, order, pos + 1, config, prob * p, out);
    }
    config[v - 1] = -1;
}

}  // namespace

JointTable joint_distribution(const Pgm& pgm, std::size_t cap) {
    pgm.validate();
    if (pgm.n_hidden > 62 ||
        (std::size_t{1} << (pgm.n_hidden - 1)) > cap)
        throw std::domain_error("joint_distribution: configuration cap exceeded");

    auto order = assignment_order(pgm);
    JointTable table;
    std::vector<int> config(pgm.n_hidden, -1);
    config[pgm.anchor - 1] = pgm.anchor_value;
    expand(pgm, order, 1, config, Rational(1), table);
    std::sort(table.rows.begin(), table.rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return table;
}

Rational posterior_target(const QueryInstance& instance,
                          const std::vector<std::pair<Index, int>>& evidence,
                          std::size_t cap) {
    instance.validate();
    auto joint = joint_distribution(instance.pgm, cap);
    Rational mass(0), hit(0);
    for (const auto& [config, p] : joint.rows) {
        bool consistent = true;
        for (const auto& [idx, value] : evidence) {
            if (idx < 1 || idx > instance.pgm.n_hidden)
                throw std::invalid_argument("posterior_target: index out of range");
            if (config[idx - 1] != value) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        mass += p;
        if (config[instance.target - 1] == instance.target_value) hit += p;
    }
    if (mass == 0)
        throw std::domain_error(
            "posterior_target: evidence configuration has zero probability");
    return hit / mass;
}

namespace {

// Rows of the joint grouped by the evidence configuration on a path's
// variables: total mass and mass where X_T = x_t.
struct Group {
    Rational mass;
    Rational target_mass;
};

std::map<std::vector<int>, Group> group_by_path(
    const QueryInstance& instance, const JointTable& joint,
    const ReasoningPath& path) {
    std::map<std::vector<int>, Group> groups;
    for (const auto& [config, p] : joint.rows) {
        std::vector<int> key;
        key.reserve(path.visited.size());
        for (Index v : path.visited) key.push_back(config[v - 1]);
        auto& g = groups[key];
        g.mass += p;
        if (config[instance.target - 1] == instance.target_value)
            g.target_mass += p;
    }
    return groups;
}

std::vector<int> path_key(const ReasoningPath& path,
                          const std::vector<int>& config) {
    std::vector<int> key;
    key.reserve(path.visited.size());
    for (Index v : path.visited) key.push_back(config[v - 1]);
    return key;
}

}  // namespace

Rational error_prob(const QueryInstance& instance, const ReasoningPath& path,
                    std::size_t cap) {
    instance.validate();
    auto joint = joint_distribution(instance.pgm, cap);
    auto groups = group_by_path(instance, joint, path);

    Rational total(0);
    for (const auto& [config, p] : joint.rows) {
        const auto& g = groups.at(path_key(path, config));
        Rational path_posterior = g.target_mass / g.mass;
        // The all-variables posterior conditions on X_T itself, so it is the
        // indicator of the target value.
        Rational indicator =
            config[instance.target - 1] == instance.target_value ? 1 : 0;
        Rational gap = path_posterior - indicator;
        total += p * gap * gap;
    }
    return total;
}

ErrorDecomposition decompose_error_prob(const QueryInstance& instance,
                                        const ReasoningPath& path,
                                        std::size_t cap) {
    instance.validate();
    auto joint = joint_distribution(instance.pgm, cap);
    auto groups = group_by_path(instance, joint, path);

    // Bias: squared gap between the path posterior and the mean of the
    // all-variables posterior over the out-of-path variables, per group.
    // Variance: within-group spread of the all-variables posterior.
    Rational bias(0), variance(0);
    for (const auto& [key, g] : groups) {
        Rational inner_mean = g.target_mass / g.mass;
        Rational path_posterior = g.target_mass / g.mass;
        Rational gap = path_posterior - inner_mean;
        bias += g.mass * gap * gap;
    }
    for (const auto& [config, p] : joint.rows) {
        const auto& g = groups.at(path_key(path, config));
        Rational inner_mean = g.target_mass / g.mass;
        Rational indicator =
            config[instance.target - 1] == instance.target_value ? 1 : 0;
        Rational gap = indicator - inner_mean;
        variance += p * gap * gap;
    }
    return {bias, variance};
}

Rational expected_error(const PathDistribution& dist, ErrorKind kind,
                        const QueryInstance& instance, std::size_t cap) {
    Rational total(0);
    for (const auto& [path, p] : dist.entries) {
        if (kind == ErrorKind::ZeroOne) {
            total += p * error_zero_one(path, instance.target);
        } else {
            total += p * error_prob(instance, path, cap);
        }
    }
    return total;
}

}  // namespace sara::pgm
