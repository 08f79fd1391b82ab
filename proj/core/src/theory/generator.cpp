#include "sara/theory/generator.hpp"

#include "sara/pgm/inference.hpp"
#include "sara/pgm/instance_io.hpp"

#include <map>
#include <set>

namespace sara::theory {

using pgm::AnalysisHint;
using pgm::Index;
using pgm::NoisyCopyCpt;
using pgm::QueryInstance;
using pgm::Rational;

Shape shape_from_string(const std::string& name) {
    if (name == "chain") return Shape::Chain;
    if (name == "tree") return Shape::Tree;
    if (name == "canonical" || name == "fig3") return Shape::Canonical;
    if (name == "diamond-multipath") return Shape::DiamondMultipath;
    throw std::invalid_argument("unknown shape '" + name + "'");
}

std::string to_string(Shape shape) {
    switch (shape) {
        case Shape::Chain: return "chain";
        case Shape::Tree: return "tree";
        case Shape::Canonical: return "canonical";
        case Shape::DiamondMultipath: return "diamond-multipath";
    }
    return "?";
}

namespace {

// Modulo draw instead of std::uniform_int_distribution: identical output on
// every platform for a given mt19937_64 state.
int pick(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

AnalysisHint subset_hint(std::mt19937_64& rng,
                         const std::vector<Index>& correct_path) {
    AnalysisHint hint;
    for (Index v : correct_path) {
        if (rng() % 2 == 0) hint.indices.push_back(v);
    }
    if (hint.indices.empty()) hint.indices.push_back(correct_path.back());
    return hint;
}

QueryInstance make_tree(std::mt19937_64& rng, const GeneratorConfig& cfg,
                        bool chain) {
    QueryInstance instance;
    int n = pick(rng, cfg.n_min, cfg.n_max);
    instance.pgm.n_hidden = n;
    instance.pgm.anchor = 1;
    instance.pgm.anchor_value = 1;

    std::vector<Index> parent(n + 1, 0);
    for (Index v = 2; v <= n; ++v) {
        parent[v] = chain ? v - 1 : pick(rng, 1, v - 1);
        instance.pgm.edges.emplace_back(parent[v], v);
        Rational flip(pick(rng, cfg.eps_min_pct, cfg.eps_max_pct), 100);
        instance.pgm.cpts[v] = NoisyCopyCpt{parent[v], flip};
    }

    std::set<Index> has_child;
    for (Index v = 2; v <= n; ++v) has_child.insert(parent[v]);
    std::vector<Index> leaves;
    for (Index v = 2; v <= n; ++v) {
        if (!has_child.count(v)) leaves.push_back(v);
    }
    Index target = leaves[pick(rng, 0, static_cast<int>(leaves.size()) - 1)];

    std::vector<Index> path;
    for (Index v = target; v != 0; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());

    instance.target = target;
    instance.target_value = 1;
    instance.correct_paths = {path};
    return instance;
}

QueryInstance make_diamond() {
    QueryInstance instance;
    instance.pgm.n_hidden = 5;
    instance.pgm.edges = {{1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}};
    instance.pgm.anchor = 1;
    instance.pgm.anchor_value = 1;
    // Noiseless copies make both correct paths exact, so the multipath
    // premise (zero error on every correct path) holds by construction.
    instance.pgm.cpts[2] = NoisyCopyCpt{1, Rational(0)};
    instance.pgm.cpts[3] = NoisyCopyCpt{1, Rational(0)};
    instance.pgm.cpts[4] = NoisyCopyCpt{2, Rational(0)};
    instance.pgm.cpts[5] = NoisyCopyCpt{4, Rational(0)};
    instance.target = 5;
    instance.target_value = 1;
    instance.correct_paths = {{1, 2, 4, 5}, {1, 3, 4, 5}};
    return instance;
}

}  // namespace

bool conditional_independence_holds(const pgm::QueryInstance& instance) {
    auto joint = pgm::joint_distribution(instance.pgm);
    const auto& correct = instance.correct_paths.front();

    auto posterior_by = [&](const std::vector<Index>& evidence_set) {
        std::map<std::vector<int>, std::pair<Rational, Rational>> groups;
        for (const auto& [config, p] : joint.rows) {
            std::vector<int> key;
            for (Index v : evidence_set) key.push_back(config[v - 1]);
            auto& [mass, hit] = groups[key];
            mass += p;
            if (config[instance.target - 1] == instance.target_value) hit += p;
        }
        return groups;
    };

    std::vector<Index> all_but_target;
    for (Index v = 1; v <= instance.pgm.n_hidden; ++v) {
        if (v != instance.target) all_but_target.push_back(v);
    }
    std::vector<Index> path_but_target;
    for (Index v : correct) {
        if (v != instance.target) path_but_target.push_back(v);
    }

    auto full = posterior_by(all_but_target);
    auto path = posterior_by(path_but_target);

    for (const auto& [config, p] : joint.rows) {
        std::vector<int> full_key, path_key;
        for (Index v : all_but_target) full_key.push_back(config[v - 1]);
        for (Index v : path_but_target) path_key.push_back(config[v - 1]);
        const auto& [fm, fh] = full.at(full_key);
        const auto& [pm, ph] = path.at(path_key);
        if (fh / fm != ph / pm) return false;
    }
    return true;
}

InstanceGenerator::InstanceGenerator(GeneratorConfig config)
    : config_(config), rng_(config.seed) {
    if (config_.n_min < 2 || config_.n_max < config_.n_min)
        throw std::invalid_argument("generator: bad n range");
    if (config_.eps_min_pct < 0 || config_.eps_max_pct > 50 ||
        config_.eps_max_pct < config_.eps_min_pct)
        throw std::invalid_argument("generator: eps range outside [0, 0.5]");
}

GeneratedCase InstanceGenerator::next() {
    GeneratedCase out;
    switch (config_.shape) {
        case Shape::Chain:
            out.instance = make_tree(rng_, config_, /*chain=*/true);
            break;
        case Shape::Tree:
            out.instance = make_tree(rng_, config_, /*chain=*/false);
            break;
        case Shape::Canonical:
            out.instance = pgm::canonical_instance();
            break;
        case Shape::DiamondMultipath:
            out.instance = make_diamond();
            break;
    }
    out.instance.validate();

    if (config_.shape == Shape::DiamondMultipath) {
        out.hint = AnalysisHint{{4}};  // the shared middle node
        for (const auto& path : out.instance.correct_paths) {
            if (pgm::error_prob(out.instance, pgm::ReasoningPath{path}) != 0)
                throw GeneratorRejection(
                    "multipath instance has a correct path with nonzero error");
        }
    } else {
        out.hint = config_.shape == Shape::Canonical
                       ? AnalysisHint{{2}}
                       : subset_hint(rng_, out.instance.correct_paths.front());
        if (!conditional_independence_holds(out.instance))
            throw GeneratorRejection(
                "tree instance violates the conditional-independence identity");
    }
    return out;
}

}  // namespace sara::theory
