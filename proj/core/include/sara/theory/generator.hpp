#pragma once

#include "sara/pgm/model.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sara::theory {

enum class Shape { Chain, Tree, Canonical, DiamondMultipath };

Shape shape_from_string(const std::string& name);
std::string to_string(Shape shape);

struct GeneratorConfig {
    std::uint64_t seed = 42;
    Shape shape = Shape::Tree;
    int n_min = 4;
    int n_max = 8;
    // Flip probabilities are drawn as exact percents in [eps_min_pct/100,
    // eps_max_pct/100], keeping every downstream quantity rational.
    int eps_min_pct = 0;
    int eps_max_pct = 45;
};

/// One generated case: the instance plus a hint lying on the correct path(s),
/// ordered along the path.
struct GeneratedCase {
    pgm::QueryInstance instance;
    pgm::AnalysisHint hint;
};

/// Raised when a generated instance fails its own constructive guarantee
/// (conditional-independence identity for trees, zero-error correct paths for
/// multipath instances). Callers skip and log the case.
struct GeneratorRejection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InstanceGenerator {
public:
    explicit InstanceGenerator(GeneratorConfig config);

    GeneratedCase next();

private:
    GeneratorConfig config_;
    std::mt19937_64 rng_;
};

/// Checks that conditioning on all non-target variables gives the same target
/// posterior as conditioning on the correct-path variables only, for every
/// positive-probability configuration. Exact comparison.
bool conditional_independence_holds(const pgm::QueryInstance& instance);

}  // namespace sara::theory
