#include <doctest.h>

#include "oracle.hpp"
#include "sara/pgm/enumerate.hpp"
#include "sara/pgm/inference.hpp"
#include "sara/pgm/instance_io.hpp"
#include "sara/theory/generator.hpp"

#include <cmath>

using namespace sara::pgm;

namespace {

QueryInstance chain_instance(int n, const Rational& flip) {
    QueryInstance q;
    q.pgm.n_hidden = n;
    q.pgm.anchor = 1;
    q.pgm.anchor_value = 1;
    std::vector<int> path{1};
    for (int i = 2; i <= n; ++i) {
        q.pgm.edges.push_back({i - 1, i});
        q.pgm.cpts[i] = {i - 1, flip};
        path.push_back(i);
    }
    q.target = n;
    q.target_value = 1;
    q.correct_paths = {path};
    q.validate();
    return q;
}

bool paths_match_oracle(const QueryInstance& q) {
    auto dist = enumerate_paths(q, ExplorationPolicy{});
    auto expected = oracle::walk_outcomes(q);
    std::sort(expected.begin(), expected.end(),
              [](const auto& a, const auto& b) { return a.nodes < b.nodes; });
    if (dist.entries.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (dist.entries[i].first.visited != expected[i].nodes) return false;
        if (std::abs(to_double(dist.entries[i].second) - expected[i].prob) >
            1e-12)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("walk distribution normalizes and matches brute force") {
    sara::theory::GeneratorConfig config;
    config.seed = 7;
    sara::theory::InstanceGenerator gen(config);
    for (int i = 0; i < 25; ++i) {
        auto generated = gen.next();
        auto dist = enumerate_paths(generated.instance, ExplorationPolicy{});
        CHECK(dist.total() == Rational(1));
        CHECK(paths_match_oracle(generated.instance));
    }
}

TEST_CASE("canonical instance walk probabilities") {
    auto q = canonical_instance();
    auto dist = enumerate_paths(q, ExplorationPolicy{});
    CHECK(to_double(reach_probability(dist, q.target)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    auto conditioned = condition_on_hint(dist, AnalysisHint{{2}});
    CHECK(to_double(reach_probability(conditioned, q.target)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conditioned.total() == Rational(1));
}

TEST_CASE("conditioning is idempotent and rejects zero-mass hints") {
    auto q = canonical_instance();
    auto dist = enumerate_paths(q, ExplorationPolicy{});
    auto once = condition_on_hint(dist, AnalysisHint{{2}});
    auto twice = condition_on_hint(once, AnalysisHint{{2}});
    CHECK(once.entries == twice.entries);

    // nodes 2 and 3 sit in different branches, so no walk holds both
    CHECK_THROWS_AS(condition_on_hint(dist, AnalysisHint{{2, 3}}),
                    std::domain_error);

    auto empty = condition_on_hint(dist, AnalysisHint{});
    CHECK(empty.entries == dist.entries);
}

TEST_CASE("chain rule over hint events") {
    auto q = canonical_instance();
    auto dist = enumerate_paths(q, ExplorationPolicy{});
    // P(T and A in walk) = P(T | A in walk) P(A in walk)
    Rational joint = 0;
    Rational hint_mass = 0;
    for (const auto& [path, p] : dist.entries) {
        if (path.contains(2)) hint_mass += p;
        if (path.contains(2) && path.contains(q.target)) joint += p;
    }
    auto conditioned = condition_on_hint(dist, AnalysisHint{{2}});
    CHECK(joint == reach_probability(conditioned, q.target) * hint_mass);
}

TEST_CASE("joint distribution sums to one and matches brute force") {
    auto q = canonical_instance();
    auto table = joint_distribution(q.pgm);
    CHECK(table.total() == Rational(1));

    auto expected = oracle::joint(q);
    CHECK(table.rows.size() == expected.size());
    double total = 0;
    for (auto [mask, p] : expected) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noiseless chain collapses to a point mass") {
    auto q = chain_instance(5, Rational(0));
    auto table = joint_distribution(q.pgm);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].second == Rational(1));
    for (int v : table.rows[0].first) CHECK(v == 1);
}

TEST_CASE("joint cap rejects oversized models") {
    auto q = chain_instance(24, Rational(1, 10));
    CHECK_THROWS_AS(joint_distribution(q.pgm, std::size_t{1} << 20),
                    std::domain_error);
}

TEST_CASE("canonical posterior and probability errors") {
    auto q = canonical_instance();
    CHECK(to_double(posterior_target(q, {})) ==
          doctest::Approx(0.82).epsilon(1e-12));

    CHECK(to_double(error_prob(q, ReasoningPath{{1, 3}})) ==
          doctest::Approx(0.1476).epsilon(1e-12));
    CHECK(error_prob(q, ReasoningPath{{1, 2, 4}}) == Rational(0));

    auto dist = enumerate_paths(q, ExplorationPolicy{});
    CHECK(to_double(expected_error(dist, ErrorKind::Prob, q)) ==
          doctest::Approx(0.0738).epsilon(1e-12));
    CHECK(to_double(expected_error(dist, ErrorKind::ZeroOne, q)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    auto conditioned = condition_on_hint(dist, AnalysisHint{{2}});
    CHECK(expected_error(conditioned, ErrorKind::ZeroOne, q) == Rational(0));
    CHECK(expected_error(conditioned, ErrorKind::Prob, q) == Rational(0));
}

TEST_CASE("posterior rejects zero-probability evidence") {
    auto q = chain_instance(3, Rational(0));
    CHECK_THROWS_AS(posterior_target(q, {{2, 0}}), std::domain_error);
}

TEST_CASE("posterior and error agree with brute force on random instances") {
    sara::theory::GeneratorConfig config;
    config.seed = 11;
    config.eps_min_pct = 5;
    sara::theory::InstanceGenerator gen(config);
    for (int i = 0; i < 10; ++i) {
        auto [q, hint] = gen.next();
        CHECK(to_double(posterior_target(q, {})) ==
              doctest::Approx(oracle::posterior(q, {})).epsilon(1e-12));
        for (const auto& path : q.correct_paths) {
            CHECK(to_double(error_prob(q, ReasoningPath{path})) ==
                  doctest::Approx(oracle::error_prob(q, path)).epsilon(1e-12));
        }
        auto dist = enumerate_paths(q, ExplorationPolicy{});
        CHECK(to_double(expected_error(dist, ErrorKind::Prob, q)) ==
              doctest::Approx(oracle::expected_error_prob(q, {}))
                  .epsilon(1e-10));
        CHECK(to_double(expected_error(dist, ErrorKind::ZeroOne, q)) ==
              doctest::Approx(oracle::expected_error_zero_one(q, {}))
                  .epsilon(1e-12));
    }
}

TEST_CASE("conditional independence of the target given the correct path") {
    sara::theory::GeneratorConfig config;
    config.seed = 23;
    sara::theory::InstanceGenerator gen(config);
    for (int i = 0; i < 10; ++i) {
        auto generated = gen.next();
        CHECK(sara::theory::conditional_independence_holds(generated.instance));
    }
}

TEST_CASE("decomposition terms sum to the probability error") {
    auto q = canonical_instance();
    for (const auto& path :
         {ReasoningPath{{1, 3}}, ReasoningPath{{1, 2}}, ReasoningPath{{1, 2, 4}}}) {
        auto parts = decompose_error_prob(q, path);
        CHECK(parts.bias + parts.variance == error_prob(q, path));
    }
}

TEST_CASE("model validation rejects malformed structures") {
    auto q = canonical_instance();
    q.pgm.edges.push_back({1, 9});
    CHECK_THROWS_AS(q.pgm.validate(), std::invalid_argument);

    auto q2 = canonical_instance();
    q2.correct_paths = {{2, 4}};  // does not start at the anchor
    CHECK_THROWS_AS(q2.validate(), std::invalid_argument);

    auto q3 = canonical_instance();
    q3.correct_paths = {{1, 3, 4}};  // 3-4 is not an edge
    CHECK_THROWS_AS(q3.validate(), std::invalid_argument);
}

TEST_CASE("shorter exploration budgets truncate walks") {
    auto q = chain_instance(5, Rational(1, 10));
    auto dist = enumerate_paths(q, ExplorationPolicy{3});
    REQUIRE(dist.entries.size() == 1);
    CHECK(dist.entries[0].first.visited == std::vector<int>{1, 2, 3});
}
