#include <benchmark/benchmark.h>

#include "sara/pgm/enumerate.hpp"
#include "sara/pgm/inference.hpp"
#include "sara/pgm/instance_io.hpp"
#include "sara/theory/generator.hpp"
#include "sara/theory/suite.hpp"

namespace {

sara::pgm::QueryInstance tree_instance(int n) {
    sara::theory::GeneratorConfig config;
    config.seed = 42;
    config.n_min = n;
    config.n_max = n;
    sara::theory::InstanceGenerator gen(config);
    return gen.next().instance;
}

void BM_enumerate_paths(benchmark::State& state) {
    auto q = tree_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto dist = sara::pgm::enumerate_paths(q, {});
        benchmark::DoNotOptimize(dist);
    }
}
BENCHMARK(BM_enumerate_paths)->Arg(6)->Arg(8);

void BM_joint_distribution(benchmark::State& state) {
    auto q = tree_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto table = sara::pgm::joint_distribution(q.pgm);
        benchmark::DoNotOptimize(table);
    }
}
BENCHMARK(BM_joint_distribution)->Arg(8)->Arg(12);

void BM_expected_error_prob(benchmark::State& state) {
    auto q = sara::pgm::canonical_instance();
    auto dist = sara::pgm::enumerate_paths(q, {});
    for (auto _ : state) {
        auto e = sara::pgm::expected_error(dist, sara::pgm::ErrorKind::Prob, q);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_expected_error_prob);

void BM_suite_reach(benchmark::State& state) {
    sara::theory::SuiteConfig config;
    config.count = static_cast<int>(state.range(0));
    config.claims = {"reach"};
    for (auto _ : state) {
        auto result = sara::theory::run_suite(config);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_suite_reach)->Arg(25)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
