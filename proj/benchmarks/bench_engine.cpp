#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "safpat/facts.hpp"
#include "safpat/recommender.hpp"

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(SAFPAT_FIXTURE_DIR) + "/" + name, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

safpat::SystemModel model(const std::string& name) { return *safpat::parse_facts(fixture(name)).model; }

// A pipeline of n hardware functions, each with an erroneous hazard, and a
// safMon budget of n: every subset of the n placements is enumerated.
safpat::SystemModel pipeline(int n) {
    std::ostringstream os;
    for (int i = 0; i < n; ++i) os << "cp(f" << i << "). hw(f" << i << "). hz(h" << i << ",f" << i << ",err,major).\n";
    for (int i = 0; i + 1 < n; ++i) os << "ch(c" << i << ",f" << i << ",f" << i + 1 << ").\n";
    os << "explore(" << n << ",safMon).\n";
    return *safpat::parse_facts(os.str()).model;
}

void BM_ParseAcc(benchmark::State& state) {
    const auto text = fixture("acc.sp");
    for (auto _ : state) benchmark::DoNotOptimize(safpat::parse_facts(text));
}
BENCHMARK(BM_ParseAcc);

void BM_ControllabilitySolution(benchmark::State& state) {
    const auto m = model("acc_solution1.sp");
    for (auto _ : state) benchmark::DoNotOptimize(safpat::compute_controllability(m));
}
BENCHMARK(BM_ControllabilitySolution);

void BM_RecommendAcc(benchmark::State& state) {
    const auto m = model("acc.sp");
    for (auto _ : state) benchmark::DoNotOptimize(safpat::recommend(m));
}
BENCHMARK(BM_RecommendAcc);

void BM_RecommendBms(benchmark::State& state) {
    const auto m = safpat::assume_controlled(model("bms.sp"), "canerr");
    for (auto _ : state) benchmark::DoNotOptimize(safpat::recommend(m));
}
BENCHMARK(BM_RecommendBms);

void BM_RecommendPipeline(benchmark::State& state) {
    const auto m = pipeline(static_cast<int>(state.range(0)));
    const safpat::RecommendOptions opts{24, static_cast<unsigned>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(safpat::recommend(m, opts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RecommendPipeline)->ArgsProduct({{4, 8, 12, 14}, {1, 4}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
