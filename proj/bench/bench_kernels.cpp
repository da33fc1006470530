// Serial reference vs OpenMP kernels at the 160 x 67 experiment scale.

#include <benchmark/benchmark.h>

#include <numeric>

#include "rmt/kernels.hpp"
#include "rmt/scenarios.hpp"
#include "rmt/teacher.hpp"

namespace {

using namespace rmt;

const TaskSpec& experiment_spec() {
  static const TaskSpec spec = [] {
    ScenarioConfig c;
    c.n_examples = 160;
    c.n_hypotheses = 67;
    c.seed = 7;
    return generate(c);
  }();
  return spec;
}

std::vector<std::size_t> all_rows(const TaskSpec& spec) {
  std::vector<std::size_t> rows(spec.num_examples());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

template <auto Build>
void BM_BuildTable(benchmark::State& state) {
  const auto& spec = experiment_spec();
  const auto rows = all_rows(spec);
  for (auto _ : state) benchmark::DoNotOptimize(Build(spec, rows));
}

template <auto Scan>
void BM_GainScan(benchmark::State& state) {
  const auto& spec = experiment_spec();
  const auto table = kernels::serial::build_mismatch_table(spec, all_rows(spec));
  std::vector<double> w(spec.num_hypotheses(), 1.0 / static_cast<double>(spec.num_hypotheses()));
  const kernels::ResidualModel model(w, spec.rate, table.rows);
  std::vector<std::uint32_t> counts(table.cols, 0);
  std::vector<std::uint8_t> used(table.rows, 0);
  std::vector<double> out(table.rows);
  for (auto _ : state) {
    Scan(table, model, counts, used, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Search>
void BM_SearchMinSubset(benchmark::State& state) {
  ScenarioConfig c;
  c.n_examples = 24;
  c.n_hypotheses = 12;
  c.eta = 0.8;
  c.seed = 11;
  const TaskSpec spec = generate(c);
  const auto table = kernels::serial::build_mismatch_table(spec, all_rows(spec));
  const auto errs = hypothesis_errors(spec);
  std::vector<double> w(errs.size());
  for (std::size_t h = 0; h < w.size(); ++h) w[h] = spec.prior[h] * errs[h];
  const kernels::ResidualModel model(w, spec.rate, table.rows);
  const kernels::SubsetQuery q{&table, &model, 0.001 * spec.prior[spec.target_id], table.rows};
  for (auto _ : state) benchmark::DoNotOptimize(Search(q));
}

template <auto Flips>
void BM_MaxLabelFlips(benchmark::State& state) {
  const auto& spec = experiment_spec();
  for (auto _ : state) benchmark::DoNotOptimize(Flips(spec, 0.2, 200, 3));
}

BENCHMARK(BM_BuildTable<kernels::serial::build_mismatch_table>)->Name("build_table/serial");
BENCHMARK(BM_BuildTable<kernels::parallel::build_mismatch_table>)->Name("build_table/parallel");
BENCHMARK(BM_GainScan<kernels::serial::gain_scan>)->Name("gain_scan/serial");
BENCHMARK(BM_GainScan<kernels::parallel::gain_scan>)->Name("gain_scan/parallel");
BENCHMARK(BM_SearchMinSubset<kernels::serial::search_min_subset>)->Name("search_min_subset/serial");
BENCHMARK(BM_SearchMinSubset<kernels::parallel::search_min_subset>)->Name("search_min_subset/parallel");
BENCHMARK(BM_MaxLabelFlips<kernels::serial::max_label_flips>)->Name("max_label_flips/serial");
BENCHMARK(BM_MaxLabelFlips<kernels::parallel::max_label_flips>)->Name("max_label_flips/parallel");

}  // namespace

BENCHMARK_MAIN();
