#include <benchmark/benchmark.h>

#include "flowgnn/layers.hpp"
#include "flowgnn/model.hpp"
#include "flowgnn/ops.hpp"
#include "flowgnn/pipeline.hpp"

namespace {

using namespace flowgnn;

LineGraphSample bench_sample(std::size_t nodes) {
  BatchConfig bc;
  bc.samples = 1;
  bc.min_nodes = nodes;
  bc.max_nodes = nodes;
  bc.seed = 7;
  return generate_labelled_sample(bc, 0);
}

void BM_GenerateNetwork(benchmark::State& state) {
  synth::SynthConfig config;
  config.target_nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    config.seed++;
    benchmark::DoNotOptimize(synth::generate_sample_with_retries(config));
  }
}
BENCHMARK(BM_GenerateNetwork)->Arg(20)->Arg(40)->Arg(80);

void BM_LabelNetwork(benchmark::State& state) {
  synth::SynthConfig config;
  config.target_nodes = static_cast<std::size_t>(state.range(0));
  config.seed = 3;
  const RoadNetwork net = synth::generate_sample_with_retries(config);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::label_network(net, {}));
}
BENCHMARK(BM_LabelNetwork)->Arg(20)->Arg(40)->Arg(80);

void BM_Matmul(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  gnn::Rng rng(1);
  const ad::Tensor a = gnn::glorot(n, n, rng);
  const ad::Tensor b = gnn::glorot(n, n, rng);
  for (auto _ : state) {
    ad::Tape tape(false);
    benchmark::DoNotOptimize(ad::matmul(tape, a, b));
  }
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(256);

void BM_ModelStep(benchmark::State& state) {
  gnn::ModelConfig config;
  config.kind = static_cast<gnn::LayerKind>(state.range(0));
  config.depth = 10;
  config.hidden = 64;
  const LineGraphSample sample = bench_sample(40);
  gnn::SurrogateModel model(config, 1);
  const gnn::MessageGraph graph = gnn::MessageGraph::from_edges(sample.num_nodes, sample.edges);
  std::vector<int> labels(sample.num_nodes, 0);
  gnn::Rng rng(2);
  for (auto _ : state) {
    ad::Tape tape;
    const ad::Tensor loss = ad::cross_entropy_loss(tape, model.forward(tape, sample, graph, true, rng), labels);
    tape.backward(loss);
  }
  state.SetLabel(std::string(gnn::to_string(config.kind)));
}
BENCHMARK(BM_ModelStep)->DenseRange(0, 3);

}  // namespace
BENCHMARK_MAIN();
