#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "flowgnn/errors.hpp"
#include "flowgnn/model.hpp"

namespace flowgnn::gnn {
namespace {

using testing::path_sample;
using testing::random_sample;

ModelConfig small(LayerKind kind, std::size_t depth = 2) {
  ModelConfig c;
  c.kind = kind;
  c.depth = depth;
  c.hidden = 6;
  c.heads = 2;
  c.num_features = 4;
  c.num_outputs = 3;
  return c;
}

std::vector<double> eval(const SurrogateModel& m, const LineGraphSample& s) {
  Tape tape(false);
  Rng rng(0);
  const Tensor out = m.forward(tape, s, false, rng);
  return {out.values().begin(), out.values().end()};
}

const LayerKind kAll[] = {LayerKind::kGcn, LayerKind::kGcnii, LayerKind::kGatv2, LayerKind::kGatv3};

TEST(ModelConfig, Validation) {
  EXPECT_NO_THROW(ModelConfig{}.validate());
  auto bad = [](auto mutate) {
    ModelConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), DomainError);
  };
  bad([](ModelConfig& c) { c.hidden = 0; });
  bad([](ModelConfig& c) { c.num_features = 0; });
  bad([](ModelConfig& c) { c.num_outputs = 1; });
  bad([](ModelConfig& c) { c.task = Task::kRegression; c.num_outputs = 3; });
  bad([](ModelConfig& c) { c.dropout = 1.0; });
  bad([](ModelConfig& c) { c.heads = 0; });
  bad([](ModelConfig& c) { c.target_scale = 0.0; });
  bad([](ModelConfig& c) { c.alpha = 1.0; });
  bad([](ModelConfig& c) { c.theta = 0.0; });
  bad([](ModelConfig& c) { c.kind = LayerKind::kGatv3; c.alpha = -0.1; });
  ModelConfig ok;
  ok.kind = LayerKind::kGatv3;
  ok.alpha = 1.0;
  EXPECT_NO_THROW(ok.validate());
  EXPECT_THROW(SurrogateModel(ModelConfig{.hidden = 0}, 1), DomainError);
}

TEST(ModelConfig, Presets) {
  const ModelConfig g = gcnii_best_preset();
  EXPECT_EQ(g.kind, LayerKind::kGcnii);
  EXPECT_EQ(g.depth, 70u);
  EXPECT_EQ(g.hidden, 512u);
  EXPECT_DOUBLE_EQ(g.alpha, 0.1);
  EXPECT_DOUBLE_EQ(g.theta, 1.5);
  const ModelConfig a = gatv3_best_preset();
  EXPECT_EQ(a.kind, LayerKind::kGatv3);
  EXPECT_EQ(a.depth, 20u);
  EXPECT_EQ(a.hidden, 512u);
  EXPECT_EQ(a.heads, 2u);
  for (const ModelConfig& c : {g, a}) {
    EXPECT_DOUBLE_EQ(c.dropout, 0.25);
    EXPECT_EQ(c.ff_layers, 3u);
    EXPECT_TRUE(c.graph_norm);
    EXPECT_NO_THROW(c.validate());
  }
}

TEST(Model, OutputShapes) {
  Rng rng(1);
  const LineGraphSample s = random_sample(7, 4, 0.3, rng);
  for (LayerKind k : kAll) {
    EXPECT_EQ(eval(SurrogateModel(small(k), 3), s).size(), 7u * 3u);
    ModelConfig r = small(k);
    r.task = Task::kRegression;
    r.num_outputs = 1;
    EXPECT_EQ(eval(SurrogateModel(r, 3), s).size(), 7u);
  }
}

TEST(Model, FeatureMismatchIsSchemaError) {
  Rng rng(2);
  const SurrogateModel m(small(LayerKind::kGcn), 1);
  const LineGraphSample s = random_sample(5, 3, 0.3, rng);
  Tape tape(false);
  EXPECT_THROW(m.forward(tape, s, false, rng), SchemaError);
}

TEST(Model, DepthZeroIgnoresEdges) {
  Rng rng(3);
  LineGraphSample s = random_sample(8, 4, 0.4, rng);
  const SurrogateModel m(small(LayerKind::kGcnii, 0), 5);
  const std::vector<double> with_edges = eval(m, s);
  s.edges.clear();
  EXPECT_EQ(eval(m, s), with_edges);
  // Each row depends only on that row's features.
  LineGraphSample t = s;
  for (std::size_t c = 0; c < 4; ++c) t.features[2 * 4 + c] += 1.0;
  const std::vector<double> changed = eval(m, t);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (i == 2) continue;
      EXPECT_EQ(changed[i * 3 + c], with_edges[i * 3 + c]);
    }
  }
}

TEST(Model, EvalIsDeterministicTrainingIsNot) {
  Rng rng(4);
  const LineGraphSample s = random_sample(10, 4, 0.3, rng);
  for (LayerKind k : kAll) {
    const SurrogateModel m(small(k), 9);
    EXPECT_EQ(eval(m, s), eval(m, s));
    const SurrogateModel same_seed(small(k), 9);
    EXPECT_EQ(eval(same_seed, s), eval(m, s));
    Tape tape(false);
    Rng r1(1), r2(2);
    const Tensor a = m.forward(tape, s, true, r1);
    const Tensor b = m.forward(tape, s, true, r2);
    EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  }
}

TEST(Model, PermutationEquivariance) {
  Rng rng(5);
  for (LayerKind k : kAll) {
    const SurrogateModel m(small(k), 11);
    const std::size_t n = 9;
    const LineGraphSample s = random_sample(n, 4, 0.3, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    LineGraphSample p = s;
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(s.features.begin() + i * 4, 4, p.features.begin() + perm[i] * 4);
    }
    for (GraphEdge& e : p.edges) e = {perm[e.src], perm[e.dst]};
    const std::vector<double> out = eval(m, s);
    const std::vector<double> out_p = eval(m, p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(out_p[perm[i] * 3 + c], out[i * 3 + c], 1e-12);
    }
  }
}

TEST(Model, ReceptiveFieldIsBoundedByDepth) {
  Rng rng(6);
  const std::size_t n = 12;
  const LineGraphSample s = path_sample(n, 4, rng);
  for (LayerKind k : kAll) {
    for (std::size_t depth : {1u, 3u, 5u}) {
      ModelConfig c = small(k, depth);
      c.graph_norm = false;  // per-graph statistics would couple every node
      const SurrogateModel m(c, 2);
      LineGraphSample changed = s;
      for (std::size_t f = 0; f < 4; ++f) changed.features[(n - 1) * 4 + f] += 3.0;
      const std::vector<double> a = eval(m, s);
      const std::vector<double> b = eval(m, changed);
      // Node 0 is n-1 hops from the changed node.
      for (std::size_t i = 0; i + depth < n - 1; ++i) {
        for (std::size_t o = 0; o < 3; ++o) EXPECT_EQ(a[i * 3 + o], b[i * 3 + o]) << to_string(k) << i;
      }
    }
  }
}

TEST(Model, CloneIsIndependent) {
  Rng rng(7);
  const LineGraphSample s = random_sample(6, 4, 0.3, rng);
  SurrogateModel m(small(LayerKind::kGatv3), 1);
  const SurrogateModel copy = m.clone();
  EXPECT_EQ(eval(m, s), eval(copy, s));
  for (Tensor& p : m.parameters()) {
    for (double& v : p.mutable_values()) v += 0.5;
  }
  EXPECT_NE(eval(m, s), eval(copy, s));
  m.copy_parameters_from(copy);
  EXPECT_EQ(eval(m, s), eval(copy, s));
}

TEST(Model, ParameterCount) {
  ModelConfig c = small(LayerKind::kGcn, 2);
  const SurrogateModel m(c, 1);
  // input 4x6+6, 2 x (6x6 + 3x6 norm), 3 x (6x6+6), output 6x3+3
  EXPECT_EQ(m.parameter_count(), 30u + 2u * 54u + 3u * 42u + 21u);
  std::size_t total = 0;
  for (const Tensor& p : m.parameters()) total += p.numel();
  EXPECT_EQ(total, m.parameter_count());
}

TEST(FeatureScaler, StandardisesTrainingColumns) {
  Rng rng(8);
  std::vector<LineGraphSample> samples;
  for (int i = 0; i < 3; ++i) samples.push_back(random_sample(5, 4, 0.3, rng, "g" + std::to_string(i)));
  for (auto& s : samples) {
    for (std::size_t i = 0; i < s.num_nodes; ++i) s.features[i * 4 + 2] = 7.0;
  }
  const Dataset d = testing::make_dataset(samples);
  const FeatureScaler sc = FeatureScaler::fit(d);
  ASSERT_EQ(sc.mean.size(), 4u);
  EXPECT_DOUBLE_EQ(sc.mean[2], 7.0);
  EXPECT_DOUBLE_EQ(sc.scale[2], 1.0);  // constant column is only centred
  std::vector<double> col;
  for (const auto& s : samples) {
    const Tensor t = sc.transform(s);
    for (std::size_t i = 0; i < s.num_nodes; ++i) col.push_back(t.at(i, 0));
  }
  double mean = std::accumulate(col.begin(), col.end(), 0.0) / col.size();
  double var = 0;
  for (double v : col) var += (v - mean) * (v - mean) / col.size();
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(var, 1.0, 1e-12);
}

}  // namespace
}  // namespace flowgnn::gnn
