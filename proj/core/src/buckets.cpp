#include "flowgnn/buckets.hpp"

#include <algorithm>
#include <cmath>

#include "flowgnn/errors.hpp"

namespace flowgnn {

namespace {

// Appends edges of the given width from the current last edge up to `stop`.
void extend(std::vector<double>& edges, double width, double stop) {
  while (edges.back() < stop) edges.push_back(edges.back() + width);
}

BucketSpec uniform(std::string name, std::size_t count, double width) {
  BucketSpec spec{std::move(name), {0.0}};
  for (std::size_t k = 1; k <= count; ++k) spec.edges.push_back(static_cast<double>(k) * width);
  return spec;
}

}  // namespace

void BucketSpec::validate() const {
  if (edges.size() < 3) throw ValidationError("bucket spec needs at least two buckets");
  if (edges.front() != 0.0) throw ValidationError("bucket spec must start at 0");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ValidationError("bucket edges must increase strictly");
  }
}

const std::vector<std::string>& bucket_spec_names() {
  static const std::vector<std::string> names = {"coarse3", "e23",  "e45",  "e90",
                                                 "e180",    "e450", "nl38", "nl54"};
  return names;
}

BucketSpec make_spec(std::string_view name) {
  if (name == "coarse3") return {"coarse3", {0.0, 10.0, 500.0, 4500.0}};
  if (name == "e23") return uniform("e23", 23, 200.0);
  if (name == "e45") return uniform("e45", 45, 100.0);
  if (name == "e90") return uniform("e90", 90, 50.0);
  if (name == "e180") return uniform("e180", 180, 25.0);
  if (name == "e450") return uniform("e450", 450, 10.0);
  if (name == "nl38") {
    BucketSpec spec{"nl38", {0.0}};
    extend(spec.edges, 25.0, 250.0);
    extend(spec.edges, 50.0, 1000.0);
    extend(spec.edges, 100.0, 1500.0);
    extend(spec.edges, 500.0, 5500.0);
    return spec;
  }
  if (name == "nl54") {
    BucketSpec spec{"nl54", {0.0}};
    extend(spec.edges, 25.0, 500.0);
    extend(spec.edges, 50.0, 1500.0);
    extend(spec.edges, 100.0, 2000.0);
    extend(spec.edges, 500.0, 6500.0);
    return spec;
  }
  throw DomainError("unknown bucket spec '" + std::string(name) + "'");
}

std::size_t encode(double value, const BucketSpec& spec) {
  if (!(value >= 0.0)) throw DomainError("cannot bucket a negative or NaN flow");
  if (value >= spec.cap()) return spec.size() - 1;
  const auto it = std::upper_bound(spec.edges.begin(), spec.edges.end(), value);
  return static_cast<std::size_t>(it - spec.edges.begin()) - 1;
}

double decode_expectation(std::span<const double> probs, const BucketSpec& spec) {
  if (probs.size() != spec.size()) {
    throw ValidationError("probability vector has " + std::to_string(probs.size()) +
                          " entries for " + std::to_string(spec.size()) + " buckets");
  }
  constexpr double kTol = 1e-6;
  double total = 0.0;
  double expected = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!(probs[k] >= -kTol && probs[k] <= 1.0 + kTol)) {
      throw ValidationError("probability outside [0, 1]");
    }
    total += probs[k];
    expected += probs[k] * spec.midpoint(k);
  }
  if (std::abs(total - 1.0) > kTol) throw ValidationError("probabilities do not sum to 1");
  return expected;
}

}  // namespace flowgnn
