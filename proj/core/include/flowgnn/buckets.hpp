#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flowgnn {

// Ordered partition of flow values (veh/h) into left-closed, right-open
// intervals [edges[k], edges[k+1]). The last edge is the finite cap; values
// at or above it fall into the last bucket.
struct BucketSpec {
  std::string name;
  std::vector<double> edges;

  std::size_t size() const { return edges.size() - 1; }
  double cap() const { return edges.back(); }
  double lower(std::size_t k) const { return edges[k]; }
  double upper(std::size_t k) const { return edges[k + 1]; }
  double midpoint(std::size_t k) const { return 0.5 * (edges[k] + edges[k + 1]); }

  void validate() const;

  friend bool operator==(const BucketSpec&, const BucketSpec&) = default;
};

const std::vector<std::string>& bucket_spec_names();

// coarse3, e23, e45, e90, e180, e450, nl38, nl54. Throws DomainError.
BucketSpec make_spec(std::string_view name);

std::size_t encode(double value, const BucketSpec& spec);

// Expected flow under the bucket distribution with a uniform density inside
// each bucket: sum_k p_k (lower_k + upper_k) / 2. Throws ValidationError when
// probs is not a probability vector (tolerance 1e-6 on the sum).
double decode_expectation(std::span<const double> probs, const BucketSpec& spec);

}  // namespace flowgnn
