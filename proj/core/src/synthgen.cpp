#include "flowgnn/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "flowgnn/errors.hpp"

namespace flowgnn::synth {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void SynthConfig::validate() const {
  if (target_nodes < 5) throw DomainError("target_nodes must be at least 5");
  if (!(zones_per_node > 0.0 && zones_per_node <= 1.0)) {
    throw DomainError("zones_per_node must lie in (0, 1]");
  }
  if (route_lookahead_k < 1) throw DomainError("route_lookahead_k must be at least 1");
  if (!(node_tolerance >= 0.0)) throw DomainError("node_tolerance must be non-negative");
  for (const IntRange& r : {residents_range, employees_range}) {
    if (r.min < 0 || r.max < r.min) throw DomainError("attribute range is empty or negative");
  }
  if (!(link_capacity > 0.0) || !(link_free_flow_speed > 0.0)) {
    throw DomainError("link defaults must be positive");
  }
}

std::size_t zone_count(const SynthConfig& config) {
  const auto m = static_cast<std::size_t>(
      std::llround(static_cast<double>(config.target_nodes) * config.zones_per_node));
  return std::clamp<std::size_t>(m, 2, config.target_nodes);
}

std::vector<Point> scatter_nodes(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("cannot scatter zero nodes");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> points;
  points.reserve(n);
  while (points.size() < n) {
    const Point p{unit(rng), unit(rng)};
    if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
  }
  return points;
}

std::vector<int> select_zonal_nodes(std::span<const Point> points, std::size_t m) {
  if (m < 1 || m > points.size()) {
    throw DomainError("cannot select " + std::to_string(m) + " zones from " +
                      std::to_string(points.size()) + " points");
  }
  const Point centre{0.5, 0.5};
  int anchor = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (distance(points[i], centre) < distance(points[anchor], centre)) anchor = static_cast<int>(i);
  }

  std::vector<int> chosen{anchor};
  std::vector<double> min_dist(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) min_dist[i] = distance(points[i], points[anchor]);
  std::vector<bool> taken(points.size(), false);
  taken[anchor] = true;

  while (chosen.size() < m) {
    int best = -1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (taken[i]) continue;
      if (best < 0 || min_dist[i] > min_dist[best]) best = static_cast<int>(i);
    }
    taken[best] = true;
    chosen.push_back(best);
    for (std::size_t i = 0; i < points.size(); ++i) {
      min_dist[i] = std::min(min_dist[i], distance(points[i], points[best]));
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ZoneMap assign_zonal_attributes(std::span<const int> zone_indices, const SynthConfig& config,
                                Rng& rng) {
  if (zone_indices.empty()) throw DomainError("no zonal nodes to populate");
  std::uniform_int_distribution<std::int64_t> residents(config.residents_range.min,
                                                        config.residents_range.max);
  std::uniform_int_distribution<std::int64_t> employees(config.employees_range.min,
                                                        config.employees_range.max);
  ZoneMap zones;
  for (int idx : zone_indices) {
    ZoneInfo info;
    info.residents = residents(rng);
    info.employees = employees(rng);
    zones[idx] = info;
  }
  return zones;
}

std::vector<int> greedy_route(std::span<const Point> points, int from, int to, std::size_t k,
                              std::span<const int> blocked) {
  const auto n = static_cast<int>(points.size());
  if (from == to) throw DomainError("route endpoints coincide");
  if (k < 1) throw DomainError("route lookahead must be at least 1");
  if (from < 0 || from >= n || to < 0 || to >= n) throw DomainError("route endpoint out of range");

  std::vector<bool> visited(points.size(), false);
  for (int b : blocked) {
    if (b < 0 || b >= n) throw DomainError("blocked node out of range");
    visited[b] = true;
  }
  std::vector<int> path{from};
  visited[from] = true;
  const std::size_t max_steps = 4 * points.size();

  std::vector<int> candidates;
  int current = from;
  while (current != to) {
    if (path.size() > max_steps) throw RouteFailed("route exceeded the step budget");
    candidates.clear();
    for (int i = 0; i < n; ++i) {
      if (!visited[i]) candidates.push_back(i);
    }
    if (candidates.empty()) throw RouteFailed("no unvisited candidate remains");
    const Point& here = points[current];
    const std::size_t take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                      candidates.end(), [&](int a, int b) {
                        const double da = distance(points[a], here);
                        const double db = distance(points[b], here);
                        return da < db || (da == db && a < b);
                      });
    int next = candidates[0];
    for (std::size_t c = 1; c < take; ++c) {
      const int cand = candidates[c];
      const double dc = distance(points[cand], points[to]);
      const double dn = distance(points[next], points[to]);
      if (dc < dn || (dc == dn && cand < next)) next = cand;
    }
    visited[next] = true;
    path.push_back(next);
    current = next;
  }
  return path;
}

std::pair<int, int> draw_route_endpoints(const ZoneMap& zones, Rng& rng) {
  std::vector<int> ids;
  std::vector<double> res;
  std::vector<double> emp;
  for (const auto& [id, info] : zones) {
    ids.push_back(id);
    res.push_back(static_cast<double>(info.residents));
    emp.push_back(static_cast<double>(info.employees));
  }
  if (std::accumulate(res.begin(), res.end(), 0.0) <= 0.0) {
    throw DomainError("no zone has residents to originate a route");
  }
  std::discrete_distribution<std::size_t> pick_origin(res.begin(), res.end());
  const std::size_t o = pick_origin(rng);
  emp[o] = 0.0;
  if (std::accumulate(emp.begin(), emp.end(), 0.0) <= 0.0) {
    throw DomainError("no destination zone has employees");
  }
  std::discrete_distribution<std::size_t> pick_dest(emp.begin(), emp.end());
  const std::size_t d = pick_dest(rng);
  return {ids[o], ids[d]};
}

namespace {

void add_path(const std::vector<int>& path, LinkSet& links) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    links.emplace(std::min(path[i - 1], path[i]), std::max(path[i - 1], path[i]));
  }
}

// Component label per point over the undirected link set; isolated points get
// their own label.
std::vector<int> components(std::size_t n, const LinkSet& links) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : links) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::queue<int> q;
    q.push(static_cast<int>(s));
    label[s] = next;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (label[v] < 0) {
          label[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

LinkSet build_routes(std::span<const Point> points, const ZoneMap& zones, Rng& rng,
                     const SynthConfig& config) {
  if (zones.size() < 2) throw DomainError("routing needs at least two zones");
  constexpr int kMaxRetries = 10;
  LinkSet links;
  for (std::size_t attempt = 0; attempt < zones.size(); ++attempt) {
    for (int tries = 0; tries <= kMaxRetries; ++tries) {
      const auto [origin, destination] = draw_route_endpoints(zones, rng);
      try {
        add_path(greedy_route(points, origin, destination, config.route_lookahead_k), links);
        break;
      } catch (const RouteFailed&) {
        // redraw endpoints; the route is skipped once retries run out
      }
    }
  }
  return links;
}

LinkSet connect_orphans(std::span<const Point> points, const ZoneMap& zones, LinkSet links,
                        std::size_t k) {
  if (links.empty()) throw SampleFailed("no route succeeded; nothing to connect orphans to");
  constexpr int kMaxRetries = 10;
  const std::size_t n = points.size();

  for (;;) {
    const std::vector<int> label = components(n, links);
    std::vector<std::size_t> size(n, 0);
    for (int l : label) ++size[l];
    const int main = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());

    int orphan = -1;
    for (const auto& [id, info] : zones) {
      if (label[id] != main) {
        orphan = id;
        break;
      }
    }
    if (orphan < 0) return links;

    std::vector<int> targets;
    for (std::size_t i = 0; i < n; ++i) {
      if (label[i] == main) targets.push_back(static_cast<int>(i));
    }
    std::stable_sort(targets.begin(), targets.end(), [&](int a, int b) {
      return distance(points[a], points[orphan]) < distance(points[b], points[orphan]);
    });

    bool joined = false;
    for (std::size_t t = 0; t < targets.size() && t <= kMaxRetries; ++t) {
      try {
        add_path(greedy_route(points, orphan, targets[t], k), links);
        joined = true;
        break;
      } catch (const RouteFailed&) {
      }
    }
    if (!joined) {
      throw SampleFailed("zone " + std::to_string(orphan) + " could not be connected");
    }
  }
}

RoadNetwork assemble_network(std::span<const Point> points, const ZoneMap& zones,
                             const LinkSet& links, const SynthConfig& config) {
  RoadNetwork net;
  net.nodes.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    RoadNode node{static_cast<int>(i), points[i].x, points[i].y, std::nullopt};
    if (auto it = zones.find(static_cast<int>(i)); it != zones.end()) node.zone = it->second;
    net.nodes.push_back(node);
  }
  for (const auto& [a, b] : links) {
    const double len = distance(points[a], points[b]) * kRegionScaleKm;
    for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
      net.links.push_back({static_cast<int>(net.links.size()), from, to, len,
                           config.link_capacity, config.link_free_flow_speed});
    }
  }
  return net;
}

RoadNetwork prune_and_split(const RoadNetwork& network, std::size_t target_nodes,
                            double tolerance) {
  std::vector<int> degree(network.nodes.size(), 0);
  for (const RoadLink& l : network.links) {
    ++degree[l.from];
    ++degree[l.to];
  }
  std::vector<int> remap(network.nodes.size(), -1);
  RoadNetwork out;
  for (const RoadNode& node : network.nodes) {
    if (degree[node.id] == 0) continue;
    remap[node.id] = static_cast<int>(out.nodes.size());
    RoadNode kept = node;
    kept.id = remap[node.id];
    out.nodes.push_back(kept);
  }
  if (out.nodes.empty()) throw SampleFailed("network is empty after pruning");
  for (const RoadLink& l : network.links) {
    RoadLink kept = l;
    kept.from = remap[l.from];
    kept.to = remap[l.to];
    out.links.push_back(kept);
  }

  while (out.nodes.size() < target_nodes) {
    std::size_t longest = 0;
    for (std::size_t i = 1; i < out.links.size(); ++i) {
      if (out.links[i].length_km > out.links[longest].length_km) longest = i;
    }
    const RoadLink split = out.links[longest];
    const RoadNode& a = out.nodes[split.from];
    const RoadNode& b = out.nodes[split.to];
    const int mid = static_cast<int>(out.nodes.size());
    out.nodes.push_back({mid, 0.5 * (a.x + b.x), 0.5 * (a.y + b.y), std::nullopt});

    auto divide = [&](std::size_t idx) {
      RoadLink first = out.links[idx];
      RoadLink second = first;
      first.length_km *= 0.5;
      second.length_km = first.length_km;
      second.from = mid;
      first.to = mid;
      out.links[idx] = first;
      out.links.push_back(second);
    };
    divide(longest);
    for (std::size_t i = 0; i < out.links.size(); ++i) {
      if (out.links[i].from == split.to && out.links[i].to == split.from) {
        divide(i);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < out.links.size(); ++i) out.links[i].id = static_cast<int>(i);

  const double slack = tolerance * static_cast<double>(target_nodes);
  if (std::abs(static_cast<double>(out.nodes.size()) - static_cast<double>(target_nodes)) > slack) {
    throw SampleFailed("node count " + std::to_string(out.nodes.size()) +
                       " outside tolerance of target " + std::to_string(target_nodes));
  }
  return out;
}

bool is_weakly_connected(const RoadNetwork& network) {
  if (network.nodes.empty()) return false;
  LinkSet undirected;
  for (const RoadLink& l : network.links) {
    undirected.emplace(std::min(l.from, l.to), std::max(l.from, l.to));
  }
  const std::vector<int> label = components(network.nodes.size(), undirected);
  return std::all_of(label.begin(), label.end(), [](int l) { return l == 0; });
}

RoadNetwork generate_sample(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::vector<Point> points = scatter_nodes(config.target_nodes, rng);
  const std::vector<int> zone_idx = select_zonal_nodes(points, zone_count(config));
  const ZoneMap zones = assign_zonal_attributes(zone_idx, config, rng);
  LinkSet links = build_routes(points, zones, rng, config);
  links = connect_orphans(points, zones, std::move(links), config.route_lookahead_k);
  RoadNetwork net = prune_and_split(assemble_network(points, zones, links, config),
                                    config.target_nodes, config.node_tolerance);
  if (!is_weakly_connected(net)) throw SampleFailed("generated network is disconnected");
  net.validate();
  return net;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RoadNetwork generate_sample_with_retries(const SynthConfig& config, int max_attempts) {
  SynthConfig attempt_config = config;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    try {
      return generate_sample(attempt_config);
    } catch (const SampleFailed&) {
      attempt_config.seed = splitmix64(attempt_config.seed);
    }
  }
  throw SampleFailed("sample generation failed after " + std::to_string(max_attempts) +
                     " attempts");
}

}  // namespace flowgnn::synth
