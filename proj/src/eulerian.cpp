#include "grtl/eulerian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace grtl {

json eulerian_to_json(const EulerianInstance& inst) {
  json edges = json::array();
  for (const auto& e : inst.edges) edges.push_back({e.from, e.to, e.label});
  json fragments = json::array();
  for (const auto& [l1, l2] : inst.fragments) fragments.push_back({l1, l2});
  return json{{"n", inst.n}, {"edges", edges}, {"fragments", fragments}};
}

EulerianInstance eulerian_from_json(const json& j) {
  EulerianInstance inst;
  inst.n = j.at("n").get<int>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("eulerian_from_json: edge must be [from,to,label]");
    inst.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<long long>()});
  }
  for (const auto& p : j.at("fragments")) {
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument("eulerian_from_json: fragment must be [l1,l2]");
    inst.fragments.emplace_back(p.at(0).get<long long>(), p.at(1).get<long long>());
  }
  return inst;
}

namespace {

std::map<long long, const EulerianEdge*> validated_edge_index(const EulerianInstance& inst) {
  std::map<long long, const EulerianEdge*> by_label;
  for (const auto& e : inst.edges) {
    if (e.from < 0 || e.from >= inst.n || e.to < 0 || e.to >= inst.n)
      throw std::invalid_argument("eulerian: edge endpoint out of range");
    if (!by_label.emplace(e.label, &e).second)
      throw std::invalid_argument("eulerian: duplicate edge label");
  }
  for (const auto& [l1, l2] : inst.fragments) {
    auto first = by_label.find(l1);
    auto second = by_label.find(l2);
    if (first == by_label.end() || second == by_label.end())
      throw std::invalid_argument("eulerian: fragment references a dangling label");
    if (first->second->to != second->second->from)
      throw std::invalid_argument("eulerian: fragment edges do not meet end-to-start");
  }
  return by_label;
}

// Successor permutation over edge labels, or nullopt when some edge does not
// head exactly one fragment and trail exactly one.
std::optional<std::map<long long, long long>> successor_map(const EulerianInstance& inst) {
  std::map<long long, long long> succ;
  std::map<long long, int> as_second;
  for (const auto& [l1, l2] : inst.fragments) {
    if (!succ.emplace(l1, l2).second) return std::nullopt;  // label heads two fragments
    as_second[l2] += 1;
  }
  if (succ.size() != inst.edges.size()) return std::nullopt;
  for (const auto& e : inst.edges) {
    auto it = as_second.find(e.label);
    if (it == as_second.end() || it->second != 1) return std::nullopt;
  }
  return succ;
}

std::vector<long long> census_of(const std::map<long long, long long>& succ) {
  std::map<long long, char> seen;
  std::vector<long long> lengths;
  for (const auto& [start, ignored] : succ) {
    (void)ignored;
    if (seen.count(start)) continue;
    long long len = 0;
    long long cur = start;
    while (!seen.count(cur)) {
      seen[cur] = 1;
      ++len;
      cur = succ.at(cur);
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

}  // namespace

bool verify_eulerian(const EulerianInstance& inst) {
  validated_edge_index(inst);
  auto succ = successor_map(inst);
  if (!succ) return false;
  auto lengths = census_of(*succ);
  return lengths.size() == 1 && lengths[0] == static_cast<long long>(inst.edges.size());
}

std::vector<long long> fragment_cycle_census(const EulerianInstance& inst) {
  validated_edge_index(inst);
  auto succ = successor_map(inst);
  if (!succ)
    throw std::runtime_error("fragment_cycle_census: successor relation is not a perfect matching");
  return census_of(*succ);
}

EulerianInstance reduce_cycles_to_eulerian(const Graph& cycles, std::optional<int> turnaround) {
  if (cycles.directed || cycles.loops)
    throw std::invalid_argument("reduce_cycles_to_eulerian: undirected simple graph expected");
  for (int deg : out_degrees(cycles))
    if (deg != 2)
      throw std::invalid_argument("reduce_cycles_to_eulerian: every node must have degree 2");
  const long long big_n = cycles.n;
  const long long n = std::llround(std::sqrt(2.0 * static_cast<double>(big_n)));
  if (n * n != 2 * big_n || n % 2 != 0 || n < 4)
    throw std::invalid_argument(
        "reduce_cycles_to_eulerian: node count must be n*n/2 for even n >= 4");
  const int edge_count = static_cast<int>(cycles.edges.size());  // equals big_n
  const int star = turnaround.value_or(0);
  if (star < 0 || star >= edge_count)
    throw std::invalid_argument("reduce_cycles_to_eulerian: turnaround index out of range");

  const long long half = n / 2;
  auto phi = [half](int node) { return static_cast<int>(node % half); };

  // The two incident edge indices per node, in canonical edge order.
  std::vector<std::array<int, 2>> incident(cycles.n, {-1, -1});
  for (int e = 0; e < edge_count; ++e) {
    for (int node : {cycles.edges[e].first, cycles.edges[e].second}) {
      if (incident[node][0] < 0)
        incident[node][0] = e;
      else
        incident[node][1] = e;
    }
  }

  EulerianInstance inst;
  inst.n = static_cast<int>(n);
  inst.edges.reserve(2 * edge_count);
  for (int e = 0; e < edge_count; ++e) {
    auto [u, v] = cycles.edges[e];
    const long long label = e + 1;
    if (e == star) {
      inst.edges.push_back({phi(v), phi(v), label});
      inst.edges.push_back({phi(u), phi(u), -label});
    } else {
      inst.edges.push_back({phi(u), phi(v), label});
      inst.edges.push_back({phi(v), phi(u), -label});
    }
  }

  // Directed image of edge k when the walk departs from endpoint `node`; the
  // turnaround departs (and arrives) through its self-loop at that endpoint.
  auto departing = [&](int k, int node) -> long long {
    auto [u, v] = cycles.edges[k];
    const long long label = k + 1;
    if (k == star) return node == v ? label : -label;
    return node == u ? label : -label;
  };

  inst.fragments.reserve(2 * edge_count);
  for (int e = 0; e < edge_count; ++e) {
    auto [u, v] = cycles.edges[e];
    const long long label = e + 1;
    for (int sign : {+1, -1}) {
      const int arrival = sign > 0 ? v : u;
      const int other = incident[arrival][0] == e ? incident[arrival][1] : incident[arrival][0];
      inst.fragments.emplace_back(sign * label, departing(other, arrival));
    }
  }
  return inst;
}

}  // namespace grtl
