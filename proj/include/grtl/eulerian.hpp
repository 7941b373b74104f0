#ifndef GRTL_EULERIAN_HPP
#define GRTL_EULERIAN_HPP

#include <optional>
#include <vector>

#include "grtl/graph.hpp"

// Eulerian-cycle verification over labeled directed multigraphs, plus the
// reduction that turns a union-of-cycles graph into such an instance.
//
// An instance lists edges (from, to, label) with distinct nonzero labels and
// "fragments": ordered pairs of edge labels (l1, l2) where edge l2 starts at
// the node edge l1 ends on. The fragments verify an Eulerian cycle when every
// edge occurs exactly once as a fragment's first entry and exactly once as a
// second entry, and the induced successor permutation is one cycle through
// all edges.

namespace grtl {

struct EulerianEdge {
  int from = 0;
  int to = 0;
  long long label = 0;
};

struct EulerianInstance {
  int n = 0;
  std::vector<EulerianEdge> edges;
  std::vector<std::pair<long long, long long>> fragments;
};

json eulerian_to_json(const EulerianInstance& inst);
EulerianInstance eulerian_from_json(const json& j);

// True iff the fragments verify an Eulerian cycle. Throws on malformed
// instances: out-of-range endpoints, duplicate labels, a fragment naming a
// label with no edge, or a fragment whose edges do not meet end-to-start.
bool verify_eulerian(const EulerianInstance& inst);

// Cycle lengths of the fragment-successor permutation, sorted descending.
// Requires each edge to head exactly one fragment and trail exactly one;
// throws "not a perfect matching" otherwise.
std::vector<long long> fragment_cycle_census(const EulerianInstance& inst);

// Projects a disjoint-cycles graph on N = n*n/2 nodes (every degree 2, n even,
// n >= 4) down to n nodes via i mod (n/2), doubling each undirected edge into
// a forward and a backward labeled edge (+i / -i, 1-based). The turnaround
// edge (given as an index into the canonical edge list, default 0) becomes two
// self-loops that splice the forward and backward traversals together: the
// instance verifies iff the input was a single cycle.
EulerianInstance reduce_cycles_to_eulerian(const Graph& cycles,
                                           std::optional<int> turnaround = std::nullopt);

}  // namespace grtl

#endif
