#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bnet/model.hpp"
#include "bnet/potential.hpp"

namespace bnet {

// Undirected graph over the network's variables, adjacency-set based.
struct UndirectedGraph {
  std::size_t vertex_count = 0;
  std::vector<std::vector<bool>> adjacent;  // symmetric matrix

  bool has_edge(std::uint32_t a, std::uint32_t b) const {
    return adjacent[a][b];
  }
  void add_edge(std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    adjacent[a][b] = adjacent[b][a] = true;
  }
  // Sorted (a < b) edge list.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;
};

// Parent-child edges plus marriages between co-parents, directions dropped.
UndirectedGraph moralize(const Network& net);

struct Triangulation {
  std::vector<std::uint32_t> elimination_order;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fill_edges;
  // Maximal cliques of the filled graph, each sorted by variable id,
  // listed in order of first appearance during elimination. The list
  // position is the clique id used everywhere downstream.
  std::vector<std::vector<std::uint32_t>> cliques;
};

// Min-fill elimination, ties broken by fewest neighbours then lowest
// variable id. Deterministic.
Triangulation triangulate(const UndirectedGraph& graph);

struct Sepset {
  int a = 0;
  int b = 0;  // clique ids, a < b
  std::vector<std::uint32_t> vars;
};

// Maximum-sepset-cardinality spanning tree over the cliques (Kruskal;
// ties by lexicographic clique-id pairs). Components of a disconnected
// graph are joined by empty sepsets so the result is always a tree.
// Verifies the running intersection property and throws
// RunningIntersectionViolated if construction broke it (bug guard).
std::vector<Sepset> build_junction_tree(
    const std::vector<std::vector<std::uint32_t>>& cliques);

struct Clique {
  int id = 0;
  std::vector<std::uint32_t> vars;  // sorted by variable id
  Potential belief;                 // product of the CPTs assigned here
};

// Compiled junction tree template: immutable once built; propagation
// sessions copy the beliefs.
class JunctionTree {
 public:
  JunctionTree(Network net, std::vector<std::vector<std::uint32_t>> cliques,
               std::vector<Sepset> edges);

  const Network& network() const { return net_; }
  const std::vector<Clique>& cliques() const { return cliques_; }
  const Clique& clique(int id) const { return cliques_[id]; }
  const std::vector<Sepset>& edges() const { return edges_; }
  // (neighbour clique, edge index) pairs, sorted by neighbour id.
  const std::vector<std::pair<int, int>>& neighbours(int clique) const {
    return adjacency_[clique];
  }

  // Clique whose belief holds P(var | pa(var)): the smallest clique
  // containing the whole family, ties by lowest id.
  int family_home(std::uint32_t var) const { return family_home_[var]; }
  // Clique where findings on var are entered: the smallest clique
  // containing var, ties by lowest id.
  int entry_home(std::uint32_t var) const { return entry_home_[var]; }

  // Smallest clique containing all of `vars` (ties by lowest id), or -1.
  int covering_clique(std::span<const std::uint32_t> vars) const;

  // Default propagation root: largest clique, ties by lowest id.
  int auto_root() const;

 private:
  Network net_;
  std::vector<Clique> cliques_;
  std::vector<Sepset> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<int> family_home_;
  std::vector<int> entry_home_;
};

// moralize + triangulate + build_junction_tree + initialize in one step.
JunctionTree compile(const Network& net);

}  // namespace bnet
