#include "bnet/compile.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace bnet {

namespace {

std::vector<std::uint32_t> sorted_intersection(
    const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool is_subset(const std::vector<std::uint32_t>& small,
               const std::vector<std::uint32_t>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::vector<std::pair<std::uint32_t, std::uint32_t>> UndirectedGraph::edges()
    const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t a = 0; a < vertex_count; ++a)
    for (std::uint32_t b = a + 1; b < vertex_count; ++b)
      if (adjacent[a][b]) out.emplace_back(a, b);
  return out;
}

UndirectedGraph moralize(const Network& net) {
  UndirectedGraph g;
  g.vertex_count = net.variable_count();
  g.adjacent.assign(g.vertex_count, std::vector<bool>(g.vertex_count, false));
  for (std::uint32_t child = 0; child < g.vertex_count; ++child) {
    const auto& parents = net.parents(child);
    for (auto p : parents) g.add_edge(p, child);
    for (std::size_t i = 0; i < parents.size(); ++i)
      for (std::size_t j = i + 1; j < parents.size(); ++j)
        g.add_edge(parents[i], parents[j]);  // marry co-parents
  }
  return g;
}

Triangulation triangulate(const UndirectedGraph& graph) {
  const std::size_t n = graph.vertex_count;
  auto adj = graph.adjacent;  // working copy
  std::vector<bool> eliminated(n, false);

  Triangulation result;
  std::vector<std::vector<std::uint32_t>> candidates;

  auto neighbours_of = [&](std::uint32_t v) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t u = 0; u < n; ++u)
      if (u != v && !eliminated[u] && adj[v][u]) out.push_back(u);
    return out;
  };
  auto fill_count = [&](const std::vector<std::uint32_t>& nb) {
    std::size_t missing = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]][nb[j]]) ++missing;
    return missing;
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::uint32_t best = 0;
    std::size_t best_fill = 0, best_degree = 0;
    bool have_best = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      const auto nb = neighbours_of(v);
      const std::size_t fill = fill_count(nb);
      if (!have_best || fill < best_fill ||
          (fill == best_fill && nb.size() < best_degree)) {
        best = v;
        best_fill = fill;
        best_degree = nb.size();
        have_best = true;
      }
    }

    const auto nb = neighbours_of(best);
    std::vector<std::uint32_t> clique = nb;
    clique.push_back(best);
    std::sort(clique.begin(), clique.end());
    candidates.push_back(std::move(clique));

    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]][nb[j]]) {
          adj[nb[i]][nb[j]] = adj[nb[j]][nb[i]] = true;
          result.fill_edges.emplace_back(std::min(nb[i], nb[j]),
                                         std::max(nb[i], nb[j]));
        }

    eliminated[best] = true;
    result.elimination_order.push_back(best);
  }

  // Keep the maximal candidates, in order of first appearance.
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < candidates.size() && maximal; ++j)
      if (i != j && candidates[i] != candidates[j] &&
          is_subset(candidates[i], candidates[j]))
        maximal = false;
    if (maximal &&
        std::find(result.cliques.begin(), result.cliques.end(), candidates[i]) ==
            result.cliques.end())
      result.cliques.push_back(candidates[i]);
  }
  return result;
}

std::vector<Sepset> build_junction_tree(
    const std::vector<std::vector<std::uint32_t>>& cliques) {
  const int n = static_cast<int>(cliques.size());

  struct Candidate {
    std::size_t weight;
    int a, b;
  };
  std::vector<Candidate> candidates;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      candidates.push_back(
          {sorted_intersection(cliques[a], cliques[b]).size(), a, b});
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& x, const Candidate& y) {
              if (x.weight != y.weight) return x.weight > y.weight;
              if (x.a != y.a) return x.a < y.a;
              return x.b < y.b;
            });

  std::vector<Sepset> edges;
  UnionFind uf(n);
  for (const auto& c : candidates) {
    if (static_cast<int>(edges.size()) == n - 1) break;
    if (uf.unite(c.a, c.b))
      edges.push_back({c.a, c.b, sorted_intersection(cliques[c.a], cliques[c.b])});
  }

  // Running intersection: every clique on the path between any pair must
  // contain the pair's intersection. Construction must never break this.
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& e : edges) {
    adjacency[e.a].push_back(e.b);
    adjacency[e.b].push_back(e.a);
  }
  for (int a = 0; a < n; ++a) {
    // BFS tracking the path back to a.
    std::vector<int> from(n, -2);
    std::queue<int> queue;
    queue.push(a);
    from[a] = -1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      for (int u : adjacency[v])
        if (from[u] == -2) {
          from[u] = v;
          queue.push(u);
        }
    }
    for (int b = a + 1; b < n; ++b) {
      if (from[b] == -2) continue;  // different components: intersection empty
      const auto need = sorted_intersection(cliques[a], cliques[b]);
      for (int v = from[b]; v >= 0 && v != a; v = from[v])
        if (!is_subset(need, cliques[v]))
          throw Error(ErrorCode::RunningIntersectionViolated,
                      "cliques " + std::to_string(a) + " and " +
                          std::to_string(b) + " leak through clique " +
                          std::to_string(v));
    }
  }
  return edges;
}

JunctionTree::JunctionTree(Network net,
                           std::vector<std::vector<std::uint32_t>> cliques,
                           std::vector<Sepset> edges)
    : net_(std::move(net)), edges_(std::move(edges)) {
  const std::size_t var_count = net_.variable_count();

  cliques_.reserve(cliques.size());
  for (std::size_t id = 0; id < cliques.size(); ++id) {
    std::vector<DiscreteVar> domain;
    for (auto v : cliques[id]) domain.push_back(net_.var(v));
    cliques_.push_back({static_cast<int>(id), std::move(cliques[id]),
                        Potential::ones(std::move(domain))});
  }

  adjacency_.assign(cliques_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adjacency_[edges_[e].a].emplace_back(edges_[e].b, static_cast<int>(e));
    adjacency_[edges_[e].b].emplace_back(edges_[e].a, static_cast<int>(e));
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

  auto smallest_containing = [&](const std::vector<std::uint32_t>& vars) {
    int best = -1;
    for (const auto& c : cliques_) {
      if (!is_subset(vars, c.vars)) continue;
      if (best < 0 || c.vars.size() < cliques_[best].vars.size()) best = c.id;
    }
    return best;
  };

  family_home_.resize(var_count);
  entry_home_.resize(var_count);
  for (std::uint32_t v = 0; v < var_count; ++v) {
    std::vector<std::uint32_t> family = net_.parents(v);
    family.push_back(v);
    std::sort(family.begin(), family.end());
    family_home_[v] = smallest_containing(family);
    if (family_home_[v] < 0)
      throw Error(ErrorCode::NoHostClique,
                  "no clique contains the family of '" + net_.variable(v).name +
                      "'");
    entry_home_[v] = smallest_containing({v});
  }

  for (std::uint32_t v = 0; v < var_count; ++v) {
    Clique& host = cliques_[family_home_[v]];
    host.belief = multiply(host.belief, net_.cpt(v));
  }
}

int JunctionTree::covering_clique(std::span<const std::uint32_t> vars) const {
  std::vector<std::uint32_t> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  int best = -1;
  for (const auto& c : cliques_) {
    if (!is_subset(sorted, c.vars)) continue;
    if (best < 0 || c.vars.size() < cliques_[best].vars.size()) best = c.id;
  }
  return best;
}

int JunctionTree::auto_root() const {
  int best = 0;
  for (const auto& c : cliques_)
    if (c.vars.size() > cliques_[best].vars.size()) best = c.id;
  return best;
}

JunctionTree compile(const Network& net) {
  const Triangulation tri = triangulate(moralize(net));
  std::vector<Sepset> edges = build_junction_tree(tri.cliques);
  return JunctionTree(net, tri.cliques, std::move(edges));
}

}  // namespace bnet
