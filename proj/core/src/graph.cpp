#include "umt/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace umt {

std::string language_name(int index, int count) {
  std::string digits = std::to_string(index);
  const std::size_t width = std::to_string(std::max(count - 1, 0)).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "L" + digits;
}

TranslationGraph::TranslationGraph(std::vector<LanguageId> languages, std::vector<GraphEdge> edges)
    : languages_(std::move(languages)) {
  std::sort(languages_.begin(), languages_.end());
  if (std::adjacent_find(languages_.begin(), languages_.end()) != languages_.end()) {
    throw GraphError("graph: duplicate language");
  }
  if (languages_.empty()) throw GraphError("graph: no languages");
  adjacency_.resize(languages_.size());
  std::set<std::pair<LanguageId, LanguageId>> seen;
  for (auto e : edges) {
    if (e.a == e.b) throw GraphError("graph: self-loop on " + e.a);
    if (!has_language(e.a) || !has_language(e.b)) {
      throw GraphError("graph: edge " + e.a + "-" + e.b + " uses an unknown language");
    }
    if (e.samples < 0) throw GraphError("graph: negative sample count on " + e.a + "-" + e.b);
    if (e.b < e.a) std::swap(e.a, e.b);
    if (!seen.emplace(e.a, e.b).second) throw GraphError("graph: duplicate edge " + e.a + "-" + e.b);
    const int ia = index_of(e.a), ib = index_of(e.b);
    adjacency_[static_cast<std::size_t>(ia)].push_back(ib);
    adjacency_[static_cast<std::size_t>(ib)].push_back(ia);
    edges_.push_back(std::move(e));
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  std::sort(edges_.begin(), edges_.end(),
            [](const GraphEdge& x, const GraphEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
}

TranslationGraph TranslationGraph::chain(int k, int samples_per_edge) {
  std::vector<LanguageId> langs;
  std::vector<GraphEdge> edges;
  for (int i = 0; i < k; ++i) langs.push_back(language_name(i, k));
  for (int i = 0; i + 1 < k; ++i) edges.push_back({langs[static_cast<std::size_t>(i)], langs[static_cast<std::size_t>(i + 1)], samples_per_edge});
  return {std::move(langs), std::move(edges)};
}

TranslationGraph TranslationGraph::complete(int k, int samples_per_edge) {
  std::vector<LanguageId> langs;
  std::vector<GraphEdge> edges;
  for (int i = 0; i < k; ++i) langs.push_back(language_name(i, k));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) edges.push_back({langs[static_cast<std::size_t>(i)], langs[static_cast<std::size_t>(j)], samples_per_edge});
  }
  return {std::move(langs), std::move(edges)};
}

bool TranslationGraph::has_language(const LanguageId& l) const {
  return std::binary_search(languages_.begin(), languages_.end(), l);
}

int TranslationGraph::index_of(const LanguageId& l) const {
  auto it = std::lower_bound(languages_.begin(), languages_.end(), l);
  if (it == languages_.end() || *it != l) throw ArgumentError("unknown language " + l);
  return static_cast<int>(it - languages_.begin());
}

const GraphEdge* TranslationGraph::find_edge(const LanguageId& x, const LanguageId& y) const {
  const auto& a = std::min(x, y);
  const auto& b = std::max(x, y);
  for (const auto& e : edges_) {
    if (e.a == a && e.b == b) return &e;
  }
  return nullptr;
}

std::vector<int> TranslationGraph::bfs_parents(int root) const {
  std::vector<int> parent(languages_.size(), -1);
  std::vector<bool> seen(languages_.size(), false);
  std::deque<int> queue{root};
  seen[static_cast<std::size_t>(root)] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adjacency_[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
    }
  }
  return parent;
}

bool TranslationGraph::connected() const {
  const auto parent = bfs_parents(0);
  for (std::size_t i = 1; i < parent.size(); ++i) {
    if (parent[i] < 0) return false;
  }
  return true;
}

void TranslationGraph::require_connected() const {
  const auto parent = bfs_parents(0);
  for (std::size_t i = 1; i < parent.size(); ++i) {
    if (parent[i] < 0) {
      throw GraphError("graph is not connected: " + languages_[i] + " is unreachable from " + languages_[0]);
    }
  }
}

}  // namespace umt
