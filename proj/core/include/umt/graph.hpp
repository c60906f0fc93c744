#pragma once

#include <optional>
#include <string>
#include <vector>

#include "umt/discrete.hpp"

namespace umt {

// An undirected edge with an aligned corpus of `samples` pairs. Endpoints are
// stored with a < b (string order), which is also the fitting direction.
struct GraphEdge {
  LanguageId a;
  LanguageId b;
  int samples = 0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Languages are kept in ascending string order; node index == rank in that
// order, so "ascending node id" and "lexicographic" agree everywhere.
class TranslationGraph {
 public:
  TranslationGraph(std::vector<LanguageId> languages, std::vector<GraphEdge> edges);

  // L0 - L1 - ... - L{k-1}, zero-padded when k > 10.
  static TranslationGraph chain(int k, int samples_per_edge);
  static TranslationGraph complete(int k, int samples_per_edge);

  const std::vector<LanguageId>& languages() const { return languages_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t size() const { return languages_.size(); }

  bool has_language(const LanguageId& l) const;
  int index_of(const LanguageId& l) const;  // throws ArgumentError
  const GraphEdge* find_edge(const LanguageId& x, const LanguageId& y) const;
  // Sorted ascending.
  const std::vector<int>& neighbors(int node) const { return adjacency_[static_cast<std::size_t>(node)]; }

  bool connected() const;
  // Throws GraphError naming an unreachable language.
  void require_connected() const;

  // Breadth-first parents from `root` (-1 for root/unreached), visiting
  // neighbours in ascending order.
  std::vector<int> bfs_parents(int root) const;

 private:
  std::vector<LanguageId> languages_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

std::string language_name(int index, int count);

}  // namespace umt
