#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fostat/errors.hpp"

namespace fostat {

struct RelationInfo {
  std::string name;
  int arity = 0;
  bool symmetric = false;  // only meaningful for arity 2

  friend bool operator==(const RelationInfo&, const RelationInfo&) = default;
};

/// Vocabulary of a relational structure: an ordered list of relation symbols.
struct Signature {
  std::vector<RelationInfo> relations;

  /// Index of a relation by name, -1 if absent.
  int index_of(const std::string& name) const;
  const RelationInfo& require(const std::string& name) const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

using Tuple = std::vector<int>;

/// Sorted duplicate-free set of vertices.
using VertexSet = std::vector<int>;

constexpr int kInfiniteDistance = -1;

/// `d <= bound` with kInfiniteDistance counting as +infinity.
inline bool distance_leq(int d, int bound) { return d != kInfiniteDistance && d <= bound; }

/// Finite relational structure with domain {0..n-1}. Immutable after
/// construction; the Gaifman adjacency is built once up front.
class Structure {
 public:
  Structure() = default;

  /// Validates ranges and arities, closes symmetric relations under
  /// transposition, sorts and deduplicates tuple sets.
  Structure(Signature sig, int n, std::vector<std::vector<Tuple>> tuples);

  const Signature& signature() const { return sig_; }
  int size() const { return n_; }

  const std::vector<Tuple>& tuples(int relation) const { return tuples_[relation]; }
  bool has_tuple(int relation, const Tuple& t) const;

  /// Sorted Gaifman neighbor list of v.
  const std::vector<int>& neighbors(int v) const;

  void check_vertex(int v) const;

  /// Labeled equality: same signature, domain size, and tuple sets.
  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  Signature sig_;
  int n_ = 0;
  std::vector<std::vector<Tuple>> tuples_;
  std::vector<std::vector<int>> adjacency_;
};

/// BFS distance in the Gaifman graph, kInfiniteDistance across components.
int distance(const Structure& s, int u, int v);

/// Distances from a set of sources; kInfiniteDistance where unreached.
std::vector<int> bfs_distances(const Structure& s, const VertexSet& sources);

/// All vertices at Gaifman distance <= r from some center.
VertexSet ball(const Structure& s, int center, int r);
VertexSet ball(const Structure& s, const VertexSet& centers, int r);

struct InducedResult {
  Structure structure;
  std::vector<int> vertex_map;  // new index -> original vertex id
};

/// Substructure induced by X, relabeled to 0..|X|-1 preserving order.
InducedResult induced(const Structure& s, const VertexSet& X);

/// Gaifman connected components, ordered by minimum vertex.
std::vector<VertexSet> components(const Structure& s);

/// Complement of X in the domain.
VertexSet complement(const Structure& s, const VertexSet& X);

// --- structure file format (JSON) ---

Structure load_structure(std::istream& in, const std::string& origin = "<input>");
Structure load_structure_file(const std::string& path);
void save_structure(const Structure& s, std::ostream& out);
void save_structure_file(const Structure& s, const std::string& path);

}  // namespace fostat
