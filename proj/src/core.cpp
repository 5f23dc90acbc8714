#include "fostat/core.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fostat {

int Signature::index_of(const std::string& name) const {
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

const RelationInfo& Signature::require(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw DomainError("unknown relation '" + name + "'");
  return relations[i];
}

Structure::Structure(Signature sig, int n, std::vector<std::vector<Tuple>> tuples)
    : sig_(std::move(sig)), n_(n), tuples_(std::move(tuples)) {
  if (n_ < 0) throw DomainError("negative domain size");
  std::set<std::string> names;
  for (const auto& rel : sig_.relations) {
    if (rel.arity < 1) throw DomainError("relation '" + rel.name + "' has arity < 1");
    if (rel.symmetric && rel.arity != 2)
      throw DomainError("relation '" + rel.name + "' marked symmetric but arity != 2");
    if (!names.insert(rel.name).second)
      throw DomainError("duplicate relation name '" + rel.name + "'");
  }
  if (tuples_.size() != sig_.relations.size())
    throw DomainError("tuple table count does not match signature");

  for (size_t i = 0; i < tuples_.size(); ++i) {
    const auto& rel = sig_.relations[i];
    auto& ts = tuples_[i];
    for (const auto& t : ts) {
      if (static_cast<int>(t.size()) != rel.arity)
        throw DomainError("relation '" + rel.name + "': tuple of length " +
                          std::to_string(t.size()) + ", expected " + std::to_string(rel.arity));
      for (int v : t)
        if (v < 0 || v >= n_)
          throw DomainError("relation '" + rel.name + "': vertex " + std::to_string(v) +
                            " out of range [0," + std::to_string(n_) + ")");
    }
    if (rel.symmetric) {
      size_t orig = ts.size();
      for (size_t j = 0; j < orig; ++j) ts.push_back({ts[j][1], ts[j][0]});
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }

  adjacency_.assign(n_, {});
  for (const auto& ts : tuples_)
    for (const auto& t : ts)
      for (size_t a = 0; a < t.size(); ++a)
        for (size_t b = a + 1; b < t.size(); ++b)
          if (t[a] != t[b]) {
            adjacency_[t[a]].push_back(t[b]);
            adjacency_[t[b]].push_back(t[a]);
          }
  for (auto& nb : adjacency_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

bool Structure::has_tuple(int relation, const Tuple& t) const {
  const auto& ts = tuples_[relation];
  return std::binary_search(ts.begin(), ts.end(), t);
}

const std::vector<int>& Structure::neighbors(int v) const {
  check_vertex(v);
  return adjacency_[v];
}

void Structure::check_vertex(int v) const {
  if (v < 0 || v >= n_)
    throw DomainError("vertex " + std::to_string(v) + " out of range [0," +
                      std::to_string(n_) + ")");
}

std::vector<int> bfs_distances(const Structure& s, const VertexSet& sources) {
  std::vector<int> dist(s.size(), kInfiniteDistance);
  std::deque<int> queue;
  for (int v : sources) {
    s.check_vertex(v);
    if (dist[v] == kInfiniteDistance) {
      dist[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int w : s.neighbors(u))
      if (dist[w] == kInfiniteDistance) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

int distance(const Structure& s, int u, int v) {
  s.check_vertex(u);
  s.check_vertex(v);
  if (u == v) return 0;
  // plain BFS from u, stopping early when v is reached
  std::vector<int> dist(s.size(), kInfiniteDistance);
  std::deque<int> queue;
  dist[u] = 0;
  queue.push_back(u);
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int w : s.neighbors(a)) {
      if (dist[w] == kInfiniteDistance) {
        dist[w] = dist[a] + 1;
        if (w == v) return dist[w];
        queue.push_back(w);
      }
    }
  }
  return kInfiniteDistance;
}

VertexSet ball(const Structure& s, int center, int r) { return ball(s, VertexSet{center}, r); }

VertexSet ball(const Structure& s, const VertexSet& centers, int r) {
  auto dist = bfs_distances(s, centers);
  VertexSet out;
  for (int v = 0; v < s.size(); ++v)
    if (dist[v] != kInfiniteDistance && dist[v] <= r) out.push_back(v);
  return out;
}

InducedResult induced(const Structure& s, const VertexSet& X) {
  std::vector<int> relabel(s.size(), -1);
  std::vector<int> vertex_map;
  vertex_map.reserve(X.size());
  int next = 0;
  for (int v : X) {
    s.check_vertex(v);
    if (relabel[v] != -1) throw DomainError("duplicate vertex in induced set");
    relabel[v] = next++;
    vertex_map.push_back(v);
  }
  std::vector<std::vector<Tuple>> kept(s.signature().relations.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    for (const auto& t : s.tuples(static_cast<int>(i))) {
      Tuple mapped(t.size());
      bool inside = true;
      for (size_t j = 0; j < t.size(); ++j) {
        if (relabel[t[j]] == -1) {
          inside = false;
          break;
        }
        mapped[j] = relabel[t[j]];
      }
      if (inside) kept[i].push_back(std::move(mapped));
    }
  }
  return {Structure(s.signature(), static_cast<int>(X.size()), std::move(kept)),
          std::move(vertex_map)};
}

std::vector<VertexSet> components(const Structure& s) {
  std::vector<bool> seen(s.size(), false);
  std::vector<VertexSet> parts;
  for (int v = 0; v < s.size(); ++v) {
    if (seen[v]) continue;
    VertexSet part;
    std::deque<int> queue{v};
    seen[v] = true;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      part.push_back(u);
      for (int w : s.neighbors(u))
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  // BFS visits vertices in increasing start order, so parts are already
  // ordered by minimum vertex.
  return parts;
}

VertexSet complement(const Structure& s, const VertexSet& X) {
  std::vector<bool> in(s.size(), false);
  for (int v : X) {
    s.check_vertex(v);
    in[v] = true;
  }
  VertexSet out;
  for (int v = 0; v < s.size(); ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_file(const std::string& origin, const std::string& msg) {
  throw DomainError(origin + ": " + msg);
}

}  // namespace

Structure load_structure(std::istream& in, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad_file(origin, e.what());
  }
  if (!doc.is_object()) bad_file(origin, "top-level value must be an object");
  if (!doc.contains("signature") || !doc["signature"].is_object())
    bad_file(origin, "missing \"signature\" object");
  if (!doc.contains("domain") || !doc["domain"].is_number_integer())
    bad_file(origin, "missing integer \"domain\"");

  Signature sig;
  for (const auto& [name, spec] : doc["signature"].items()) {
    if (!spec.is_object() || !spec.contains("arity"))
      bad_file(origin, "signature entry '" + name + "' must be {\"arity\":int[,\"symmetric\":bool]}");
    RelationInfo rel;
    rel.name = name;
    rel.arity = spec["arity"].get<int>();
    rel.symmetric = spec.value("symmetric", false);
    sig.relations.push_back(std::move(rel));
  }

  int n = doc["domain"].get<int>();
  std::vector<std::vector<Tuple>> tuples(sig.relations.size());
  if (doc.contains("relations")) {
    if (!doc["relations"].is_object()) bad_file(origin, "\"relations\" must be an object");
    for (const auto& [name, rows] : doc["relations"].items()) {
      int idx = sig.index_of(name);
      if (idx < 0) bad_file(origin, "relation '" + name + "' not declared in signature");
      if (!rows.is_array()) bad_file(origin, "relation '" + name + "' must map to a list of tuples");
      for (size_t row = 0; row < rows.size(); ++row) {
        const auto& r = rows[row];
        if (!r.is_array())
          bad_file(origin, "relation '" + name + "', entry " + std::to_string(row) +
                               ": expected a list of vertices");
        Tuple t;
        for (const auto& x : r) {
          if (!x.is_number_integer())
            bad_file(origin, "relation '" + name + "', entry " + std::to_string(row) +
                                 ": vertices must be integers");
          t.push_back(x.get<int>());
        }
        tuples[idx].push_back(std::move(t));
      }
    }
  }
  try {
    return Structure(std::move(sig), n, std::move(tuples));
  } catch (const DomainError& e) {
    bad_file(origin, e.what());
  }
}

Structure load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open structure file '" + path + "'");
  return load_structure(in, path);
}

void save_structure(const Structure& s, std::ostream& out) {
  json sig = json::object();
  for (const auto& rel : s.signature().relations) {
    sig[rel.name] = {{"arity", rel.arity}, {"symmetric", rel.symmetric}};
  }
  json rels = json::object();
  for (size_t i = 0; i < s.signature().relations.size(); ++i) {
    json rows = json::array();
    for (const auto& t : s.tuples(static_cast<int>(i))) rows.push_back(t);
    rels[s.signature().relations[i].name] = std::move(rows);
  }
  json doc = {{"signature", std::move(sig)}, {"domain", s.size()}, {"relations", std::move(rels)}};
  out << doc.dump(2) << "\n";
}

void save_structure_file(const Structure& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open output file '" + path + "'");
  save_structure(s, out);
}

}  // namespace fostat
