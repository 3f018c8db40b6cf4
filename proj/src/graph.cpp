#include "wordgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "wordgraph/detail/parallel.hpp"
#include "wordgraph/detail/textio.hpp"
#include "wordgraph/errors.hpp"

namespace wordgraph {

SimilarityGraph SimilarityGraph::build(std::vector<std::string> labels,
                                       std::vector<WeightedEdge> edges) {
  SimilarityGraph g;
  g.labels_ = std::move(labels);
  const std::size_t n = g.labels_.size();

  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.labels_[i].empty()) throw DomainError("empty node label at id " + std::to_string(i));
    if (!g.index_.emplace(g.labels_[i], static_cast<NodeId>(i)).second)
      throw DomainError("duplicate node label: " + g.labels_[i]);
  }

  for (auto& e : edges) {
    if (e.a >= n || e.b >= n)
      throw DomainError("edge endpoint out of range: " + std::to_string(e.a) + "," +
                        std::to_string(e.b));
    if (e.a == e.b)
      throw DomainError("self-loop on node " + g.labels_[e.a]);
    if (!(std::isfinite(e.weight) && e.weight > 0.0 && e.weight <= 1.0))
      throw DomainError("edge weight must be in (0, 1]: " + g.labels_[e.a] + " -- " +
                        g.labels_[e.b]);
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].a == edges[i - 1].a && edges[i].b == edges[i - 1].b)
      throw DomainError("parallel edge: " + g.labels_[edges[i].a] + " -- " +
                        g.labels_[edges[i].b]);
  }

  // CSR in two passes; per-node lists end up sorted by neighbor id because
  // the edge list is sorted and mirrored entries are placed in b-order.
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.nbr_.resize(2 * edges.size());
  g.weight_.resize(2 * edges.size());

  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : edges) {
    g.nbr_[cursor[e.a]] = e.b;
    g.weight_[cursor[e.a]++] = e.weight;
  }
  for (const auto& e : edges) {
    g.nbr_[cursor[e.b]] = e.a;
    g.weight_[cursor[e.b]++] = e.weight;
  }
  // The two placement passes leave each list as "greater ids first half,
  // smaller ids second half"; one per-node sort restores id order.
  std::vector<std::pair<NodeId, double>> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = g.offsets_[i];
    const std::size_t hi = g.offsets_[i + 1];
    scratch.clear();
    for (std::size_t p = lo; p < hi; ++p) scratch.emplace_back(g.nbr_[p], g.weight_[p]);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t p = lo; p < hi; ++p) {
      g.nbr_[p] = scratch[p - lo].first;
      g.weight_[p] = scratch[p - lo].second;
    }
  }

  g.degree_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t p = g.offsets_[i]; p < g.offsets_[i + 1]; ++p) sum += g.weight_[p];
    g.degree_[i] = sum;
  }
  g.total_weight_ = 0.0;
  for (const auto& e : edges) g.total_weight_ += e.weight;
  return g;
}

const std::string& SimilarityGraph::label(NodeId id) const {
  if (id >= labels_.size()) throw DomainError("invalid node id " + std::to_string(id));
  return labels_[id];
}

std::optional<NodeId> SimilarityGraph::find(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const NodeId> SimilarityGraph::neighbor_ids(NodeId id) const {
  if (id >= labels_.size()) throw DomainError("invalid node id " + std::to_string(id));
  return {nbr_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
}

std::span<const double> SimilarityGraph::neighbor_weights(NodeId id) const {
  if (id >= labels_.size()) throw DomainError("invalid node id " + std::to_string(id));
  return {weight_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
}

double SimilarityGraph::weighted_degree(NodeId id) const {
  if (id >= labels_.size()) throw DomainError("invalid node id " + std::to_string(id));
  return degree_[id];
}

std::vector<WeightedEdge> SimilarityGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (NodeId i = 0; i < labels_.size(); ++i) {
    const auto ids = neighbor_ids(i);
    const auto ws = neighbor_weights(i);
    for (std::size_t p = 0; p < ids.size(); ++p)
      if (i < ids[p]) out.push_back({i, ids[p], ws[p]});
  }
  return out;
}

SimilarityGraph build_graph(const EmbeddingStore& store, std::size_t k,
                            double floor, unsigned threads) {
  if (store.size() == 0) throw DomainError("cannot build a graph from an empty store");
  if (!(floor > 0.0 && floor < 1.0))
    throw DomainError("similarity floor must be in (0, 1)");

  const std::size_t n = store.size();
  std::vector<std::vector<SimilarNeighbor>> lists(n);
  detail::for_chunks(n, 256, threads,
                     [&](std::size_t begin, std::size_t end, std::size_t) {
                       for (std::size_t i = begin; i < end; ++i)
                         lists[i] = top_k_neighbors(store, static_cast<NodeId>(i), k, floor);
                     });

  // Union symmetrization: a pair is kept when either direction listed it.
  // Weights are bit-identical from both sides, so dedup keeps the first.
  std::vector<WeightedEdge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (const auto& nb : lists[i]) {
      const NodeId a = std::min(i, nb.word_index);
      const NodeId b = std::max(i, nb.word_index);
      edges.push_back({a, b, nb.similarity});
    }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const WeightedEdge& x, const WeightedEdge& y) {
                            return x.a == y.a && x.b == y.b;
                          }),
              edges.end());

  return SimilarityGraph::build(store.words(), std::move(edges));
}

InducedSubgraph induced_subgraph(const SimilarityGraph& g,
                                 std::span<const NodeId> nodes) {
  std::vector<NodeId> ids(nodes.begin(), nodes.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const NodeId id : ids)
    if (id >= g.node_count())
      throw DomainError("unknown node id in subgraph set: " + std::to_string(id));

  std::unordered_map<NodeId, NodeId> remap;
  remap.reserve(ids.size());
  std::vector<std::string> labels;
  labels.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    remap.emplace(ids[i], static_cast<NodeId>(i));
    labels.push_back(g.label(ids[i]));
  }

  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const NodeId orig = ids[i];
    const auto nbrs = g.neighbor_ids(orig);
    const auto ws = g.neighbor_weights(orig);
    for (std::size_t p = 0; p < nbrs.size(); ++p) {
      if (nbrs[p] <= orig) continue;  // each edge once, from the smaller end
      const auto it = remap.find(nbrs[p]);
      if (it != remap.end())
        edges.push_back({static_cast<NodeId>(i), it->second, ws[p]});
    }
  }

  InducedSubgraph out{SimilarityGraph::build(std::move(labels), std::move(edges)),
                      std::move(ids)};
  return out;
}

SimilarityGraph load_edges(std::istream& in) {
  struct RawEdge {
    std::string a, b;
    double w;
  };
  std::vector<RawEdge> raw;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;

  std::string line;
  std::size_t line_no = 0;
  bool blank_tail = false;
  while (detail::getline_crlf(in, line)) {
    ++line_no;
    if (line.empty()) {
      blank_tail = true;
      continue;
    }
    if (blank_tail)
      throw ParseError("blank line inside edge list", line_no - 1);
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 3)
      throw ParseError("expected 3 tab-separated fields", line_no);
    if (fields[0].empty() || fields[1].empty())
      throw ParseError("empty word field", line_no);
    if (fields[0] == fields[1])
      throw ParseError("self-loop on word: " + std::string(fields[0]), line_no);
    double w = 0.0;
    if (!detail::parse_double(fields[2], w))
      throw ParseError("malformed weight", line_no);
    if (!(std::isfinite(w) && w > 0.0 && w <= 1.0))
      throw ParseError("edge weight must be in (0, 1]", line_no);

    std::string a(fields[0]);
    std::string b(fields[1]);
    if (a > b) std::swap(a, b);
    if (!seen.emplace(std::make_pair(a, b), line_no).second)
      throw ParseError("duplicate edge: " + a + " -- " + b, line_no);
    raw.push_back({std::move(a), std::move(b), w});
  }

  // Node ids by sorted word order, so loading is canonical regardless of
  // the line order in the input.
  std::vector<std::string> labels;
  labels.reserve(2 * raw.size());
  for (const auto& e : raw) {
    labels.push_back(e.a);
    labels.push_back(e.b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::unordered_map<std::string_view, NodeId> id_of;
  id_of.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    id_of.emplace(labels[i], static_cast<NodeId>(i));

  std::vector<WeightedEdge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw)
    edges.push_back({id_of.at(e.a), id_of.at(e.b), e.w});

  return SimilarityGraph::build(std::move(labels), std::move(edges));
}

SimilarityGraph load_edges_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open edge file: " + path);
  return load_edges(in);
}

void save_edges(const SimilarityGraph& g, std::ostream& out) {
  struct Line {
    std::string_view a, b;
    double w;
  };
  std::vector<Line> lines;
  lines.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    std::string_view la = g.label(e.a);
    std::string_view lb = g.label(e.b);
    if (la > lb) std::swap(la, lb);
    lines.push_back({la, lb, e.weight});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  for (const auto& l : lines)
    out << l.a << '\t' << l.b << '\t' << detail::format_fixed(l.w) << '\n';
}

void save_edges_file(const SimilarityGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  save_edges(g, out);
  if (!out) throw IoError("write failed: " + path);
}

void write_graphml(const SimilarityGraph& g, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (NodeId i = 0; i < g.node_count(); ++i)
    out << "    <node id=\"n" << i << "\"><data key=\"label\">"
        << detail::xml_escape(g.label(i)) << "</data></node>\n";
  for (const auto& e : g.edges())
    out << "    <edge source=\"n" << e.a << "\" target=\"n" << e.b
        << "\"><data key=\"weight\">" << detail::format_fixed(e.weight)
        << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";
}

void write_dot(const SimilarityGraph& g, std::ostream& out) {
  out << "graph wordgraph {\n";
  for (NodeId i = 0; i < g.node_count(); ++i)
    out << "  n" << i << " [label=\"" << detail::dot_escape(g.label(i)) << "\"];\n";
  for (const auto& e : g.edges())
    out << "  n" << e.a << " -- n" << e.b << " [label=\""
        << detail::format_fixed(e.weight) << "\"];\n";
  out << "}\n";
}

}  // namespace wordgraph
