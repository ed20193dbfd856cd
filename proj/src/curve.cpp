#include "ucauchy/curve.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <utility>

namespace ucauchy {

namespace {

using Cell = std::pair<std::int64_t, std::int64_t>;

Cell cell_of(Point z, double s) {
  return {static_cast<std::int64_t>(std::floor(z.real() / s)),
          static_cast<std::int64_t>(std::floor(z.imag() / s))};
}

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    return std::hash<std::int64_t>()(c.first * 73856093LL ^ c.second * 19349663LL);
  }
};

// Dyadic squares of side 2^j whose triple contains some vertex, in index order.
std::vector<Square> squares_whose_triple_meets(const std::vector<Point>& pts, int j) {
  const double s = std::ldexp(1.0, j);
  std::set<Cell> cells;
  for (Point p : pts) {
    const Cell c = cell_of(p, s);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) cells.insert({c.first + dx, c.second + dy});
  }
  std::vector<Square> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) out.push_back(Square::dyadic(j, c.first, c.second));
  return out;
}

}  // namespace

Net build_net(const PointCloudMeasure& mu, double tau, double l0) {
  require(tau > 0.0 && tau < 1.0 / 16.0, "build_net: tau must lie in (0, 1/16)");
  require(l0 > 0.0, "build_net: l0 must be positive");
  dyadic_exponent(l0);
  const double sep = tau * l0;
  require(sep >= 2.0 * mu.mesh(), "build_net: tau*l0 is below twice the mesh (net finer than data)");

  Net net;
  net.separation = sep;
  net.source = mu.label();
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> grid;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point p = mu.point(i);
    const Cell c = cell_of(p, sep);
    bool covered = false;
    for (int dx = -1; dx <= 1 && !covered; ++dx)
      for (int dy = -1; dy <= 1 && !covered; ++dy) {
        const auto it = grid.find({c.first + dx, c.second + dy});
        if (it == grid.end()) continue;
        for (std::size_t v : it->second)
          if (dist(net.points[v], p) < sep) {
            covered = true;
            break;
          }
      }
    if (covered) continue;
    grid[c].push_back(net.points.size());
    net.points.push_back(p);
    net.source_index.push_back(i);
  }
  return net;
}

NetGraph::NetGraph(Net net)
    : net_(std::move(net)),
      adj_(net_.points.size()),
      index_(std::make_shared<const SpatialIndex>(net_.points)) {}

bool NetGraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& a = adj_[i].size() <= adj_[j].size() ? adj_[i] : adj_[j];
  for (std::size_t id : a) {
    const Edge& e = edges_[id];
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return true;
  }
  return false;
}

bool NetGraph::add_edge(std::size_t i, std::size_t j, EdgeKind kind, const Square& q,
                        double scale) {
  require(i < vertex_count() && j < vertex_count(), "add_edge: vertex out of range");
  if (i == j || has_edge(i, j)) return false;
  adj_[i].push_back(edges_.size());
  adj_[j].push_back(edges_.size());
  edges_.push_back({i, j, kind, q, scale, dist(vertex(i), vertex(j))});
  return true;
}

NetGraph NetGraph::without_edge(std::size_t id) const {
  NetGraph g(net_);
  for (std::size_t k = 0; k < edges_.size(); ++k)
    if (k != id) g.add_edge(edges_[k].i, edges_[k].j, edges_[k].kind, edges_[k].q, edges_[k].scale);
  return g;
}

std::vector<std::vector<std::size_t>> subgraph_components(const NetGraph& g, const Square& q,
                                                          double max_scale) {
  const auto verts = g.index().within(q.dilate(7.0));  // ascending
  const auto local = [&](std::size_t v) -> std::ptrdiff_t {
    const auto it = std::lower_bound(verts.begin(), verts.end(), v);
    return it != verts.end() && *it == v ? it - verts.begin() : -1;
  };
  std::vector<char> seen(verts.size(), 0);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < verts.size(); ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    std::vector<std::size_t> comp;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      comp.push_back(verts[a]);
      for (std::size_t id : g.incident(verts[a])) {
        const Edge& e = g.edges()[id];
        if (!edge_visible(e, max_scale)) continue;
        const std::ptrdiff_t b = local(e.i == verts[a] ? e.j : e.i);
        if (b < 0 || seen[b]) continue;
        seen[b] = 1;
        stack.push_back(static_cast<std::size_t>(b));
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;  // ordered by first vertex since seeds are visited in ascending order
}

std::vector<std::vector<std::size_t>> components_meeting_3q(const NetGraph& g, const Square& q,
                                                            double max_scale) {
  const Square q3 = q.dilate(3.0);
  auto comps = subgraph_components(g, q, max_scale);
  std::erase_if(comps, [&](const std::vector<std::size_t>& c) {
    return std::none_of(c.begin(), c.end(), [&](std::size_t v) { return q3.contains(g.vertex(v)); });
  });
  return comps;
}

std::size_t fixed_point(const NetGraph& g, const Square& q) {
  std::size_t best = npos;
  double bd = 0.0;
  for (std::size_t v : g.index().within(q.dilate(3.0))) {
    const double d = dist2(g.vertex(v), q.center());
    if (best == npos || d < bd) best = v, bd = d;  // ascending order keeps the lowest index on ties
  }
  return best;
}

std::size_t base_step(NetGraph& g, double l0) {
  std::size_t added = 0;
  for (const Square& q : squares_whose_triple_meets(g.net().points, dyadic_exponent(l0))) {
    const std::size_t f = fixed_point(g, q);
    if (f == npos) continue;
    for (std::size_t v : g.index().within(q.dilate(3.0)))
      if (g.add_edge(f, v, EdgeKind::Base, q, l0)) ++added;
  }
  return added;
}

double LengthLedger::inductive_total() const {
  double s = 0.0;
  for (const LedgerEntry& e : inductive) s += e.added_length;
  return s;
}

void inductive_step(NetGraph& g, double l, LengthLedger& ledger) {
  struct Pending {
    Square q;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
  };
  std::vector<Pending> pending;
  for (const Square& q : squares_whose_triple_meets(g.net().points, dyadic_exponent(2.0 * l))) {
    const auto comps = components_meeting_3q(g, q);
    if (comps.size() < 2) continue;
    const Square q3 = q.dilate(3.0);
    const std::size_t f = fixed_point(g, q);
    Pending p{q, {}};
    for (const auto& c : comps) {
      const auto rep = std::find_if(c.begin(), c.end(), [&](std::size_t v) { return q3.contains(g.vertex(v)); });
      if (*rep != f) p.edges.emplace_back(*rep, f);
    }
    pending.push_back(std::move(p));
  }
  // Insert only after every square at this scale has read the old graph.
  for (const Pending& p : pending) {
    LedgerEntry entry{p.q, l, 0.0, 0};
    for (auto [a, b] : p.edges)
      if (g.add_edge(a, b, EdgeKind::Inductive, p.q, l)) {
        entry.added_length += g.edges().back().length;
        ++entry.edge_count;
      }
    ledger.inductive.push_back(entry);
  }
}

GraphBuild build_graph(const PointCloudMeasure& mu, const Square& p, double tau, double l0) {
  require(p.is_dyadic(), "build_graph: P must be dyadic");
  const int d = p.index()->j - dyadic_exponent(l0);
  require(d >= 1, "build_graph: l0 must be l(P) 2^-d with d >= 1");
  GraphBuild out{NetGraph(build_net(mu, tau, l0)), {}, l0, tau, p};
  base_step(out.graph, l0);
  for (const Edge& e : out.graph.edges()) out.ledger.base_total += e.length;
  for (double l = l0; l < p.side(); l *= 2.0) inductive_step(out.graph, l, out.ledger);
  return out;
}

Point PolylineCurve::operator()(double t) const {
  require(!points.empty(), "empty curve");
  if (total == 0.0 || points.size() == 1) return points.front();
  const double s = std::clamp(t, 0.0, 1.0) * total;
  auto it = std::upper_bound(cumulative_length.begin(), cumulative_length.end(), s);
  std::size_t k = static_cast<std::size_t>(it - cumulative_length.begin());
  if (k >= points.size()) return points.back();
  const double seg = cumulative_length[k] - cumulative_length[k - 1];
  const double u = seg > 0.0 ? (s - cumulative_length[k - 1]) / seg : 0.0;
  return points[k - 1] + u * (points[k] - points[k - 1]);
}

double PolylineCurve::distance(Point z) const {
  require(!points.empty(), "empty curve");
  double d = dist(z, points.front());
  for (std::size_t k = 1; k < points.size(); ++k)
    d = std::min(d, segment_distance(z, points[k - 1], points[k]));
  return d;
}

PolylineCurve euler_walk(const NetGraph& g, const Square& p) {
  const Square p3 = p.dilate(3.0);
  const auto comps = components_meeting_3q(g, p);
  require(!comps.empty(), "euler_walk: no net vertex in 3P");
  // Component holding the lowest-index vertex of 3P; start the circuit there.
  std::size_t start = npos;
  for (const auto& c : comps)
    for (std::size_t v : c)
      if (p3.contains(g.vertex(v)) && (start == npos || v < start)) start = v;
  const auto& comp = *std::find_if(comps.begin(), comps.end(), [&](const std::vector<std::size_t>& c) {
    return std::binary_search(c.begin(), c.end(), start);
  });

  // Doubled edge list of the component; copy 2e and 2e+1 share edge e.
  std::vector<std::size_t> edge_ids;
  for (std::size_t v : comp)
    for (std::size_t id : g.incident(v)) {
      const Edge& e = g.edges()[id];
      if (e.i == v && std::binary_search(comp.begin(), comp.end(), e.j)) edge_ids.push_back(id);
    }
  std::sort(edge_ids.begin(), edge_ids.end());
  std::unordered_map<std::size_t, std::vector<std::size_t>> out_copies;
  for (std::size_t k = 0; k < edge_ids.size(); ++k) {
    const Edge& e = g.edges()[edge_ids[k]];
    out_copies[e.i].push_back(2 * k);
    out_copies[e.j].push_back(2 * k);
    out_copies[e.i].push_back(2 * k + 1);
    out_copies[e.j].push_back(2 * k + 1);
  }
  std::vector<char> used(2 * edge_ids.size(), 0);
  std::unordered_map<std::size_t, std::size_t> cursor;

  // Iterative Hierholzer: splice sub-circuits as the stack unwinds.
  std::vector<std::size_t> stack{start}, circuit;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    auto& lst = out_copies[v];
    std::size_t& c = cursor[v];
    while (c < lst.size() && used[lst[c]]) ++c;
    if (c == lst.size()) {
      circuit.push_back(v);
      stack.pop_back();
      continue;
    }
    const std::size_t copy = lst[c];
    used[copy] = 1;
    const Edge& e = g.edges()[edge_ids[copy / 2]];
    stack.push_back(e.i == v ? e.j : e.i);
  }
  std::reverse(circuit.begin(), circuit.end());

  PolylineCurve curve;
  curve.vertex_walk = circuit;
  double acc = 0.0;
  for (std::size_t k = 0; k < circuit.size(); ++k) {
    const Point z = g.vertex(circuit[k]);
    if (k > 0) acc += dist(curve.points.back(), z);
    curve.points.push_back(z);
    curve.cumulative_length.push_back(acc);
  }
  curve.total = acc;
  curve.lip_constant = acc;
  return curve;
}

bool separation_check(const NetGraph& g, const Square& q, double l) {
  const auto comps = components_meeting_3q(g, q, l);
  if (comps.size() < 2) return true;
  const Square q3 = q.dilate(3.0);
  std::unordered_map<std::size_t, std::size_t> label;
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t v : comps[c])
      if (q3.contains(g.vertex(v))) label[v] = c;
  for (const auto& [v, c] : label)
    for (std::size_t u : g.index().within(g.vertex(v), l)) {
      const auto it = label.find(u);
      if (it != label.end() && it->second != c && dist(g.vertex(u), g.vertex(v)) < l) return false;
    }
  return true;
}

}  // namespace ucauchy
