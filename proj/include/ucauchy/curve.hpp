#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ucauchy/dyadic.hpp"
#include "ucauchy/measure.hpp"
#include "ucauchy/spatial.hpp"

namespace ucauchy {

// Maximal separated subset of the support, built greedily in index order.
struct Net {
  std::vector<Point> points;
  std::vector<std::size_t> source_index;  // index of each net point in the measure
  double separation = 0.0;
  std::string source;
};

// Rejects tau outside (0, 1/16), l0 not a power of two, or tau*l0 < 2 mesh.
Net build_net(const PointCloudMeasure& mu, double tau, double l0);

enum class EdgeKind { Base, Inductive };

struct Edge {
  std::size_t i = 0, j = 0;
  EdgeKind kind = EdgeKind::Base;
  Square q{{0.0, 0.0}, 1.0};
  double scale = 0.0;  // l0 for base edges, l with l(Q) = 2l for inductive ones
  double length = 0.0;
};

// Net plus tagged edges. Parallel edges between the same pair are refused.
class NetGraph {
 public:
  explicit NetGraph(Net net);

  const Net& net() const { return net_; }
  std::size_t vertex_count() const { return net_.points.size(); }
  Point vertex(std::size_t v) const { return net_.points[v]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const SpatialIndex& index() const { return *index_; }
  // Edge ids incident to v.
  const std::vector<std::size_t>& incident(std::size_t v) const { return adj_[v]; }

  bool has_edge(std::size_t i, std::size_t j) const;
  // Adds the edge unless it is a self-loop or already present; returns whether added.
  bool add_edge(std::size_t i, std::size_t j, EdgeKind kind, const Square& q, double scale);
  // Copy without edge `id` (used for negative controls).
  NetGraph without_edge(std::size_t id) const;

 private:
  Net net_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::shared_ptr<const SpatialIndex> index_;
};

// Only base edges and inductive edges with scale < max_scale take part.
inline bool edge_visible(const Edge& e, double max_scale) {
  return e.kind == EdgeKind::Base || e.scale < max_scale;
}

constexpr double kAllScales = std::numeric_limits<double>::infinity();

// Components of the subgraph on the net vertices in 7Q, keeping edges with both
// endpoints in 7Q. Each component is sorted; components ordered by first vertex.
std::vector<std::vector<std::size_t>> subgraph_components(const NetGraph& g, const Square& q,
                                                          double max_scale = kAllScales);
// The subset of those components that meet 3Q.
std::vector<std::vector<std::size_t>> components_meeting_3q(const NetGraph& g, const Square& q,
                                                            double max_scale = kAllScales);

// Net vertex of 3Q nearest the centre of Q, lowest index on ties; npos if none.
std::size_t fixed_point(const NetGraph& g, const Square& q);
constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Star edges for every dyadic Q of side l0 with 3Q meeting the net. Returns the
// number of edges added.
std::size_t base_step(NetGraph& g, double l0);

struct LedgerEntry {
  Square q;
  double scale = 0.0;
  double added_length = 0.0;
  std::size_t edge_count = 0;
};

struct LengthLedger {
  double base_total = 0.0;
  std::vector<LedgerEntry> inductive;  // one entry per square of the family Q(P, l0)
  double inductive_total() const;
  double total() const { return base_total + inductive_total(); }
};

// Joins the components meeting 3Q for every dyadic Q of side 2l, reading the
// graph as it stood before this scale. New edges are tagged Inductive(Q, l)
// and recorded in the ledger.
void inductive_step(NetGraph& g, double l, LengthLedger& ledger);

struct GraphBuild {
  NetGraph graph;
  LengthLedger ledger;
  double l0 = 0.0;
  double tau = 0.0;
  Square p;
};

// Net, base step, then inductive steps at l = l0, 2 l0, ..., l(P)/2.
GraphBuild build_graph(const PointCloudMeasure& mu, const Square& p, double tau, double l0);

// Constant-speed parametrisation of a closed walk through net vertices.
struct PolylineCurve {
  std::vector<std::size_t> vertex_walk;
  std::vector<Point> points;
  std::vector<double> cumulative_length;
  double total = 0.0;
  double lip_constant = 0.0;

  Point operator()(double t) const;
  // Distance from z to the polyline.
  double distance(Point z) const;
};

// Eulerian circuit of the doubled component meeting 3P, started at its lowest
// vertex in 3P. Throws ConfigError when no net vertex lies in 3P.
PolylineCurve euler_walk(const NetGraph& g, const Square& p);

// Distinct components of the Q-subgraph (edges of scale < l) meeting 3Q are at
// least l apart within 3Q.
bool separation_check(const NetGraph& g, const Square& q, double l);

}  // namespace ucauchy
