#pragma once

#include <optional>
#include <vector>

#include "ucauchy/curve.hpp"
#include "ucauchy/dyadic.hpp"
#include "ucauchy/measure.hpp"

namespace ucauchy {

struct BadWitness {
  Square q;
  Point zeta, xi;  // support points in B(z_Q, 10 l(Q)), at least l(Q)/2 apart
  Point z;         // point of [zeta, xi]
  double clearance = 0.0;  // distance from z to the support
};

// Smallest side accepted by is_bad: tau l(Q) must cover 8 mesh.
double bad_floor(const PointCloudMeasure& mu, double tau);

// Searches for a bad-square witness with clearance >= tau l(Q) + mesh.
// Candidates are a tau l(Q)/4 net of the support in B(z_Q, 10 l(Q)); each
// candidate segment is sampled with step tau l(Q)/2. The first witnessing pair
// in candidate order is reported with its maximum-clearance point.
std::optional<BadWitness> is_bad(const PointCloudMeasure& mu, const Square& q, double tau);

// Bad dyadic squares in P, levels 0..depth. Rejects depths below the floor.
std::vector<Square> bad_family(const PointCloudMeasure& mu, const Square& p, double tau, int depth);
// sum of l(Q)/l(P) over the family.
double carleson_norm(const std::vector<Square>& family, const Square& p);

struct InductiveBadReport {
  std::size_t checked = 0;
  std::size_t flagged = 0;
  std::vector<Square> excluded;  // below the resolution floor
  std::vector<Square> missed;    // checked but not certified bad
  double fraction() const { return checked == 0 ? 1.0 : static_cast<double>(flagged) / checked; }
};

// Runs is_bad on every square of the ledger's family.
InductiveBadReport inductive_implies_bad(const PointCloudMeasure& mu, const LengthLedger& ledger,
                                         double tau);

}  // namespace ucauchy
