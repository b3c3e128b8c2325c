#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fracg/fields.hpp"
#include "fracg/operator.hpp"
#include "fracg/solver.hpp"
#include "fracg/young.hpp"

namespace fracg {

/// Hyperplane {x[axis] = lambda} together with the half-space it audits.
struct ReflectionFrame {
  enum class HalfSpace { Below, Above };
  int axis = 0;
  double lambda = 0.0;
  HalfSpace half_space = HalfSpace::Below;

  Point mirror(const Point& x) const { return reflect_point(x, axis, lambda); }
  bool in_half_space(const Point& x) const {
    return half_space == HalfSpace::Below ? x.x[axis] < lambda : x.x[axis] > lambda;
  }
};

/// w(x) = u(x^lambda) - u(x). The pair accessor returns (w(x), w(x^lambda))
/// computed once and negated, so the antisymmetry identity holds bitwise.
class AntisymmetricField {
public:
  AntisymmetricField(FieldPtr base, ReflectionFrame frame);

  double value(const Point& x) const;
  std::pair<double, double> pair_values(const Point& x) const {
    double v = value(x);
    return {v, -v};
  }
  const ReflectionFrame& frame() const { return frame_; }
  const FieldPtr& base() const { return base_; }

private:
  FieldPtr base_;
  ReflectionFrame frame_;
};

struct ProbeSet {
  std::vector<Point> points;
  std::string provenance;
};

/// Interior ball nodes for grid fields; low-discrepancy points for the rest.
ProbeSet make_probes(const GridField& u, const std::vector<int>& mask);
ProbeSet make_probes(int dim, double radius, int count = 4096, bool ball_only = true);

/// eval_fracg(u∘reflection, x) - eval_fracg(u, x); the antisymmetric audits'
/// operator-side quantity.
double operator_difference(const YoungFunction& Y, const FieldPtr& u,
                           const ReflectionFrame& frame, const Point& x,
                           const OperatorParams& params);

struct MPReport {
  bool pass = false;
  Point worst_location = Point::of(0.0);
  double worst_value = 0.0;
  double tolerance_used = 0.0;
  bool rigidity_warning = false;   // an interior zero within tol was found
  bool rigidity_vanishes = false;  // and the whole probe set is below tol too
  bool boundedness_assumed = false;  // half-space audits cannot check w at infinity
  std::string context;
};

/// Audits "operator >= 0 inside and u >= 0 outside force u >= 0 inside".
/// Throws HypothesisViolated when either assumption fails on the probes, so a
/// pass/fail verdict always refers to the conclusion alone. tol is absolute.
MPReport check_max_principle(const YoungFunction& Y, const GridField& u,
                             const std::vector<int>& mask, const OperatorParams& params,
                             double tol);
MPReport check_max_principle(const YoungFunction& Y, const FieldPtr& u, double domain_radius,
                             const OperatorParams& params, double tol, int probe_count = 512);

/// Antisymmetric variant on the half space: w >= -tol outside the audited
/// probes (hypothesis), operator difference >= -tol on them (hypothesis),
/// conclusion w >= -tol on the half-space probes.
MPReport check_antisymmetric_mp(const YoungFunction& Y, const FieldPtr& u,
                                const ReflectionFrame& frame, double domain_radius,
                                const OperatorParams& params, double tol,
                                int op_probe_count = 48);

struct SymmetryReport {
  bool pass = false;
  double lambda0_est = 0.0;
  double lambda_step = 0.0;
  double worst_pair_dev = 0.0;  // relative to sup|u|
  Point worst_location = Point::of(0.0);
  double worst_value = 0.0;
  double tolerance_used = 0.0;  // relative
  std::vector<std::pair<double, double>> lambda_minima;  // (lambda, min w_lambda)
  bool monotone_ok = true;
  std::string context;
};

/// Moving-planes audit along an axis: slides the reflection plane from
/// -0.95*radius to 0 (default 40 stops), tracks min w_lambda on the advancing
/// half space, estimates the critical plane by the all-smaller-lambdas-pass
/// rule, and checks mirrored pairs plus monotonicity along rays toward the
/// center. tol is relative to sup|u|; genuinely negative interior values
/// raise NotPositive.
SymmetryReport moving_planes_audit(const YoungFunction& Y, const FieldPtr& u,
                                   double domain_radius, int axis,
                                   std::vector<double> lambda_grid, const OperatorParams& params,
                                   double tol);

struct BoundaryProbeEntry {
  int j = 0;
  double lambda_j = 0.0;
  Point x_j = Point::of(0.0);
  double delta_j = 0.0;  // dist(x_j, plane)
  double w_min = 0.0;
  double q_j = 0.0;  // operator difference at x_j divided by delta_j
  bool skipped = false;
};

struct BoundaryProbeReport {
  std::vector<BoundaryProbeEntry> entries;
  std::string verdict;  // "consistent" or "hypotheses not met"
  double eps0 = 0.0;    // the reported margin when consistent
  double tolerance_used = 0.0;
  std::string context;
};

/// Probes the boundary-layer quotient along planes lambda_j = lambda0 +
/// 0.1 * 2^-j: the minimizer x_j of w on the half space, its distance to the
/// plane, and the operator-difference quotient q_j. Entries with x_j on the
/// plane are skipped and reported.
BoundaryProbeReport boundary_estimate_probe(const YoungFunction& Y, const FieldPtr& u,
                                            double domain_radius, int axis, double lambda0,
                                            int j_max, const OperatorParams& params);

struct LiouvilleEntry {
  double radius = 0.0;
  double sup_op = 0.0;
  double osc = 0.0;
};

struct LiouvilleReport {
  enum class Verdict { Pass, Fail, Inconclusive };
  std::vector<LiouvilleEntry> entries;
  Verdict verdict = Verdict::Inconclusive;
  Point worst_location = Point::of(0.0);
  double worst_value = 0.0;
  double tolerance_used = 0.0;
  std::string context;
};

/// Desk-scale contrapositive of "bounded and g-harmonic implies constant":
/// when the operator vanishes within tol on every probed ball and the decay
/// model admits a constant, the oscillation must vanish too. Anything else is
/// inconclusive (truncated domain), reported with the measured pairs.
LiouvilleReport liouville_probe(const YoungFunction& Y, const FieldPtr& u,
                                const std::vector<double>& box_radii,
                                const OperatorParams& params, double tol,
                                int probes_per_radius = 96);

/// Radiality about a detected center (argmax refined by a parabolic fit) on
/// equal-radius shells, plus monotone decay of shell averages. Labeled a
/// truncated-domain approximation; no operator evaluations are needed.
SymmetryReport whole_space_symmetry_probe(const YoungFunction& Y, const FieldPtr& u,
                                          const OperatorParams& params, double tol,
                                          double scan_radius = 0.0);

}  // namespace fracg
