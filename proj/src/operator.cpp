#include "fracg/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace fracg {

namespace {

constexpr double kPanelRatio = 0.25;   // geometric refinement toward the singularity
constexpr int kNearPanels = 17;        // innermost panel floor ~ delta * 6e-11
constexpr double kTailTarget = 1e-6;   // tail bound vs computed magnitude
constexpr double kRfarCap = 1e8;

int angular_count(int quad) {
  int m = (3 * quad + 1) / 2;
  return 2 * std::max(4, m);
}

struct TailBoundInput {
  const YoungFunction* Y;
  double ux_abs;
  DecayBound db;
  double c1;  // kernel lower constant
  double s;
  int n;
};

// Bound of the integral past radius R, assuming R >= 2|x| and decay beta >= 0.
// |D_s u| <= A r^{-s} with A = |u(x)| + sup_{|y|>=R/2} |u(y)|; past the radius
// where the argument drops below 1 the lower-index power bound takes over.
double tail_bound_past(const TailBoundInput& in, double R) {
  double omega = in.n == 1 ? 2.0 : 2.0 * M_PI;
  double A = in.ux_abs + (in.db.c == 0.0 ? 0.0 : in.db.c * std::pow(R / 2.0, -in.db.beta));
  if (A == 0.0) return 0.0;
  double pm = in.Y->p_minus();
  double R1 = std::max(R, std::pow(A, 1.0 / in.s));
  double patch = 0.0;
  if (R1 > R)
    patch = in.Y->g(A * std::pow(R, -in.s)) * (std::pow(R, -in.s) - std::pow(R1, -in.s)) / in.s;
  double kappa = in.s * pm;
  double main = in.Y->g(1.0) * std::pow(A, pm - 1.0) * std::pow(R1, -kappa) / kappa;
  return omega * (patch + main) / in.c1;
}

struct DirSet {
  // unit directions, stored as pairs (d, -d); n=1 has the single pair (+1,-1)
  std::vector<Point> dirs;  // first half, the second half is the negation
  double weight = 1.0;      // angular weight per direction
};

DirSet make_dirs(int n, int quad) {
  DirSet ds;
  if (n == 1) {
    ds.dirs.push_back(Point::of(1.0));
    ds.weight = 1.0;
    return ds;
  }
  int M = angular_count(quad);
  ds.dirs.reserve(static_cast<size_t>(M) / 2);
  for (int j = 0; j < M / 2; ++j) {
    double th = 2.0 * M_PI * (j + 0.5) / M;
    ds.dirs.push_back(Point::of(std::cos(th), std::sin(th)));
  }
  ds.weight = 2.0 * M_PI / M;
  return ds;
}

}  // namespace

void OperatorParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidParams, "s must lie in (0,1)");
  if (!(delta_near >= 0.0) || !std::isfinite(delta_near))
    throw Error(ErrorCode::InvalidParams, "delta_near must be >= 0 (0 selects the default)");
  if (!(r_far >= 0.0) || !std::isfinite(r_far))
    throw Error(ErrorCode::InvalidParams, "r_far must be >= 0 (0 selects the default)");
  if (delta_near > 0.0 && r_far > 0.0 && !(delta_near < r_far))
    throw Error(ErrorCode::InvalidParams, "need delta_near < r_far");
  if (quad_near < 8 || quad_far < 8)
    throw Error(ErrorCode::InvalidParams, "quadrature counts must be at least 8");
}

KernelModel KernelModel::power(double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidParams, "s must lie in (0,1)");
  KernelModel m;
  m.s_ = s;
  return m;
}

KernelModel KernelModel::make(std::function<double(double)> k, double c1, double c2, double s,
                              std::string label) {
  if (!k) throw Error(ErrorCode::InvalidParams, "kernel needs a callback");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidParams, "s must lie in (0,1)");
  if (!(c1 > 0.0) || !(c2 >= c1))
    throw Error(ErrorCode::InvalidParams, "kernel sandwich needs 0 < c1 <= c2");
  for (double t : logspace(1e-8, 1e6, 256)) {
    double ratio = k(t) / std::pow(t, s);
    if (!std::isfinite(ratio) || ratio < c1 * (1.0 - 1e-9) || ratio > c2 * (1.0 + 1e-9))
      throw Error(ErrorCode::ValidationError,
                  "kernel ratio " + std::to_string(ratio) + " escapes [c1, c2] at t = " +
                      std::to_string(t));
  }
  KernelModel m;
  m.k_ = std::move(k);
  m.c1_ = c1;
  m.c2_ = c2;
  m.s_ = s;
  m.power_ = false;
  m.label_ = std::move(label);
  return m;
}

double holder_quotient(const ScalarField& u, const Point& x, const Point& y, double s) {
  double r = (x - y).norm();
  if (r == 0.0)
    throw Error(ErrorCode::CoincidentPoints, "Holder quotient undefined at " + format_point(x));
  return (u.value(x) - u.value(y)) / std::pow(r, s);
}

EvalBreakdown eval_fracg_full(const YoungFunction& Y, const ScalarField& u, const Point& x,
                              const OperatorParams& params, const KernelModel& kernel) {
  params.validate();
  if (std::fabs(kernel.s() - params.s) > 1e-12)
    throw Error(ErrorCode::InvalidParams, "kernel order disagrees with params.s");
  int n = u.dim();
  if (n > 2) throw Error(ErrorCode::InvalidParams, "operator evaluation supports n <= 2");
  if (!u.c11_at(x))
    throw Error(ErrorCode::NotC11At, "no C^{1,1} surrogate at " + format_point(x));

  DecayBound db = u.decay_bound();
  if (params.tail_mode == TailMode::AnalyticBound && db.c != 0.0 && db.beta < 0.0)
    throw Error(ErrorCode::TailUnbounded,
                "decay envelope declares growth (beta = " + std::to_string(db.beta) +
                    "); no analytic tail bound");

  const double s = params.s;
  const double ux = u.value(x);
  const Point grad = u.gradient(x);

  double delta = params.delta_near;
  if (delta == 0.0) {
    delta = 1.0;
    if (const auto* gf = dynamic_cast<const GridField*>(&u))
      delta = std::min(1.0, gf->box_radius() / 4.0);
  }

  const QuadRule& qn = gauss_legendre(params.quad_near);
  const QuadRule& qf = gauss_legendre(params.quad_far);
  DirSet near_dirs = make_dirs(n, params.quad_near);
  DirSet far_dirs = make_dirs(n, params.quad_far);

  // near field: compensated integrand on symmetric pairs over B_delta
  double near = 0.0;
  {
    double hi = delta;
    for (int p = 0; p <= kNearPanels; ++p) {
      double lo = p == kNearPanels ? 0.0 : hi * kPanelRatio;
      double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
      for (size_t k = 0; k < qn.nodes.size(); ++k) {
        double r = mid + hw * qn.nodes[k];
        double rs = std::pow(r, s);
        double inv_rs = 1.0 / rs;
        double r1s = r * inv_rs;  // r^{1-s}
        double wr = hw * qn.weights[k] / (kernel(r) * r);
        double sum = 0.0;
        for (const Point& d : near_dirs.dirs) {
          Point yp = x + d * r;
          Point ym = x - d * r;
          double comp = (grad.dot(d)) * r1s;
          double term_p = Y.g((ux - u.value(yp)) * inv_rs) - Y.g(-comp);
          double term_m = Y.g((ux - u.value(ym)) * inv_rs) - Y.g(comp);
          sum += term_p + term_m;
        }
        near += wr * near_dirs.weight * sum;
      }
      hi *= kPanelRatio;
    }
  }

  TailBoundInput tb{&Y, std::fabs(ux), db, kernel.c1(), s, n};
  double r_floor = std::max({2.0 * x.norm(), 2.0 * db.valid_radius, 4.0 * delta});
  // a declared-growth envelope admits no A r^{-s} quotient bound at all
  bool boundable = !(db.c != 0.0 && db.beta < 0.0);

  // far field: direct integration on geometric panels, growing r_far on demand
  double far = 0.0;
  double R = delta;
  double tail_bound = 0.0;
  bool tail_ok = true;
  auto far_panel = [&](double lo, double hi) {
    double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    double acc = 0.0;
    for (size_t k = 0; k < qf.nodes.size(); ++k) {
      double r = mid + hw * qf.nodes[k];
      double inv_rs = 1.0 / std::pow(r, s);
      double wr = hw * qf.weights[k] / (kernel(r) * r);
      double sum = 0.0;
      for (const Point& d : far_dirs.dirs) {
        sum += Y.g((ux - u.value(x + d * r)) * inv_rs);
        sum += Y.g((ux - u.value(x - d * r)) * inv_rs);
      }
      acc += wr * far_dirs.weight * sum;
    }
    return acc;
  };

  if (params.r_far > 0.0) {
    if (params.r_far <= delta)
      throw Error(ErrorCode::InvalidParams, "r_far must exceed the near radius");
    while (R < params.r_far) {
      double hi = std::min(R / kPanelRatio, params.r_far);
      far += far_panel(R, hi);
      R = hi;
    }
    double Rb = std::max(R, r_floor);
    if (boundable) {
      tail_bound = tail_bound_past(tb, Rb);
      tail_ok = tail_bound <= kTailTarget * (std::fabs(near) + std::fabs(far));
    } else {
      tail_bound = std::numeric_limits<double>::infinity();
      tail_ok = false;
    }
  } else if (!boundable) {
    // nothing to drive the growth loop; truncate at a fixed multiple of delta
    double stop = std::max(r_floor, 64.0 * delta);
    while (R < stop) {
      double hi = R / kPanelRatio;
      far += far_panel(R, hi);
      R = hi;
    }
    tail_bound = std::numeric_limits<double>::infinity();
    tail_ok = false;
  } else {
    while (true) {
      double hi = R / kPanelRatio;
      far += far_panel(R, hi);
      R = hi;
      if (R < r_floor) continue;
      tail_bound = tail_bound_past(tb, R);
      double scale = std::fabs(near) + std::fabs(far);
      if (tail_bound <= kTailTarget * scale && scale > 0.0) break;
      if (tail_bound == 0.0) break;  // exactly zero envelope and zero u(x)
      if (R >= kRfarCap) {
        tail_ok = tail_bound <= kTailTarget * scale;
        break;
      }
    }
  }

  EvalBreakdown out;
  out.near = near;
  out.far = far;
  out.value = near + far;
  out.tail_bound = tail_bound;
  out.delta_used = delta;
  out.r_far_used = R;
  out.tail_ok = tail_ok;
  return out;
}

EvalBreakdown eval_fracg_full(const YoungFunction& Y, const ScalarField& u, const Point& x,
                              const OperatorParams& params) {
  return eval_fracg_full(Y, u, x, params, KernelModel::power(params.s));
}

double eval_fracg(const YoungFunction& Y, const ScalarField& u, const Point& x,
                  const OperatorParams& params, const KernelModel& kernel) {
  return eval_fracg_full(Y, u, x, params, kernel).value;
}

double eval_fracg(const YoungFunction& Y, const ScalarField& u, const Point& x,
                  const OperatorParams& params) {
  return eval_fracg_full(Y, u, x, params).value;
}

GridEvalReport eval_on_grid(const YoungFunction& Y, const GridField& u,
                            const std::vector<int>& mask, const OperatorParams& params,
                            const KernelModel& kernel, int threads) {
  if (mask.empty()) throw Error(ErrorCode::EmptyMask, "eval_on_grid needs a nonempty mask");
  GridEvalReport rep;
  rep.values.assign(mask.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::pair<int, std::string>> errs;
  std::mutex err_mu;
  int ext1 = u.extents()[1];
  parallel_for(static_cast<int>(mask.size()), resolve_threads(threads), [&](int b, int e) {
    for (int k = b; k < e; ++k) {
      int idx = mask[static_cast<size_t>(k)];
      Point x = u.node_point(idx / ext1, idx % ext1);
      try {
        rep.values[static_cast<size_t>(k)] = eval_fracg_full(Y, u, x, params, kernel).value;
      } catch (const Error& err) {
        std::lock_guard<std::mutex> lock(err_mu);
        errs.emplace_back(idx, err.what());
      }
    }
  });
  std::sort(errs.begin(), errs.end());
  rep.node_errors = std::move(errs);
  return rep;
}

PerturbationResult perturbation_gap(const YoungFunction& Y, const FieldPtr& u, Point bump_center,
                                    double eps, double delta, const OperatorParams& params) {
  if (!u) throw Error(ErrorCode::InvalidParams, "perturbation needs a field");
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidParams, "eps must be >= 0");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidParams, "delta must be positive");
  bump_center.dim = u->dim();
  OperatorParams p = params;
  p.delta_near = delta;

  FieldPtr psi = bump_field(u->dim(), bump_center, 1.0);
  double base = eval_fracg(Y, *u, bump_center, p);
  auto at_eps = [&](double e) {
    if (e == 0.0) return 0.0;
    SumField pert({1.0, e}, {u, psi});
    return std::fabs(eval_fracg(Y, pert, bump_center, p) - base);
  };

  PerturbationResult res;
  res.gap = at_eps(eps);
  res.gap_half = at_eps(eps / 2.0);
  if (eps == 0.0) return res;
  res.c_delta = (res.gap - res.gap_half) / (eps / 2.0);
  res.omega = std::max(0.0, res.gap_half - res.c_delta * (eps / 2.0));
  res.bound = res.c_delta * eps + res.omega;
  return res;
}

}  // namespace fracg
