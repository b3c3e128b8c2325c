#include "fracg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fracg {

namespace {

constexpr double kMaskShrink = 1.0 - 1e-12;  // strict interior, robust to round-off

double central_diff(const std::function<double(double)>& f, double t) {
  double e = 1e-6 * (1.0 + std::fabs(t));
  return (f(t + e) - f(t - e)) / (2.0 * e);
}

}  // namespace

Nonlinearity Nonlinearity::make(std::function<double(double)> f,
                                std::function<double(double)> fprime, double declared_lipschitz,
                                double sample_range, int n_samples, uint64_t seed,
                                std::string label) {
  if (!f) throw Error(ErrorCode::InvalidNonlinearity, "nonlinearity needs a callback");
  if (!(sample_range > 0.0) || n_samples < 100)
    throw Error(ErrorCode::InvalidNonlinearity, "need a positive range and >= 100 samples");

  Rng rng(seed);
  double worst_q = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    double t = rng.uniform(-sample_range, sample_range);
    double dt = rng.sign() * sample_range * 0.1 * std::pow(10.0, rng.uniform(-6.0, 0.0));
    double a = f(t), b = f(t + dt);
    if (!std::isfinite(a) || !std::isfinite(b))
      throw Error(ErrorCode::InvalidNonlinearity,
                  label + " is not finite near t = " + std::to_string(t));
    worst_q = std::max(worst_q, std::fabs(b - a) / std::fabs(dt));
  }
  if (declared_lipschitz > 0.0 && worst_q > declared_lipschitz * 1.05)
    throw Error(ErrorCode::InvalidNonlinearity,
                label + ": sampled difference quotient " + std::to_string(worst_q) +
                    " exceeds the declared Lipschitz constant " +
                    std::to_string(declared_lipschitz));

  Nonlinearity out;
  out.f = std::move(f);
  out.fprime = std::move(fprime);
  out.lipschitz_const = declared_lipschitz > 0.0 ? declared_lipschitz : worst_q * 1.1;
  out.label = std::move(label);

  // flag scan on an increasing grid; slack keeps fp noise from flipping flags
  const int M = 512;
  double prev = out.eval_fprime(-sample_range);
  double scale = std::fabs(prev);
  bool nondecreasing = true;
  for (int k = 1; k < M; ++k) {
    double t = -sample_range + 2.0 * sample_range * k / (M - 1);
    double fp = out.eval_fprime(t);
    scale = std::max(scale, std::fabs(fp));
    if (fp < prev - 1e-9 * (1.0 + scale)) nondecreasing = false;
    prev = fp;
  }
  out.fprime_nondecreasing = nondecreasing;

  bool nonpos = true;
  for (int k = 0; k < 64; ++k) {
    double t = (k + 0.5) / 64.0;
    if (out.eval_fprime(t) > 1e-9 * (1.0 + scale)) nonpos = false;
  }
  out.fprime_nonpos_below_1 = nonpos;
  return out;
}

Nonlinearity Nonlinearity::constant(double c) {
  Nonlinearity out;
  out.f = [c](double) { return c; };
  out.fprime = [](double) { return 0.0; };
  out.lipschitz_const = 0.0;
  out.fprime_nondecreasing = true;
  out.fprime_nonpos_below_1 = true;
  out.label = "const(" + std::to_string(c) + ")";
  return out;
}

double Nonlinearity::eval_fprime(double t) const {
  return fprime ? fprime(t) : central_diff(f, t);
}

double Nonlinearity::growth_constant(const YoungFunction& Y, int n_samples) const {
  double C = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    double t = (k + 0.5) / n_samples;
    double gp = Y.gprime(t);
    if (gp <= 0.0) continue;
    double fp = eval_fprime(t);
    if (fp <= 0.0) return std::numeric_limits<double>::infinity();
    C = std::max(C, gp / fp);
  }
  return C;
}

Problem Problem::ball(YoungFunction Y, double s, double radius, int grid_n, Nonlinearity f,
                      int dim) {
  Problem p;
  p.Y = std::move(Y);
  p.params.s = s;
  p.kernel = KernelModel::power(s);
  p.dim = dim;
  p.domain = DomainKind::Ball;
  p.radius = radius;
  p.grid_n = grid_n;
  p.f = std::move(f);
  p.validate();
  return p;
}

void Problem::validate() const {
  params.validate();
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidParams, "solver dimension must be 1 or 2");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidParams, "domain radius must be positive");
  if (grid_n < 16) throw Error(ErrorCode::InvalidParams, "solver grids need at least 16 nodes");
  if (!f.f && !rhs_field) throw Error(ErrorCode::InvalidParams, "problem needs f or a rhs field");
  if (rhs_field && rhs_field->dim() != dim)
    throw Error(ErrorCode::InvalidParams, "rhs field dimension mismatch");
}

double Problem::box_halfwidth() const {
  // 4 padding nodes per side put the domain boundary exactly on a node
  return radius * (grid_n - 1) / static_cast<double>(grid_n - 9);
}

double Problem::spacing() const { return 2.0 * box_halfwidth() / (grid_n - 1); }

GridField Problem::blank_field() const {
  double L = box_halfwidth();
  Point origin = dim == 1 ? Point::of(-L) : Point{{-L, -L, 0.0}, 2};
  std::array<int, 2> ext{grid_n, dim == 1 ? 1 : grid_n};
  std::vector<double> data(static_cast<size_t>(ext[0]) * static_cast<size_t>(ext[1]), 0.0);
  return GridField(dim, origin, spacing(), ext, std::move(data), ExteriorModel::zero());
}

std::vector<int> Problem::interior_mask() const {
  GridField blank = blank_field();
  std::vector<int> mask;
  const auto& ext = blank.extents();
  for (int i = 0; i < ext[0]; ++i)
    for (int j = 0; j < ext[1]; ++j) {
      Point x = blank.node_point(i, j);
      double dist = domain == DomainKind::Ball
                        ? x.norm()
                        : std::max(std::fabs(x.x[0]), dim > 1 ? std::fabs(x.x[1]) : 0.0);
      if (dist < radius * kMaskShrink) mask.push_back(static_cast<int>(blank.flat(i, j)));
    }
  return mask;
}

namespace {

std::vector<double> rhs_on_mask(const Problem& problem, const GridField& grid,
                                const std::vector<int>& mask) {
  std::vector<double> rhs(mask.size(), 0.0);
  if (!problem.rhs_field) return rhs;  // filled from f(u) per iterate instead
  int ext1 = grid.extents()[1];
  for (size_t k = 0; k < mask.size(); ++k) {
    Point x = grid.node_point(mask[k] / ext1, mask[k] % ext1);
    rhs[k] = problem.rhs_field->value(x);
  }
  return rhs;
}

/// Operator minus right-hand side on the mask; one eval_on_grid sweep.
std::pair<std::vector<double>, double> masked_residual(const Problem& problem,
                                                       const GridField& candidate,
                                                       const std::vector<int>& mask,
                                                       const std::vector<double>& fixed_rhs,
                                                       int threads) {
  GridEvalReport rep =
      eval_on_grid(problem.Y, candidate, mask, problem.params, problem.kernel, threads);
  if (!rep.ok())
    throw Error(ErrorCode::ValidationError,
                "operator evaluation failed at node " +
                    std::to_string(rep.node_errors.front().first) + ": " +
                    rep.node_errors.front().second);
  std::vector<double> r(mask.size());
  double sup = 0.0;
  for (size_t k = 0; k < mask.size(); ++k) {
    double rhs = problem.rhs_field ? fixed_rhs[k]
                                   : problem.f.f(candidate.data()[static_cast<size_t>(mask[k])]);
    r[k] = rep.values[k] - rhs;
    if (!std::isfinite(r[k])) return {std::move(r), std::numeric_limits<double>::quiet_NaN()};
    sup = std::max(sup, std::fabs(r[k]));
  }
  return {std::move(r), sup};
}

double rhs_sup_estimate(const Problem& problem, const GridField& grid,
                        const std::vector<int>& mask, const std::vector<double>& fixed_rhs) {
  if (!problem.rhs_field) return std::fabs(problem.f.f(0.0));
  double sup = 0.0;
  for (size_t k = 0; k < mask.size(); ++k) sup = std::max(sup, std::fabs(fixed_rhs[k]));
  (void)grid;
  return sup;
}

}  // namespace

std::pair<std::vector<double>, double> residual(const Problem& problem, const GridField& candidate,
                                                int threads) {
  problem.validate();
  GridField blank = problem.blank_field();
  if (candidate.dim() != blank.dim() || candidate.extents() != blank.extents() ||
      std::fabs(candidate.spacing() - blank.spacing()) > 1e-12 * blank.spacing())
    throw Error(ErrorCode::ValidationError, "candidate geometry does not match the problem");
  std::vector<int> mask = problem.interior_mask();
  std::vector<char> in_mask(candidate.data().size(), 0);
  for (int idx : mask) in_mask[static_cast<size_t>(idx)] = 1;
  for (size_t i = 0; i < candidate.data().size(); ++i)
    if (!in_mask[i] && candidate.data()[i] != 0.0)
      throw Error(ErrorCode::ValidationError, "candidate must vanish outside the domain");
  std::vector<double> fixed = rhs_on_mask(problem, candidate, mask);
  return masked_residual(problem, candidate, mask, fixed, threads);
}

Solution solve_dirichlet(const Problem& problem, const SolveConfig& config) {
  problem.validate();
  GridField blank = problem.blank_field();
  std::vector<int> mask = problem.interior_mask();
  if (mask.empty()) throw Error(ErrorCode::EmptyMask, "domain mask is empty at this resolution");
  int ext1 = blank.extents()[1];

  std::vector<double> data(blank.data().size(), 0.0);
  if (config.init) {
    if (config.init->dim() != problem.dim)
      throw Error(ErrorCode::InvalidParams, "init field dimension mismatch");
    for (int idx : mask) {
      Point x = blank.node_point(idx / ext1, idx % ext1);
      data[static_cast<size_t>(idx)] = config.init->value(x);
    }
  }

  std::vector<double> fixed = rhs_on_mask(problem, blank, mask);
  double fsup = rhs_sup_estimate(problem, blank, mask, fixed);
  double tol = config.tol > 0.0 ? config.tol : 1e-6 * (1.0 + fsup);
  double tau0 = config.tau0 > 0.0 ? config.tau0 : 0.1 / problem.Y.gprime(1.0 + fsup);
  double tau = tau0;

  auto make_grid = [&](const std::vector<double>& d) {
    return GridField(problem.dim, blank.origin(), blank.spacing(), blank.extents(), d,
                     ExteriorModel::zero());
  };

  Solution sol{make_grid(data), mask, {}, 0, false, 0.0, tol, tau};
  GridField cur = make_grid(data);
  auto [r, sup] = masked_residual(problem, cur, mask, fixed, config.threads);
  sol.history.push_back({0, 0.0, sup, true});
  if (!std::isfinite(sup))
    throw Error(ErrorCode::Diverged, "initial residual is not finite");

  if (sup <= tol) {
    sol.field = std::move(cur);
    sol.iterations = 1;
    sol.converged = true;
    sol.final_residual = sup;
    sol.tau_final = tau;
    return sol;
  }

  std::vector<double> proposal(data.size());
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    proposal = data;
    for (size_t k = 0; k < mask.size(); ++k) {
      double v = data[static_cast<size_t>(mask[k])] - tau * r[k];
      if (!std::isfinite(v))
        throw Error(ErrorCode::Diverged,
                    "iterate overflowed at iteration " + std::to_string(iter));
      proposal[static_cast<size_t>(mask[k])] = v;
    }
    GridField nxt = make_grid(proposal);
    auto [r_new, sup_new] = masked_residual(problem, nxt, mask, fixed, config.threads);

    if (!std::isfinite(sup_new))
      throw Error(ErrorCode::Diverged, "residual became non-finite at iteration " +
                                           std::to_string(iter));
    bool accepted = sup_new <= sup;
    sol.history.push_back({iter, tau, sup_new, accepted});

    if (accepted) {
      data.swap(proposal);
      cur = std::move(nxt);
      r = std::move(r_new);
      sup = sup_new;
      tau *= config.grow;
      if (sup <= tol) break;
    } else {
      // The proposal is discarded, so even a wildly overshooting step is
      // recoverable; damping handles it and StalledStep catches hopeless runs.
      tau *= config.shrink;
      if (tau < tau0 * 1e-14 || tau < 1e-300)
        throw Error(ErrorCode::StalledStep,
                    "step underflow at iteration " + std::to_string(iter));
    }
  }

  sol.field = std::move(cur);
  sol.iterations = static_cast<int>(sol.history.size());
  sol.converged = sup <= tol;
  sol.final_residual = sup;
  sol.tau_final = tau;
  return sol;
}

ConvergenceReport refine_study(const Problem& problem, int levels, const SolveConfig& config) {
  if (levels < 2) throw Error(ErrorCode::InvalidParams, "refinement study needs >= 2 levels");
  problem.validate();

  std::vector<GridField> fields;
  ConvergenceReport rep;
  for (int k = 0; k < levels; ++k) {
    Problem pk = problem;
    pk.grid_n = problem.grid_n * (1 << k);
    Solution s = solve_dirichlet(pk, config);
    if (!s.converged)
      throw Error(ErrorCode::Diverged,
                  "level " + std::to_string(k) + " did not converge; cannot compare levels");
    RefineLevel lvl;
    lvl.grid_n = pk.grid_n;
    lvl.h = pk.spacing();
    lvl.center_value =
        s.field.value(problem.dim == 1 ? Point::of(0.0) : Point{{0.0, 0.0, 0.0}, 2});
    rep.levels.push_back(lvl);
    fields.push_back(std::move(s.field));
  }

  // interpolated sup differences over a fixed probe set spanning the domain
  auto probes_1d = [&]() {
    std::vector<Point> pts;
    for (int i = 0; i <= 1000; ++i)
      pts.push_back(Point::of(-problem.radius + 2.0 * problem.radius * i / 1000.0));
    return pts;
  };
  auto probes_2d = [&]() {
    std::vector<Point> pts;
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j <= 40; ++j)
        pts.push_back(Point{{-problem.radius + 2.0 * problem.radius * i / 40.0,
                             -problem.radius + 2.0 * problem.radius * j / 40.0, 0.0},
                            2});
    return pts;
  };
  std::vector<Point> pts = problem.dim == 1 ? probes_1d() : probes_2d();

  for (size_t k = 1; k < fields.size(); ++k) {
    double d = 0.0, di = 0.0;
    for (const Point& x : pts) {
      double diff = std::fabs(fields[k].value(x) - fields[k - 1].value(x));
      d = std::max(d, diff);
      if (x.norm() <= 0.5 * problem.radius) di = std::max(di, diff);
    }
    rep.levels[k].sup_diff_prev = d;
    rep.levels[k].sup_diff_prev_interior = di;
  }
  for (size_t k = 1; k + 1 < rep.levels.size(); ++k) {
    // d_k is dominated by the coarse member of its pair, so the order divides
    // by the spacing ratio of the coarse members
    double d0 = rep.levels[k].sup_diff_prev, d1 = rep.levels[k + 1].sup_diff_prev;
    double hr = rep.levels[k - 1].h / rep.levels[k].h;
    rep.orders.push_back(d1 > 0.0 ? std::log(d0 / d1) / std::log(hr)
                                  : std::numeric_limits<double>::infinity());
    double e0 = rep.levels[k].sup_diff_prev_interior, e1 = rep.levels[k + 1].sup_diff_prev_interior;
    rep.orders_interior.push_back(e1 > 0.0 ? std::log(e0 / e1) / std::log(hr)
                                           : std::numeric_limits<double>::infinity());
  }
  rep.monotone = true;
  for (size_t k = 2; k < rep.levels.size(); ++k)
    if (!(rep.levels[k].sup_diff_prev < rep.levels[k - 1].sup_diff_prev)) rep.monotone = false;
  return rep;
}

}  // namespace fracg
