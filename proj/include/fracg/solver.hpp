#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracg/fields.hpp"
#include "fracg/operator.hpp"
#include "fracg/young.hpp"

namespace fracg {

/// Right-hand side f(u) with sampled regularity metadata. Construction
/// estimates a Lipschitz constant from difference quotients and rejects
/// callbacks whose quotients blow past a declared constant.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> fprime;  // central differences when not provided
  double lipschitz_const = 0.0;
  bool fprime_nondecreasing = false;
  bool fprime_nonpos_below_1 = false;
  std::string label = "f";

  /// declared_lipschitz = 0 means "estimate and record"; a positive value is
  /// verified against sampled quotients (5% slack) and kept verbatim.
  static Nonlinearity make(std::function<double(double)> f,
                           std::function<double(double)> fprime = nullptr,
                           double declared_lipschitz = 0.0, double sample_range = 10.0,
                           int n_samples = 4000, uint64_t seed = 2024,
                           std::string label = "f");
  static Nonlinearity constant(double c);

  double eval_fprime(double t) const;
  /// Smallest sampled C with gprime(t) <= C * fprime(t) on (0,1); +inf when
  /// fprime dips nonpositive where gprime > 0. Recorded, never enforced.
  double growth_constant(const YoungFunction& Y, int n_samples = 512) const;
};

enum class DomainKind { Ball, Box };

/// Dirichlet problem on a centered ball or box: operator(u) = rhs in the
/// domain, u = 0 outside. The grid pads the domain with 4 exterior nodes per
/// side so every masked node keeps the interpolation margin, and the domain
/// boundary falls exactly on a node pair in each axis.
struct Problem {
  YoungFunction Y = YoungFunction::power(3);
  OperatorParams params;
  KernelModel kernel = KernelModel::power(0.5);
  int dim = 1;
  DomainKind domain = DomainKind::Ball;
  double radius = 1.0;
  int grid_n = 256;
  Nonlinearity f = Nonlinearity::constant(0.0);
  FieldPtr rhs_field;  // fixed right-hand side; overrides f when set

  static Problem ball(YoungFunction Y, double s, double radius, int grid_n, Nonlinearity f,
                      int dim = 1);

  void validate() const;
  double box_halfwidth() const;  // radius * (N-1)/(N-9)
  double spacing() const;
  GridField blank_field() const;
  /// Flat indices of grid nodes strictly inside the domain.
  std::vector<int> interior_mask() const;
};

struct HistoryEntry {
  int iter = 0;
  double tau = 0.0;
  double sup_residual = 0.0;
  bool accepted = true;
};

struct Solution {
  GridField field;
  std::vector<int> mask;
  std::vector<HistoryEntry> history;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  double tol_used = 0.0;
  double tau_final = 0.0;
};

struct SolveConfig {
  double tol = 0.0;    // 0: 1e-6 * (1 + |f(0)| or sup|rhs|)
  int max_iter = 20000;
  double tau0 = 0.0;   // 0: 0.1 / gprime(1 + rhs sup)
  double grow = 1.1;   // step growth on accepted iterations
  double shrink = 0.5; // step damping on rejections
  int threads = 1;
  FieldPtr init;       // sampled on the mask; zero outside regardless
};

/// r(x) = operator(u)(x) - rhs(x) at every masked node, plus its sup-norm.
/// The candidate must vanish identically off the mask.
std::pair<std::vector<double>, double> residual(const Problem& problem, const GridField& candidate,
                                                int threads = 1);

/// Damped pseudo-time iteration u <- u - tau * residual(u) on the mask with
/// exterior pinned to zero. One residual evaluation per iteration: a proposal
/// whose sup-residual does not exceed the current one is accepted and tau
/// grows, otherwise tau halves and the state stays.
Solution solve_dirichlet(const Problem& problem, const SolveConfig& config = {});

struct RefineLevel {
  int grid_n = 0;
  double h = 0.0;
  double center_value = 0.0;
  double sup_diff_prev = 0.0;           // vs previous level, whole domain probes
  double sup_diff_prev_interior = 0.0;  // probes with |x| <= radius/2
};

struct ConvergenceReport {
  std::vector<RefineLevel> levels;
  std::vector<double> orders;           // log(d_k/d_{k+1}) / log(h_k/h_{k+1})
  std::vector<double> orders_interior;
  bool monotone = false;  // successive sup differences strictly decreasing
};

/// Solves at grid_n, 2*grid_n, 4*grid_n, ... and reports successive
/// interpolated sup-norm differences and empirical orders.
ConvergenceReport refine_study(const Problem& problem, int levels,
                               const SolveConfig& config = {});

}  // namespace fracg
