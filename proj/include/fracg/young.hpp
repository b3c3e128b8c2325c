#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracg/util.hpp"

namespace fracg {

enum class YoungFamily { Power, DoublePhase, PowerLog, Custom };

/// Convex gauge G with derivative g (extended odd to all of R) and second
/// derivative gprime (even). Growth is pinned by the index sandwich
/// p_minus - 1 <= t g'(t)/g(t) <= p_plus - 1 with 2 < p_minus <= p_plus.
class YoungFunction {
public:
  double G(double t) const;       // even in t
  double g(double t) const;       // odd in t, exact: g(-t) == -g(t) bitwise
  double gprime(double t) const;  // even in t

  double p_minus() const { return pm_; }
  double p_plus() const { return pp_; }
  const std::string& label() const { return label_; }
  YoungFamily family() const { return family_; }
  const std::vector<double>& exponents() const { return exps_; }

  static YoungFunction power(double p);
  static YoungFunction double_phase(double p, double q);
  static YoungFunction power_log(double p);
  static YoungFunction custom(std::function<double(double)> G, std::function<double(double)> g,
                              std::function<double(double)> gprime, double p_minus, double p_plus,
                              std::string label);

private:
  YoungFunction() = default;
  double raw_G(double t) const;
  double raw_g(double t) const;
  double raw_gprime(double t) const;

  YoungFamily family_ = YoungFamily::Custom;
  std::vector<double> exps_;
  double pm_ = 0.0, pp_ = 0.0;
  std::string label_;
  std::function<double(double)> cG_, cg_, cgp_;
};

YoungFunction make_builtin(YoungFamily family, const std::vector<double>& exponents);
YoungFamily family_from_name(const std::string& name);
const char* family_name(YoungFamily f);

/// (1 + min, 1 + max) of t g'(t)/g(t) over a log-uniform sample of [t_min, t_max],
/// widened outward by 1.01x the local sample-to-sample gap at each extremum.
std::pair<double, double> estimate_indices(const YoungFunction& Y, double t_min, double t_max,
                                           int n_pts);

enum class LemmaId { Lem22, Lemita, Desig, MinMax_g, MinMax_G, Delta2Sum };
const char* lemma_id_name(LemmaId id);

/// Outcome of a randomized inequality scan. Margins carry an additive relative
/// floating-point allowance (1e-11 * per-sample scale), so
/// n_violations == 0 <=> worst_margin >= 0 holds exactly.
struct InequalityReport {
  LemmaId lemma_id{};
  long n_samples = 0;
  long n_violations = 0;
  double worst_margin = 0.0;
  double constant_used = 0.0;
  std::string constant_derivation;
  std::string sample_domain;
  std::string worst_sample;
  long n_flagged = 0;     // samples where a sub-solver degraded (reported, not fatal)
  std::string notes;
};

/// Sampling domain for the scans: half linear, half signed log-uniform magnitudes.
struct SampleRange {
  double lin_lo = -1e3;
  double lin_hi = 1e3;
  double log_lo = 1e-6;
  double log_hi = 1e6;
};

/// g(b) - g(a) >= C* g(b-a) for b >= a, with the assembled explicit constant
/// C* = min{2^(2-p+) (p- - 1), 1 - 2^(1-p+), 2^(1-p+)}.
InequalityReport certify_lemma22(const YoungFunction& Y, long n_samples, uint64_t seed,
                                 const SampleRange& range = {});

/// |g(a+b) - g(a)| <= |b| g'(|a| + |b|).
InequalityReport certify_lemita(const YoungFunction& Y, long n_samples, uint64_t seed,
                                const SampleRange& range = {});

/// Mean-value point xi of g between a and b satisfies |xi| >= C0 max(|a|, |b|);
/// |xi| recovered by monotone bisection of g' (80 iterations on [0, 10 max]).
InequalityReport certify_desig(const YoungFunction& Y, long n_samples, uint64_t seed,
                               const SampleRange& range = {});

/// Two-sided homogeneity sandwiches for g and G under t -> alpha t.
/// alpha, t are nonnegative, log-uniform in [scale_lo, scale_hi].
std::pair<InequalityReport, InequalityReport> certify_scaling(const YoungFunction& Y,
                                                              long n_samples, uint64_t seed,
                                                              double scale_lo = 1e-4,
                                                              double scale_hi = 1e4);

/// g(a+b) <= 2^(p+ - 1) (g(a) + g(b)) for a, b >= 0.
InequalityReport certify_delta2_sum(const YoungFunction& Y, long n_samples, uint64_t seed,
                                    const SampleRange& range = {});

/// All six reports in a fixed order (Lem22, Lemita, Desig, MinMax_g, MinMax_G, Delta2Sum).
std::vector<InequalityReport> certify_all(const YoungFunction& Y, long n_samples, uint64_t seed);

}  // namespace fracg
