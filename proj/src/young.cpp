#include "fracg/young.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracg {

namespace {
constexpr double kFpGuard = 1e-11;  // relative allowance added to scan margins

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}
}  // namespace

double YoungFunction::raw_G(double t) const {
  switch (family_) {
    case YoungFamily::Power:
      return fast_pow(t, exps_[0]);
    case YoungFamily::DoublePhase:
      return fast_pow(t, exps_[0]) + fast_pow(t, exps_[1]);
    case YoungFamily::PowerLog:
      return fast_pow(t, exps_[0]) * std::log1p(t);
    case YoungFamily::Custom:
      return cG_(t);
  }
  return 0.0;
}

double YoungFunction::raw_g(double t) const {
  switch (family_) {
    case YoungFamily::Power: {
      double p = exps_[0];
      return p * fast_pow(t, p - 1.0);
    }
    case YoungFamily::DoublePhase: {
      double p = exps_[0], q = exps_[1];
      return p * fast_pow(t, p - 1.0) + q * fast_pow(t, q - 1.0);
    }
    case YoungFamily::PowerLog: {
      double p = exps_[0];
      if (t == 0.0) return 0.0;
      return p * fast_pow(t, p - 1.0) * std::log1p(t) + fast_pow(t, p) / (1.0 + t);
    }
    case YoungFamily::Custom:
      return cg_(t);
  }
  return 0.0;
}

double YoungFunction::raw_gprime(double t) const {
  switch (family_) {
    case YoungFamily::Power: {
      double p = exps_[0];
      return p * (p - 1.0) * fast_pow(t, p - 2.0);
    }
    case YoungFamily::DoublePhase: {
      double p = exps_[0], q = exps_[1];
      return p * (p - 1.0) * fast_pow(t, p - 2.0) + q * (q - 1.0) * fast_pow(t, q - 2.0);
    }
    case YoungFamily::PowerLog: {
      double p = exps_[0];
      if (t == 0.0) return 0.0;
      double om = 1.0 + t;
      return p * (p - 1.0) * fast_pow(t, p - 2.0) * std::log1p(t) +
             2.0 * p * fast_pow(t, p - 1.0) / om - fast_pow(t, p) / (om * om);
    }
    case YoungFamily::Custom:
      return cgp_(t);
  }
  return 0.0;
}

double YoungFunction::G(double t) const { return raw_G(std::fabs(t)); }

double YoungFunction::g(double t) const {
  return t < 0.0 ? -raw_g(-t) : raw_g(t);
}

double YoungFunction::gprime(double t) const { return raw_gprime(std::fabs(t)); }

YoungFunction YoungFunction::power(double p) {
  if (!(p > 2.0) || !(p <= 20.0))
    throw Error(ErrorCode::InvalidExponents, "power family needs exponent in (2, 20], got " + fmt(p));
  YoungFunction y;
  y.family_ = YoungFamily::Power;
  y.exps_ = {p};
  y.pm_ = y.pp_ = p;
  y.label_ = "power(" + fmt(p) + ")";
  return y;
}

YoungFunction YoungFunction::double_phase(double p, double q) {
  if (!(p > 2.0) || !(q > p) || !(q <= 20.0))
    throw Error(ErrorCode::InvalidExponents,
                "double_phase family needs 2 < p < q <= 20, got (" + fmt(p) + ", " + fmt(q) + ")");
  YoungFunction y;
  y.family_ = YoungFamily::DoublePhase;
  y.exps_ = {p, q};
  y.pm_ = p;
  y.pp_ = q;
  y.label_ = "double_phase(" + fmt(p) + "," + fmt(q) + ")";
  return y;
}

YoungFunction YoungFunction::power_log(double p) {
  if (!(p >= 2.0) || !(p <= 20.0))
    throw Error(ErrorCode::InvalidExponents, "power_log family needs exponent in [2, 20], got " + fmt(p));
  YoungFunction y;
  y.family_ = YoungFamily::PowerLog;
  y.exps_ = {p};
  y.pm_ = p;          // provisional, replaced by the estimate below
  y.pp_ = p + 1.0;
  auto [pm, pp] = estimate_indices(y, 1e-8, 1e8, 4096);
  if (!(pm > 2.0))
    throw Error(ErrorCode::IndexOutOfRange,
                "power_log(" + fmt(p) + ") has estimated p_minus " + fmt(pm) + " <= 2");
  y.pm_ = pm;
  y.pp_ = pp;
  y.label_ = "power_log(" + fmt(p) + ")";
  return y;
}

YoungFunction YoungFunction::custom(std::function<double(double)> G, std::function<double(double)> g,
                                    std::function<double(double)> gprime, double p_minus,
                                    double p_plus, std::string label) {
  if (!(p_minus > 2.0) || !(p_plus >= p_minus))
    throw Error(ErrorCode::IndexOutOfRange, "custom Young function needs 2 < p_minus <= p_plus");
  YoungFunction y;
  y.family_ = YoungFamily::Custom;
  y.cG_ = std::move(G);
  y.cg_ = std::move(g);
  y.cgp_ = std::move(gprime);
  y.pm_ = p_minus;
  y.pp_ = p_plus;
  y.label_ = std::move(label);
  return y;
}

YoungFunction make_builtin(YoungFamily family, const std::vector<double>& exponents) {
  switch (family) {
    case YoungFamily::Power:
      if (exponents.size() != 1)
        throw Error(ErrorCode::InvalidExponents, "power family takes exactly one exponent");
      return YoungFunction::power(exponents[0]);
    case YoungFamily::DoublePhase:
      if (exponents.size() != 2)
        throw Error(ErrorCode::InvalidExponents, "double_phase family takes exactly two exponents");
      return YoungFunction::double_phase(exponents[0], exponents[1]);
    case YoungFamily::PowerLog:
      if (exponents.size() != 1)
        throw Error(ErrorCode::InvalidExponents, "power_log family takes exactly one exponent");
      return YoungFunction::power_log(exponents[0]);
    case YoungFamily::Custom:
      break;
  }
  throw Error(ErrorCode::InvalidExponents, "custom family cannot be built from exponents");
}

YoungFamily family_from_name(const std::string& name) {
  if (name == "power") return YoungFamily::Power;
  if (name == "double_phase") return YoungFamily::DoublePhase;
  if (name == "power_log") return YoungFamily::PowerLog;
  throw Error(ErrorCode::InvalidExponents, "unknown Young family '" + name + "'");
}

const char* family_name(YoungFamily f) {
  switch (f) {
    case YoungFamily::Power: return "power";
    case YoungFamily::DoublePhase: return "double_phase";
    case YoungFamily::PowerLog: return "power_log";
    case YoungFamily::Custom: return "custom";
  }
  return "?";
}

std::pair<double, double> estimate_indices(const YoungFunction& Y, double t_min, double t_max,
                                           int n_pts) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw Error(ErrorCode::InvalidParams, "estimate_indices needs 0 < t_min < t_max");
  if (n_pts < 100) throw Error(ErrorCode::InvalidParams, "estimate_indices needs n_pts >= 100");
  auto ts = logspace(t_min, t_max, n_pts);
  std::vector<double> ratio(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i];
    double gv = Y.g(t);
    double r = t * Y.gprime(t) / gv;
    if (gv <= 0.0 || !std::isfinite(r))
      throw Error(ErrorCode::NonFiniteRatio, "t g'(t)/g(t) is not finite at t = " + fmt(t));
    ratio[i] = r;
  }
  size_t imin = 0, imax = 0;
  for (size_t i = 1; i < ratio.size(); ++i) {
    if (ratio[i] < ratio[imin]) imin = i;
    if (ratio[i] > ratio[imax]) imax = i;
  }
  auto local_gap = [&](size_t i) {
    double gap = 0.0;
    if (i > 0) gap = std::max(gap, std::fabs(ratio[i] - ratio[i - 1]));
    if (i + 1 < ratio.size()) gap = std::max(gap, std::fabs(ratio[i] - ratio[i + 1]));
    return gap;
  };
  double pm = 1.0 + ratio[imin] - 1.01 * local_gap(imin);
  double pp = 1.0 + ratio[imax] + 1.01 * local_gap(imax);
  return {pm, pp};
}

const char* lemma_id_name(LemmaId id) {
  switch (id) {
    case LemmaId::Lem22: return "Lem22";
    case LemmaId::Lemita: return "Lemita";
    case LemmaId::Desig: return "Desig";
    case LemmaId::MinMax_g: return "MinMax_g";
    case LemmaId::MinMax_G: return "MinMax_G";
    case LemmaId::Delta2Sum: return "Delta2Sum";
  }
  return "?";
}

namespace {

// Half linear, half signed log-uniform draw over the declared range.
double draw_value(Rng& rng, const SampleRange& r, long i) {
  if (i % 2 == 0) return rng.uniform(r.lin_lo, r.lin_hi);
  return rng.sign() * rng.log_uniform(r.log_lo, r.log_hi);
}

std::string describe_range(const SampleRange& r, uint64_t seed) {
  std::ostringstream os;
  os << "half linear [" << r.lin_lo << ", " << r.lin_hi << "], half signed log-uniform |t| in ["
     << r.log_lo << ", " << r.log_hi << "]; seed=" << seed;
  return os.str();
}

struct MarginTracker {
  double worst = std::numeric_limits<double>::infinity();
  long violations = 0;
  std::string worst_at;

  // slack is lhs-rhs of the certified inequality; scale sets the fp allowance.
  void feed(double slack, double scale, const std::string& where) {
    double margin = slack + kFpGuard * scale;
    if (margin < worst) {
      worst = margin;
      worst_at = where;
    }
    if (margin < 0.0) ++violations;
  }

  void finish(InequalityReport& rep) const {
    rep.n_violations = violations;
    rep.worst_margin = std::isfinite(worst) ? worst : 0.0;
    rep.worst_sample = worst_at;
  }
};

std::string pair_str(double a, double b) {
  std::ostringstream os;
  os.precision(12);
  os << "(a=" << a << ", b=" << b << ")";
  return os.str();
}

}  // namespace

InequalityReport certify_lemma22(const YoungFunction& Y, long n_samples, uint64_t seed,
                                 const SampleRange& range) {
  double pm = Y.p_minus(), pp = Y.p_plus();
  double c1 = std::pow(2.0, 2.0 - pp) * (pm - 1.0);
  double c2 = 1.0 - std::pow(2.0, 1.0 - pp);
  double c3 = std::pow(2.0, 1.0 - pp);
  double cstar = std::min({c1, c2, c3});

  InequalityReport rep;
  rep.lemma_id = LemmaId::Lem22;
  rep.n_samples = n_samples;
  rep.constant_used = cstar;
  rep.constant_derivation =
      "C* = min{2^(2-p+)(p--1), 1-2^(1-p+), 2^(1-p+)} = min{" + fmt(c1) + ", " + fmt(c2) + ", " +
      fmt(c3) + "}; margins carry +1e-11*scale fp allowance";
  rep.sample_domain = "ordered pairs b >= a, " + describe_range(range, seed);

  Rng rng(seed);
  MarginTracker tracker;
  for (long i = 0; i < n_samples; ++i) {
    double a = draw_value(rng, range, i);
    double b = draw_value(rng, range, i + 1);
    if (b < a) std::swap(a, b);
    double lhs = Y.g(b) - Y.g(a);
    double rhs = cstar * Y.g(b - a);
    double scale = std::fabs(Y.g(b)) + std::fabs(Y.g(a)) + std::fabs(rhs);
    tracker.feed(lhs - rhs, scale, pair_str(a, b));
  }
  tracker.finish(rep);
  return rep;
}

InequalityReport certify_lemita(const YoungFunction& Y, long n_samples, uint64_t seed,
                                const SampleRange& range) {
  InequalityReport rep;
  rep.lemma_id = LemmaId::Lemita;
  rep.n_samples = n_samples;
  rep.constant_used = 1.0;
  rep.constant_derivation = "|g(a+b)-g(a)| <= |b| g'(|a|+|b|), constant 1";
  rep.sample_domain = "pairs (a,b), " + describe_range(range, seed);

  Rng rng(seed);
  MarginTracker tracker;
  for (long i = 0; i < n_samples; ++i) {
    double a = draw_value(rng, range, i);
    double b = draw_value(rng, range, i + 1);
    double lhs = std::fabs(b) * Y.gprime(std::fabs(a) + std::fabs(b));
    double rhs = std::fabs(Y.g(a + b) - Y.g(a));
    // g(a+b)-g(a) cancels catastrophically for |b| << |a|; the fp allowance
    // must track the magnitudes entering the subtraction, not the difference.
    double scale = lhs + std::fabs(Y.g(a)) + std::fabs(Y.g(a + b));
    tracker.feed(lhs - rhs, scale, pair_str(a, b));
  }
  tracker.finish(rep);
  return rep;
}

InequalityReport certify_desig(const YoungFunction& Y, long n_samples, uint64_t seed,
                               const SampleRange& range) {
  double pm = Y.p_minus(), pp = Y.p_plus();
  double kappa = (1.0 - std::pow(2.0, 1.0 - pm)) * (pm - 1.0) / (2.0 * (pp - 1.0) * (pp - 1.0));
  double c0 = std::min(0.5, std::pow(kappa, 1.0 / (pm - 2.0)));

  InequalityReport rep;
  rep.lemma_id = LemmaId::Desig;
  rep.n_samples = n_samples;
  rep.constant_used = c0;
  rep.constant_derivation =
      "C0 = min{1/2, [(1-2^(1-p-))(p--1)/(2(p+-1)^2)]^(1/(p--2))} = " + fmt(c0) +
      "; |xi| from 80-step bisection of g' on [0, 10 max(|a|,|b|)]";
  rep.sample_domain = "pairs a != b, " + describe_range(range, seed);

  Rng rng(seed);
  MarginTracker tracker;
  long flagged = 0;
  for (long i = 0; i < n_samples; ++i) {
    double a = draw_value(rng, range, i);
    double b = draw_value(rng, range, i + 1);
    if (a == b) b = a + 1.0;
    double m = (Y.g(b) - Y.g(a)) / (b - a);
    double mx = std::max(std::fabs(a), std::fabs(b));
    double lo = 0.0, hi = 10.0 * mx;
    if (Y.gprime(hi) < m * (1.0 - 1e-9)) {
      ++flagged;  // bracket failed; recorded, not fatal
      continue;
    }
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (Y.gprime(mid) < m)
        lo = mid;
      else
        hi = mid;
    }
    double xi = 0.5 * (lo + hi);
    tracker.feed(xi - c0 * mx, mx, pair_str(a, b));
  }
  rep.n_flagged = flagged;
  if (flagged > 0) rep.notes = "bisection bracket failures: " + std::to_string(flagged);
  tracker.finish(rep);
  return rep;
}

std::pair<InequalityReport, InequalityReport> certify_scaling(const YoungFunction& Y,
                                                              long n_samples, uint64_t seed,
                                                              double scale_lo, double scale_hi) {
  double pm = Y.p_minus(), pp = Y.p_plus();

  InequalityReport rg;
  rg.lemma_id = LemmaId::MinMax_g;
  rg.n_samples = n_samples;
  rg.constant_used = pm - 1.0;
  rg.constant_derivation =
      "min{a^(p--1), a^(p+-1)} g(t) <= g(a t) <= max{a^(p--1), a^(p+-1)} g(t)";
  InequalityReport rG;
  rG.lemma_id = LemmaId::MinMax_G;
  rG.n_samples = n_samples;
  rG.constant_used = pp;
  rG.constant_derivation =
      "min{a^p-, a^p+}/p+ G(t) <= G(a t) <= p+ max{a^p-, a^p+} G(t)";
  {
    std::ostringstream os;
    os << "alpha, t >= 0 log-uniform in [" << scale_lo << ", " << scale_hi
       << "] plus edges alpha in {0, 1}; seed=" << seed;
    rg.sample_domain = rG.sample_domain = os.str();
  }

  Rng rng(seed);
  MarginTracker tg, tG;
  for (long i = 0; i < n_samples; ++i) {
    double alpha = (i == 0) ? 0.0 : (i == 1 ? 1.0 : rng.log_uniform(scale_lo, scale_hi));
    double t = rng.log_uniform(scale_lo, scale_hi);
    std::string where = "(alpha=" + fmt(alpha) + ", t=" + fmt(t) + ")";

    double agm = std::pow(alpha, pm - 1.0), agp = std::pow(alpha, pp - 1.0);
    double gv = Y.g(t), gav = Y.g(alpha * t);
    double lo_g = std::min(agm, agp) * gv, hi_g = std::max(agm, agp) * gv;
    tg.feed(std::min(gav - lo_g, hi_g - gav), std::fabs(gav) + std::fabs(lo_g) + std::fabs(hi_g),
            where);

    double aGm = std::pow(alpha, pm), aGp = std::pow(alpha, pp);
    double Gv = Y.G(t), Gav = Y.G(alpha * t);
    double lo_G = std::min(aGm, aGp) / pp * Gv, hi_G = pp * std::max(aGm, aGp) * Gv;
    tG.feed(std::min(Gav - lo_G, hi_G - Gav), std::fabs(Gav) + std::fabs(lo_G) + std::fabs(hi_G),
            where);
  }
  tg.finish(rg);
  tG.finish(rG);
  return {rg, rG};
}

InequalityReport certify_delta2_sum(const YoungFunction& Y, long n_samples, uint64_t seed,
                                    const SampleRange& range) {
  double c1 = std::pow(2.0, Y.p_plus() - 1.0);

  InequalityReport rep;
  rep.lemma_id = LemmaId::Delta2Sum;
  rep.n_samples = n_samples;
  rep.constant_used = c1;
  rep.constant_derivation = "g(a+b) <= C1 (g(a)+g(b)) with C1 = 2^(p+-1) = " + fmt(c1);
  rep.sample_domain = "nonnegative pairs, " + describe_range(range, seed);

  Rng rng(seed);
  MarginTracker tracker;
  for (long i = 0; i < n_samples; ++i) {
    double a = std::fabs(draw_value(rng, range, i));
    double b = std::fabs(draw_value(rng, range, i + 1));
    double lhs = c1 * (Y.g(a) + Y.g(b));
    double rhs = Y.g(a + b);
    tracker.feed(lhs - rhs, lhs + rhs, pair_str(a, b));
  }
  tracker.finish(rep);
  return rep;
}

std::vector<InequalityReport> certify_all(const YoungFunction& Y, long n_samples, uint64_t seed) {
  std::vector<InequalityReport> out;
  out.push_back(certify_lemma22(Y, n_samples, seed));
  out.push_back(certify_lemita(Y, n_samples, seed + 1));
  out.push_back(certify_desig(Y, n_samples, seed + 2));
  auto [rg, rG] = certify_scaling(Y, n_samples, seed + 3);
  out.push_back(rg);
  out.push_back(rG);
  out.push_back(certify_delta2_sum(Y, n_samples, seed + 4));
  return out;
}

}  // namespace fracg
