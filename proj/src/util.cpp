#include "fracg/util.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace fracg {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidExponents: return "InvalidExponents";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonFiniteRatio: return "NonFiniteRatio";
    case ErrorCode::UnboundedTail: return "UnboundedTail";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::TailUnbounded: return "TailUnbounded";
    case ErrorCode::NotC11At: return "NotC11At";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidNonlinearity: return "InvalidNonlinearity";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::StalledStep: return "StalledStep";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string format_point(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.dim; ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

namespace {
uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
}

uint64_t Rng::next_u64() {
  uint64_t result = rotl(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::sign() { return (next_u64() & 1ULL) ? 1.0 : -1.0; }

namespace {
QuadRule compute_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-angle initial guess; converges in a handful of steps.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / pp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    rule.nodes[static_cast<size_t>(i)] = t;
    rule.weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
  return rule;
}
}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

int resolve_threads(int requested) {
  if (requested > 0) return std::min(requested, 64);
  unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(static_cast<int>(hw == 0 ? 1 : hw), 1, 16);
}

void parallel_for(int n, int n_threads, const std::function<void(int, int)>& fn) {
  int workers = std::min(resolve_threads(n_threads), std::max(n, 1));
  if (workers <= 1 || n <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  int chunk = (n + workers - 1) / workers;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    int b = w * chunk;
    int e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  v.front() = a;
  v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& t : v) t = std::exp(t);
  v.front() = a;
  v.back() = b;
  return v;
}

double halton(uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  uint64_t i = index;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<uint64_t>(base));
    i /= static_cast<uint64_t>(base);
  }
  return r;
}

}  // namespace fracg
