#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fracg {

/// Error categories surfaced by the library. Names match the failure, not the call site.
enum class ErrorCode {
  InvalidExponents,
  IndexOutOfRange,
  NonFiniteRatio,
  UnboundedTail,
  CoincidentPoints,
  TailUnbounded,
  NotC11At,
  InvalidParams,
  InvalidNonlinearity,
  Diverged,
  StalledStep,
  EmptyMask,
  NotPositive,
  HypothesisViolated,
  ParseError,
  ValidationError,
  IoError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode c);

/// Point in R^n, n <= 3. Unused coordinates stay zero so norms are safe.
struct Point {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  int dim = 1;

  static Point of(double a) { return Point{{a, 0.0, 0.0}, 1}; }
  static Point of(double a, double b) { return Point{{a, b, 0.0}, 2}; }
  static Point of(double a, double b, double c) { return Point{{a, b, c}, 3}; }

  double& operator[](int i) { return x[static_cast<size_t>(i)]; }
  double operator[](int i) const { return x[static_cast<size_t>(i)]; }

  double norm2() const { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }
  double norm() const { return std::sqrt(norm2()); }

  Point operator+(const Point& o) const { return Point{{x[0] + o.x[0], x[1] + o.x[1], x[2] + o.x[2]}, dim}; }
  Point operator-(const Point& o) const { return Point{{x[0] - o.x[0], x[1] - o.x[1], x[2] - o.x[2]}, dim}; }
  Point operator*(double c) const { return Point{{c * x[0], c * x[1], c * x[2]}, dim}; }
  double dot(const Point& o) const { return x[0] * o.x[0] + x[1] * o.x[1] + x[2] * o.x[2]; }
};

std::string format_point(const Point& p);

/// xoshiro256** with splitmix64 seeding. Sequence is fixed by the seed on every
/// platform; std::uniform_real_distribution is implementation-defined and not used.
class Rng {
public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform01();
  double uniform(double lo, double hi);
  /// Magnitude log-uniform in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi);
  /// +1 or -1.
  double sign();

private:
  std::array<uint64_t, 4> s_;
};

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per order, thread-safe after warmup.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadRule& gauss_legendre(int n);

/// pow with an exact-multiplication fast path for small integer exponents.
inline double fast_pow(double base, double e) {
  double r = std::round(e);
  if (r == e && std::fabs(r) <= 8.0) {
    double acc = 1.0;
    double b = base;
    int k = static_cast<int>(std::fabs(r));
    for (int i = 0; i < k; ++i) acc *= b;
    return r < 0.0 ? 1.0 / acc : acc;
  }
  return std::pow(base, e);
}

/// Static block partition of [0, n); fn(begin, end) per worker. Results must not
/// depend on worker count, so each index writes only its own slot.
void parallel_for(int n, int n_threads, const std::function<void(int, int)>& fn);

/// 0 means "resolve to hardware", clamped to [1, 16].
int resolve_threads(int requested);

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);

/// Halton radical-inverse in the given base; deterministic low-discrepancy probes.
double halton(uint64_t index, int base);

}  // namespace fracg
