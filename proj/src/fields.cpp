#include "fracg/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fracg {

namespace {

constexpr double kNodeSnap = 1e-9;  // relative to spacing

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Lagrange cubic basis on offsets {0,1,2,3}; exact 0/1 at integer u.
void cubic_weights(double u, double w[4]) {
  w[0] = (u - 1.0) * (u - 2.0) * (u - 3.0) / -6.0;
  w[1] = u * (u - 2.0) * (u - 3.0) / 2.0;
  w[2] = u * (u - 1.0) * (u - 3.0) / -2.0;
  w[3] = u * (u - 1.0) * (u - 2.0) / 6.0;
}

void cubic_deriv_weights(double u, double w[4]) {
  w[0] = -((u - 2.0) * (u - 3.0) + (u - 1.0) * (u - 3.0) + (u - 1.0) * (u - 2.0)) / 6.0;
  w[1] = ((u - 2.0) * (u - 3.0) + u * (u - 3.0) + u * (u - 2.0)) / 2.0;
  w[2] = -((u - 1.0) * (u - 3.0) + u * (u - 3.0) + u * (u - 1.0)) / 2.0;
  w[3] = ((u - 1.0) * (u - 2.0) + u * (u - 1.0) + u * (u - 2.0)) / 6.0;
}

}  // namespace

ExteriorModel ExteriorModel::power_decay(double c, double beta) {
  if (!std::isfinite(c) || !std::isfinite(beta))
    throw Error(ErrorCode::ValidationError, "exterior power decay needs finite c, beta");
  ExteriorModel m;
  m.kind = ExteriorKind::PowerDecay;
  m.c = c;
  m.beta = beta;
  return m;
}

double ExteriorModel::value(const Point& x) const {
  if (kind == ExteriorKind::Zero) return 0.0;
  if (beta == 0.0) return c;
  return c * fast_pow(x.norm(), -beta);
}

GridField::GridField(int n, Point origin, double h, std::array<int, 2> extents,
                     std::vector<double> data, ExteriorModel exterior)
    : n_(n), origin_(origin), h_(h), extents_(extents), data_(std::move(data)),
      exterior_(exterior) {
  if (n_ != 1 && n_ != 2) throw Error(ErrorCode::InvalidParams, "grid dimension must be 1 or 2");
  if (!(h_ > 0.0) || !std::isfinite(h_))
    throw Error(ErrorCode::InvalidParams, "grid spacing must be positive");
  if (extents_[0] < 4 || (n_ == 2 && extents_[1] < 4))
    throw Error(ErrorCode::InvalidParams, "cubic interpolation needs at least 4 nodes per axis");
  if (n_ == 1 && extents_[1] != 1)
    throw Error(ErrorCode::InvalidParams, "1-d grid must have extent 1 in the second axis");
  size_t expect = static_cast<size_t>(extents_[0]) * static_cast<size_t>(extents_[1]);
  if (data_.size() != expect)
    throw Error(ErrorCode::ValidationError,
                "sample count " + std::to_string(data_.size()) + " does not match extents");
  for (double v : data_)
    if (!std::isfinite(v)) throw Error(ErrorCode::ValidationError, "grid samples must be finite");
  origin_.dim = n_;
}

Point GridField::node_point(int i, int j) const {
  Point p = origin_;
  p[0] = origin_[0] + h_ * i;
  if (n_ == 2) p[1] = origin_[1] + h_ * j;
  return p;
}

bool GridField::inside_box(const Point& x) const {
  for (int d = 0; d < n_; ++d) {
    double t = (x[d] - origin_[d]) / h_;
    if (t < -kNodeSnap || t > extents_[d] - 1 + kNodeSnap) return false;
  }
  return true;
}

double GridField::box_radius() const {
  double r2 = 0.0;
  for (int ci = 0; ci < (n_ == 1 ? 2 : 4); ++ci) {
    Point c = origin_;
    c[0] = origin_[0] + ((ci & 1) ? h_ * (extents_[0] - 1) : 0.0);
    if (n_ == 2) c[1] = origin_[1] + ((ci & 2) ? h_ * (extents_[1] - 1) : 0.0);
    r2 = std::max(r2, c.norm2());
  }
  return std::sqrt(r2);
}

double GridField::min_halfwidth() const {
  double w = h_ * (extents_[0] - 1);
  if (n_ == 2) w = std::min(w, h_ * (extents_[1] - 1));
  return 0.5 * w;
}

double GridField::value(const Point& x) const {
  if (!inside_box(x)) return exterior_.value(x);
  double t[2] = {0.0, 0.0};
  int k0[2] = {0, 0};
  for (int d = 0; d < n_; ++d) {
    t[d] = (x[d] - origin_[d]) / h_;
    double r = std::round(t[d]);
    if (std::fabs(t[d] - r) <= kNodeSnap) t[d] = r;
    int i = static_cast<int>(std::floor(t[d]));
    k0[d] = std::clamp(i - 1, 0, extents_[d] - 4);
  }
  double wx[4];
  cubic_weights(t[0] - k0[0], wx);
  if (n_ == 1) {
    double acc = 0.0;
    for (int m = 0; m < 4; ++m) acc += wx[m] * data_[flat(k0[0] + m)];
    return acc;
  }
  double wy[4];
  cubic_weights(t[1] - k0[1], wy);
  double acc = 0.0;
  for (int m = 0; m < 4; ++m) {
    double row = 0.0;
    for (int l = 0; l < 4; ++l) row += wy[l] * data_[flat(k0[0] + m, k0[1] + l)];
    acc += wx[m] * row;
  }
  return acc;
}

bool GridField::c11_at(const Point& x) const {
  for (int d = 0; d < n_; ++d) {
    double t = (x[d] - origin_[d]) / h_;
    if (t < 2.0 - kNodeSnap || t > extents_[d] - 3 + kNodeSnap) return false;
  }
  return true;
}

Point GridField::gradient(const Point& x) const {
  if (!c11_at(x))
    throw Error(ErrorCode::NotC11At,
                "gradient needs a 2-node interior margin at " + format_point(x));
  double t[2] = {0.0, 0.0};
  bool on_node = true;
  int idx[2] = {0, 0};
  for (int d = 0; d < n_; ++d) {
    t[d] = (x[d] - origin_[d]) / h_;
    double r = std::round(t[d]);
    if (std::fabs(t[d] - r) <= kNodeSnap) {
      t[d] = r;
      idx[d] = static_cast<int>(r);
    } else {
      on_node = false;
    }
  }
  Point g = Point{{0.0, 0.0, 0.0}, n_};
  if (on_node) {
    // fourth-order five-point stencil per axis
    for (int d = 0; d < n_; ++d) {
      auto at = [&](int off) {
        return d == 0 ? data_[flat(idx[0] + off, idx[1])] : data_[flat(idx[0], idx[1] + off)];
      };
      g[d] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h_);
    }
    return g;
  }
  int k0[2] = {0, 0};
  for (int d = 0; d < n_; ++d)
    k0[d] = std::clamp(static_cast<int>(std::floor(t[d])) - 1, 0, extents_[d] - 4);
  double wx[4], wy[4] = {1.0, 0.0, 0.0, 0.0}, dx[4], dy[4] = {0.0, 0.0, 0.0, 0.0};
  cubic_weights(t[0] - k0[0], wx);
  cubic_deriv_weights(t[0] - k0[0], dx);
  if (n_ == 2) {
    cubic_weights(t[1] - k0[1], wy);
    cubic_deriv_weights(t[1] - k0[1], dy);
  }
  double gx = 0.0, gy = 0.0;
  for (int m = 0; m < 4; ++m) {
    double row = 0.0, drow = 0.0;
    if (n_ == 1) {
      row = data_[flat(k0[0] + m)];
    } else {
      for (int l = 0; l < 4; ++l) {
        double v = data_[flat(k0[0] + m, k0[1] + l)];
        row += wy[l] * v;
        drow += dy[l] * v;
      }
    }
    gx += dx[m] * row;
    if (n_ == 2) gy += wx[m] * drow;
  }
  g[0] = gx / h_;
  if (n_ == 2) g[1] = gy / h_;
  return g;
}

DecayBound GridField::decay_bound() const {
  double R = std::max(box_radius(), 1e-12);
  if (exterior_.kind == ExteriorKind::Zero) return {0.0, 0.0, R};
  return {std::fabs(exterior_.c), exterior_.beta, R};
}

std::string GridField::describe() const {
  std::ostringstream os;
  os << "grid(n=" << n_ << ", h=" << h_ << ", extents=" << extents_[0];
  if (n_ == 2) os << "x" << extents_[1];
  os << ")";
  return os.str();
}

AnalyticField::AnalyticField(int n, std::function<double(const Point&)> f,
                             std::function<Point(const Point&)> grad, DecayBound decay,
                             std::string label)
    : n_(n), f_(std::move(f)), grad_(std::move(grad)), decay_(decay), label_(std::move(label)) {
  if (n_ < 1 || n_ > 3) throw Error(ErrorCode::InvalidParams, "analytic field dimension must be 1..3");
  if (!f_) throw Error(ErrorCode::InvalidParams, "analytic field needs a value callback");
  if (!(decay_.valid_radius > 0.0))
    throw Error(ErrorCode::InvalidParams, "decay bound needs a positive valid radius");
}

Point AnalyticField::gradient(const Point& x) const {
  if (grad_) return grad_(x);
  Point g = Point{{0.0, 0.0, 0.0}, n_};
  for (int d = 0; d < n_; ++d) {
    double e = 1e-3 * (1.0 + std::fabs(x[d]));
    Point a = x, b = x, c = x, dpt = x;
    a[d] -= 2.0 * e;
    b[d] -= e;
    c[d] += e;
    dpt[d] += 2.0 * e;
    g[d] = (f_(a) - 8.0 * f_(b) + 8.0 * f_(c) - f_(dpt)) / (12.0 * e);
  }
  return g;
}

Point reflect_point(const Point& x, int axis, double lambda) {
  Point y = x;
  y[axis] = 2.0 * lambda - x[axis];
  return y;
}

ReflectedField::ReflectedField(FieldPtr base, int axis, double lambda)
    : base_(std::move(base)), axis_(axis), lambda_(lambda) {
  if (!base_) throw Error(ErrorCode::InvalidParams, "reflection needs a base field");
  if (axis_ < 0 || axis_ >= base_->dim())
    throw Error(ErrorCode::InvalidParams, "reflection axis exceeds field dimension");
}

Point ReflectedField::gradient(const Point& x) const {
  Point g = base_->gradient(reflect_point(x, axis_, lambda_));
  g[axis_] = -g[axis_];
  return g;
}

DecayBound ReflectedField::decay_bound() const {
  DecayBound b = base_->decay_bound();
  double shift = 2.0 * std::fabs(lambda_);
  if (shift == 0.0 || b.c == 0.0) return b;
  double R = b.valid_radius + shift;
  // |x^l| strays from |x| by at most `shift`; absorb that into the constant.
  double ratio = b.beta >= 0.0 ? 1.0 / (1.0 - shift / R) : 1.0 + shift / R;
  return {b.c * std::pow(ratio, std::fabs(b.beta)), b.beta, R};
}

std::string ReflectedField::describe() const {
  std::ostringstream os;
  os << "reflect(axis=" << axis_ << ", lambda=" << lambda_ << ") of " << base_->describe();
  return os.str();
}

FieldPtr reflect(FieldPtr field, double lambda, int axis) {
  return std::make_shared<ReflectedField>(std::move(field), axis, lambda);
}

SumField::SumField(std::vector<double> coefs, std::vector<FieldPtr> terms)
    : coefs_(std::move(coefs)), terms_(std::move(terms)) {
  if (coefs_.size() != terms_.size() || terms_.empty())
    throw Error(ErrorCode::InvalidParams, "sum field needs matching coefficients and terms");
  for (const auto& t : terms_) {
    if (!t) throw Error(ErrorCode::InvalidParams, "sum field term is null");
    if (t->dim() != terms_[0]->dim())
      throw Error(ErrorCode::InvalidParams, "sum field terms disagree on dimension");
  }
}

int SumField::dim() const { return terms_[0]->dim(); }

double SumField::value(const Point& x) const {
  double acc = 0.0;
  for (size_t i = 0; i < terms_.size(); ++i) acc += coefs_[i] * terms_[i]->value(x);
  return acc;
}

bool SumField::c11_at(const Point& x) const {
  for (const auto& t : terms_)
    if (!t->c11_at(x)) return false;
  return true;
}

Point SumField::gradient(const Point& x) const {
  Point g = Point{{0.0, 0.0, 0.0}, dim()};
  for (size_t i = 0; i < terms_.size(); ++i) {
    Point gi = terms_[i]->gradient(x);
    for (int d = 0; d < dim(); ++d) g[d] += coefs_[i] * gi[d];
  }
  return g;
}

DecayBound SumField::decay_bound() const {
  double R = 1.0;
  for (const auto& t : terms_) R = std::max(R, t->decay_bound().valid_radius);
  double beta = 0.0;
  bool any = false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    DecayBound b = terms_[i]->decay_bound();
    if (coefs_[i] == 0.0 || b.c == 0.0) continue;
    beta = any ? std::min(beta, b.beta) : b.beta;
    any = true;
  }
  if (!any) return {0.0, 0.0, R};
  double c = 0.0;
  for (size_t i = 0; i < terms_.size(); ++i) {
    DecayBound b = terms_[i]->decay_bound();
    if (coefs_[i] == 0.0 || b.c == 0.0) continue;
    c += std::fabs(coefs_[i]) * b.c * std::pow(R, beta - b.beta);
  }
  return {c, beta, R};
}

std::string SumField::describe() const {
  std::ostringstream os;
  os << "sum(" << terms_.size() << " terms)";
  return os.str();
}

FieldPtr constant_field(int n, double c) {
  return std::make_shared<AnalyticField>(
      n, [c](const Point&) { return c; },
      [n](const Point&) { return Point{{0.0, 0.0, 0.0}, n}; }, DecayBound{std::fabs(c), 0.0, 1.0},
      "const(" + fmt(c) + ")");
}

FieldPtr gaussian_field(int n, double a, Point center) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidParams, "gaussian needs a > 0");
  center.dim = n;
  double m = center.norm();
  double Rv = m + 4.0 / std::sqrt(a);
  // envelope c r^-4 valid beyond Rv: exp(-a d^2) d^4-type product decreasing there
  double c = std::exp(-a * (Rv - m) * (Rv - m)) * fast_pow(Rv, 4.0);
  auto f = [a, center](const Point& x) {
    Point d = x - center;
    return std::exp(-a * d.norm2());
  };
  auto g = [a, center, n](const Point& x) {
    Point d = x - center;
    double v = std::exp(-a * d.norm2());
    Point out = d * (-2.0 * a * v);
    out.dim = n;
    return out;
  };
  return std::make_shared<AnalyticField>(n, f, g, DecayBound{c, 4.0, Rv},
                                         "gaussian(a=" + fmt(a) + ")");
}

FieldPtr bump_field(int n, Point center, double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidParams, "bump needs positive width");
  center.dim = n;
  double Rv = center.norm() + width;
  auto f = [center, width](const Point& x) {
    double rho2 = (x - center).norm2() / (width * width);
    if (rho2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - rho2));
  };
  auto g = [center, width, n](const Point& x) {
    Point d = x - center;
    double rho2 = d.norm2() / (width * width);
    Point out = Point{{0.0, 0.0, 0.0}, n};
    if (rho2 >= 1.0) return out;
    double q = 1.0 - rho2;
    double v = std::exp(1.0 - 1.0 / q);
    out = d * (-2.0 * v / (q * q * width * width));
    out.dim = n;
    return out;
  };
  return std::make_shared<AnalyticField>(n, f, g, DecayBound{0.0, 0.0, std::max(Rv, 1e-6)},
                                         "bump(w=" + fmt(width) + ")");
}

FieldPtr parabolic_cap_field(int n) {
  auto f = [](const Point& x) {
    double q = 1.0 - x.norm2();
    return q > 0.0 ? q * q : 0.0;
  };
  auto g = [n](const Point& x) {
    double q = 1.0 - x.norm2();
    Point out = q > 0.0 ? x * (-4.0 * q) : Point{{0.0, 0.0, 0.0}, n};
    out.dim = n;
    return out;
  };
  return std::make_shared<AnalyticField>(n, f, g, DecayBound{0.0, 0.0, 1.0}, "parabolic_cap");
}

FieldPtr power_decay_field(int n, double c, double beta) {
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidParams, "power decay field needs beta >= 0");
  auto f = [c, beta](const Point& x) { return c * std::pow(1.0 + x.norm2(), -beta / 2.0); };
  auto g = [c, beta, n](const Point& x) {
    double b = 1.0 + x.norm2();
    Point out = x * (c * -beta * std::pow(b, -beta / 2.0 - 1.0));
    out.dim = n;
    return out;
  };
  return std::make_shared<AnalyticField>(n, f, g, DecayBound{std::fabs(c), beta, 1.0},
                                         "power_decay(c=" + fmt(c) + ", beta=" + fmt(beta) + ")");
}

namespace {

// Shared radial panelization: [0,1] then doubling, clipped at R.
std::vector<std::pair<double, double>> radial_panels(double R) {
  std::vector<std::pair<double, double>> p;
  double lo = 0.0, hi = std::min(1.0, R);
  while (lo < R) {
    p.emplace_back(lo, hi);
    lo = hi;
    hi = std::min(2.0 * hi, R);
    if (p.size() > 200) break;
  }
  return p;
}

struct TailPieces {
  double numeric_g = 0.0, numeric_gp = 0.0;
};

}  // namespace

TailReport check_tail_membership(const ScalarField& field, const YoungFunction& Y, double s,
                                 double R_max, int quad_pts) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidParams, "s must lie in (0,1)");
  if (quad_pts < 4) throw Error(ErrorCode::InvalidParams, "tail quadrature needs at least 4 points");
  if (!(R_max > 0.0)) throw Error(ErrorCode::InvalidParams, "R_max must be positive");
  int n = field.dim();
  if (n > 2) throw Error(ErrorCode::InvalidParams, "tail quadrature supports n <= 2");

  auto integrands = [&](const Point& x, double& ig, double& igp) {
    double r = x.norm();
    double arg = std::fabs(field.value(x)) / (1.0 + std::pow(r, s));
    double w = 1.0 / (1.0 + std::pow(r, n + s));
    ig = Y.g(arg) * w;
    igp = Y.gprime(arg) * w;
  };

  const QuadRule& q = gauss_legendre(quad_pts);
  TailPieces num;
  if (n == 1) {
    for (auto [lo, hi] : radial_panels(R_max)) {
      double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
      for (size_t k = 0; k < q.nodes.size(); ++k) {
        double rho = c + hw * q.nodes[k];
        for (double sgn : {-1.0, 1.0}) {
          double ig, igp;
          integrands(Point::of(sgn * rho), ig, igp);
          num.numeric_g += hw * q.weights[k] * ig;
          num.numeric_gp += hw * q.weights[k] * igp;
        }
      }
    }
  } else {
    int M = std::max(8, quad_pts + (quad_pts & 1));
    for (auto [lo, hi] : radial_panels(R_max)) {
      double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
      for (size_t k = 0; k < q.nodes.size(); ++k) {
        double rho = c + hw * q.nodes[k];
        double wr = hw * q.weights[k] * rho * (2.0 * M_PI / M);
        for (int j = 0; j < M; ++j) {
          double th = 2.0 * M_PI * (j + 0.5) / M;
          double ig, igp;
          integrands(Point::of(rho * std::cos(th), rho * std::sin(th)), ig, igp);
          num.numeric_g += wr * ig;
          num.numeric_gp += wr * igp;
        }
      }
    }
  }

  DecayBound db = field.decay_bound();
  double pm = Y.p_minus(), pp = Y.p_plus();
  double omega = n == 1 ? 2.0 : 2.0 * M_PI;
  double R0 = std::max({R_max, db.valid_radius, 1.0});
  double e = db.beta + s;

  TailReport rep;
  rep.truncation_radius = R_max;
  rep.integral_estimate = num.numeric_g;
  rep.gprime_integral_estimate = num.numeric_gp;

  double bound_g = 0.0, bound_gp = 0.0;
  if (db.c == 0.0) {
    rep.notes = "decay envelope vanishes beyond " + fmt(db.valid_radius);
  } else if (e > 0.0) {
    double R1 = std::max(R0, std::pow(db.c, 1.0 / e));
    // patch where the g-argument may exceed 1, then the small-argument power bound
    double patch_g = Y.g(db.c * std::pow(R0, -e)) * (std::pow(R0, -s) - std::pow(R1, -s)) / s;
    double patch_gp = Y.gprime(db.c * std::pow(R0, -e)) * (std::pow(R0, -s) - std::pow(R1, -s)) / s;
    double kg = e * (pm - 1.0) + s;
    double kgp = e * (pm - 2.0) + s;
    bound_g = omega * (patch_g + Y.g(1.0) * std::pow(db.c, pm - 1.0) * std::pow(R1, -kg) / kg);
    bound_gp = omega * (patch_gp + (pp - 1.0) * Y.g(1.0) * std::pow(db.c, pm - 2.0) *
                                       std::pow(R1, -kgp) / kgp);
  } else if (e == 0.0) {
    bound_g = omega * Y.g(db.c) * std::pow(R0, -s) / s;
    bound_gp = omega * Y.gprime(db.c) * std::pow(R0, -s) / s;
  } else {
    double kg = s - (-e) * (pp - 1.0);
    if (kg <= 0.0)
      throw Error(ErrorCode::UnboundedTail,
                  "declared growth (beta=" + fmt(db.beta) + ") defeats the tail bound: " +
                      "exponent " + fmt(kg) + " <= 0");
    double R2 = std::max(R0, std::pow(db.c, 1.0 / e));
    double patch = omega * Y.g(1.0) * std::pow(R0, -s) / s;
    bound_g = patch + omega * Y.g(1.0) * std::pow(db.c, pp - 1.0) * std::pow(R2, -kg) / kg;
    double kgp = s - (-e) * (pp - 2.0);
    bound_gp = patch * (pp - 1.0) +
               omega * (pp - 1.0) * Y.g(1.0) * std::pow(db.c, pp - 2.0) * std::pow(R2, -kgp) / kgp;
    rep.notes = "declared growth; bound uses the upper index";
  }

  rep.truncation_bound = bound_g;
  rep.gprime_truncation_bound = bound_gp;
  rep.in_L_g = std::isfinite(num.numeric_g) && std::isfinite(bound_g);
  rep.in_L_gprime = std::isfinite(num.numeric_gp) && std::isfinite(bound_gp);
  return rep;
}

namespace {

std::string body_path_for(const std::string& header_path, const std::string& ext) {
  size_t dot = header_path.find_last_of('.');
  size_t slash = header_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return header_path + ext;
  return header_path.substr(0, dot) + ext;
}

std::string basename_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

void write_field(const GridField& field, const std::string& header_path,
                 const std::string& body_format) {
  if (body_format != "f64le" && body_format != "csv")
    throw Error(ErrorCode::InvalidParams, "field body format must be f64le or csv");
  std::string ext = body_format == "f64le" ? ".bin" : ".csv";
  std::string body = body_path_for(header_path, ext);

  std::ofstream hf(header_path);
  if (!hf) throw Error(ErrorCode::IoError, "cannot write " + header_path);
  hf << "fracg-field 1\n";
  hf << "n = " << field.dim() << "\n";
  hf << "origin = " << fmt(field.origin()[0]);
  if (field.dim() == 2) hf << " " << fmt(field.origin()[1]);
  hf << "\n";
  hf << "h = " << fmt(field.spacing()) << "\n";
  hf << "extents = " << field.extents()[0] << " " << field.extents()[1] << "\n";
  const auto& ex = field.exterior();
  if (ex.kind == ExteriorKind::Zero)
    hf << "exterior = zero\n";
  else
    hf << "exterior = powerdecay " << fmt(ex.c) << " " << fmt(ex.beta) << "\n";
  hf << "format = " << body_format << "\n";
  hf << "data = " << basename_of(body) << "\n";
  if (!hf.good()) throw Error(ErrorCode::IoError, "short write on " + header_path);
  hf.close();

  if (body_format == "f64le") {
    std::ofstream bf(body, std::ios::binary);
    if (!bf) throw Error(ErrorCode::IoError, "cannot write " + body);
    static_assert(sizeof(double) == 8);
    bf.write(reinterpret_cast<const char*>(field.data().data()),
             static_cast<std::streamsize>(field.data().size() * sizeof(double)));
    if (!bf.good()) throw Error(ErrorCode::IoError, "short write on " + body);
  } else {
    std::ofstream bf(body);
    if (!bf) throw Error(ErrorCode::IoError, "cannot write " + body);
    for (double v : field.data()) bf << fmt(v) << "\n";
    if (!bf.good()) throw Error(ErrorCode::IoError, "short write on " + body);
  }
}

GridField read_field(const std::string& header_path) {
  std::ifstream hf(header_path);
  if (!hf) throw Error(ErrorCode::IoError, "cannot read " + header_path);
  std::string line;
  if (!std::getline(hf, line) || line != "fracg-field 1")
    throw Error(ErrorCode::ParseError, header_path + ":1: expected magic 'fracg-field 1'");

  int n = 0;
  Point origin = Point::of(0.0);
  double h = 0.0;
  std::array<int, 2> extents{0, 1};
  ExteriorModel ext;
  std::string format, data_name;
  int lineno = 1;
  while (std::getline(hf, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, eq;
    ls >> key >> eq;
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::ParseError,
                   header_path + ":" + std::to_string(lineno) + ": " + why);
    };
    if (eq != "=") throw bad("expected 'key = value'");
    if (key == "n") {
      ls >> n;
    } else if (key == "origin") {
      if (!(ls >> origin[0])) throw bad("malformed value for 'origin'");
      if (!(ls >> origin[1])) {
        ls.clear();  // second component optional for 1-d grids
        origin[1] = 0.0;
      }
    } else if (key == "h") {
      ls >> h;
    } else if (key == "extents") {
      ls >> extents[0] >> extents[1];
    } else if (key == "exterior") {
      std::string kind;
      ls >> kind;
      if (kind == "zero") {
        ext = ExteriorModel::zero();
      } else if (kind == "powerdecay") {
        double c, beta;
        if (!(ls >> c >> beta)) throw bad("powerdecay needs c and beta");
        ext = ExteriorModel::power_decay(c, beta);
      } else {
        throw bad("unknown exterior '" + kind + "'");
      }
    } else if (key == "format") {
      ls >> format;
    } else if (key == "data") {
      ls >> data_name;
    } else {
      throw bad("unknown key '" + key + "'");
    }
    if (ls.fail()) throw bad("malformed value for '" + key + "'");
  }
  if (n == 0 || h == 0.0 || extents[0] == 0 || format.empty() || data_name.empty())
    throw Error(ErrorCode::ParseError, header_path + ": missing required keys");

  size_t slash = header_path.find_last_of('/');
  std::string body =
      slash == std::string::npos ? data_name : header_path.substr(0, slash + 1) + data_name;
  size_t count = static_cast<size_t>(extents[0]) * static_cast<size_t>(extents[1]);
  std::vector<double> data(count);
  if (format == "f64le") {
    std::ifstream bf(body, std::ios::binary);
    if (!bf) throw Error(ErrorCode::IoError, "cannot read " + body);
    bf.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (bf.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
      throw Error(ErrorCode::IoError, body + ": truncated sample data");
  } else if (format == "csv") {
    std::ifstream bf(body);
    if (!bf) throw Error(ErrorCode::IoError, "cannot read " + body);
    for (size_t i = 0; i < count; ++i)
      if (!(bf >> data[i]))
        throw Error(ErrorCode::IoError, body + ": truncated at sample " + std::to_string(i));
  } else {
    throw Error(ErrorCode::ParseError, header_path + ": unknown format '" + format + "'");
  }
  origin.dim = n;
  return GridField(n, origin, h, extents, std::move(data), ext);
}

}  // namespace fracg
