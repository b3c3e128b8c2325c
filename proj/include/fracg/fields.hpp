#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fracg/util.hpp"
#include "fracg/young.hpp"

namespace fracg {

enum class ExteriorKind { Zero, PowerDecay };

/// Value model outside a grid box: identically zero, or c * |x|^-beta.
struct ExteriorModel {
  ExteriorKind kind = ExteriorKind::Zero;
  double c = 0.0;
  double beta = 0.0;

  static ExteriorModel zero() { return {}; }
  static ExteriorModel power_decay(double c, double beta);
  double value(const Point& x) const;
};

/// Declared decay envelope: |u(x)| <= c * |x|^-beta for |x| >= valid_radius.
/// beta < 0 declares growth; tail checks then decide summability honestly.
struct DecayBound {
  double c = 0.0;
  double beta = 0.0;
  double valid_radius = 1.0;
};

class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual double value(const Point& x) const = 0;
  /// True where a two-sided second-order Taylor control is available.
  virtual bool c11_at(const Point& x) const = 0;
  /// Throws NotC11At where c11_at is false.
  virtual Point gradient(const Point& x) const = 0;
  virtual DecayBound decay_bound() const = 0;
  virtual std::string describe() const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Uniform grid samples in 1-D or 2-D with cubic interpolation between nodes
/// and an exterior model outside the box. Immutable after construction.
class GridField : public ScalarField {
public:
  GridField(int n, Point origin, double h, std::array<int, 2> extents, std::vector<double> data,
            ExteriorModel exterior);

  int dim() const override { return n_; }
  double value(const Point& x) const override;
  bool c11_at(const Point& x) const override;
  Point gradient(const Point& x) const override;
  DecayBound decay_bound() const override;
  std::string describe() const override;

  const Point& origin() const { return origin_; }
  double spacing() const { return h_; }
  const std::array<int, 2>& extents() const { return extents_; }
  const std::vector<double>& data() const { return data_; }
  const ExteriorModel& exterior() const { return exterior_; }

  Point node_point(int i, int j = 0) const;
  double node_value(int i, int j = 0) const { return data_[flat(i, j)]; }
  size_t flat(int i, int j = 0) const {
    return static_cast<size_t>(i) * static_cast<size_t>(extents_[1]) + static_cast<size_t>(j);
  }
  /// Circumradius of the box around the coordinate origin.
  double box_radius() const;
  /// Half the shortest box side; bounds usable near-field radii.
  double min_halfwidth() const;
  bool inside_box(const Point& x) const;

private:
  int n_;
  Point origin_;
  double h_;
  std::array<int, 2> extents_;
  std::vector<double> data_;
  ExteriorModel exterior_;
};

/// Callback-backed field, assumed C^{1,1} everywhere. The decay bound is a
/// declaration by the caller; tail checks trust it and say so in reports.
class AnalyticField : public ScalarField {
public:
  AnalyticField(int n, std::function<double(const Point&)> f,
                std::function<Point(const Point&)> grad, DecayBound decay, std::string label);

  int dim() const override { return n_; }
  double value(const Point& x) const override { return f_(x); }
  bool c11_at(const Point&) const override { return true; }
  Point gradient(const Point& x) const override;
  DecayBound decay_bound() const override { return decay_; }
  std::string describe() const override { return label_; }

private:
  int n_;
  std::function<double(const Point&)> f_;
  std::function<Point(const Point&)> grad_;  // empty: 4th-order central differences
  DecayBound decay_;
  std::string label_;
};

/// x with coordinate `axis` replaced by 2*lambda - x[axis].
Point reflect_point(const Point& x, int axis, double lambda);

/// Lazy u(x^lambda); reflect(reflect(u)) pointwise equals u exactly.
class ReflectedField : public ScalarField {
public:
  ReflectedField(FieldPtr base, int axis, double lambda);

  int dim() const override { return base_->dim(); }
  double value(const Point& x) const override { return base_->value(reflect_point(x, axis_, lambda_)); }
  bool c11_at(const Point& x) const override { return base_->c11_at(reflect_point(x, axis_, lambda_)); }
  Point gradient(const Point& x) const override;
  DecayBound decay_bound() const override;
  std::string describe() const override;

private:
  FieldPtr base_;
  int axis_;
  double lambda_;
};

FieldPtr reflect(FieldPtr field, double lambda, int axis);

/// sum_i coef_i * field_i; dimensions must agree.
class SumField : public ScalarField {
public:
  SumField(std::vector<double> coefs, std::vector<FieldPtr> terms);

  int dim() const override;
  double value(const Point& x) const override;
  bool c11_at(const Point& x) const override;
  Point gradient(const Point& x) const override;
  DecayBound decay_bound() const override;
  std::string describe() const override;

private:
  std::vector<double> coefs_;
  std::vector<FieldPtr> terms_;
};

// Canned analytic fields used by tests and the CLI.
FieldPtr constant_field(int n, double c);
/// exp(-a |x - center|^2)
FieldPtr gaussian_field(int n, double a = 1.0, Point center = Point::of(0.0));
/// Smooth compactly supported mollifier: exp(1 - 1/(1 - r^2)) on r = |x-c|/w < 1, else 0.
FieldPtr bump_field(int n, Point center, double width);
/// (1 - |x|^2)_+^2, C^{1,1} across the support edge.
FieldPtr parabolic_cap_field(int n);
/// c (1 + |x|^2)^{-beta/2}
FieldPtr power_decay_field(int n, double c, double beta);

struct TailReport {
  double integral_estimate = 0.0;
  bool in_L_g = false;
  bool in_L_gprime = false;
  double truncation_radius = 0.0;
  double truncation_bound = 0.0;
  double gprime_integral_estimate = 0.0;
  double gprime_truncation_bound = 0.0;
  std::string notes;
};

/// Integrates g(|u|/(1+|x|^s)) dx/(1+|x|^{n+s}) over |x| <= R_max and bounds the
/// remainder from the decay envelope and the scaling sandwich of g. A growth
/// declaration that defeats the bound raises UnboundedTail.
TailReport check_tail_membership(const ScalarField& field, const YoungFunction& Y, double s,
                                 double R_max, int quad_pts);

// Grid field serialization: text header plus a raw or CSV body next to it.
void write_field(const GridField& field, const std::string& header_path,
                 const std::string& body_format = "f64le");
GridField read_field(const std::string& header_path);

}  // namespace fracg
