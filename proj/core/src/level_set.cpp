#include "level_set.hpp"

#include <cmath>

namespace kobball::detail {

namespace {

class BallLevel final : public LevelSet {
 public:
  explicit BallLevel(const EuclideanBall& b) : ball_(b) {}

  LevelSetValue evaluate(const CVector& z, bool with_hessian) const override {
    const double inv_r2 = 1.0 / (ball_.radius * ball_.radius);
    const CVector d = z - ball_.center;
    LevelSetValue out;
    out.value = d.squaredNorm() * inv_r2;
    out.gradient = 2.0 * inv_r2 * to_real(d);
    if (with_hessian) out.hessian = 2.0 * inv_r2 * RMatrix::Identity(2 * z.size(), 2 * z.size());
    return out;
  }

 private:
  EuclideanBall ball_;
};

class EllipsoidLevel final : public LevelSet {
 public:
  explicit EllipsoidLevel(const ComplexEllipsoid& e) : e_(e) {}

  LevelSetValue evaluate(const CVector& z, bool with_hessian) const override {
    const Eigen::Index n = z.size();
    LevelSetValue out;
    out.gradient = RVector::Zero(2 * n);
    if (with_hessian) out.hessian = RMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m = e_.exponents[j];
      const double x = z[j].real();
      const double y = z[j].imag();
      const double r2 = x * x + y * y;
      if (r2 == 0.0) {
        if (with_hessian && m == 1.0) out.hessian.block(2 * j, 2 * j, 2, 2) = 2.0 * Eigen::Matrix2d::Identity();
        continue;
      }
      const double pm1 = std::pow(r2, m - 1.0);
      out.value += pm1 * r2;
      out.gradient[2 * j] = 2.0 * m * pm1 * x;
      out.gradient[2 * j + 1] = 2.0 * m * pm1 * y;
      if (with_hessian) {
        const Eigen::Vector2d v(x, y);
        out.hessian.block(2 * j, 2 * j, 2, 2) =
            2.0 * m * pm1 * Eigen::Matrix2d::Identity() + 4.0 * m * (m - 1.0) * (pm1 / r2) * (v * v.transpose());
      }
    }
    return out;
  }

 private:
  ComplexEllipsoid e_;
};

class ImageLevel final : public LevelSet {
 public:
  ImageLevel(const AffineImage& img, std::unique_ptr<LevelSet> source)
      : map_(img.map), source_(std::move(source)), pullback_(real_matrix(img.map.inverse_matrix())) {}

  LevelSetValue evaluate(const CVector& z, bool with_hessian) const override {
    LevelSetValue inner = source_->evaluate(map_.apply_inverse(z), with_hessian);
    LevelSetValue out;
    out.value = inner.value;
    out.gradient = pullback_.transpose() * inner.gradient;
    if (with_hessian) out.hessian = pullback_.transpose() * inner.hessian * pullback_;
    return out;
  }

 private:
  ComplexAffineMap map_;
  std::unique_ptr<LevelSet> source_;
  RMatrix pullback_;
};

}  // namespace

std::unique_ptr<LevelSet> make_level_set(const DomainSpec& d) {
  if (const auto* b = d.as<EuclideanBall>()) return std::make_unique<BallLevel>(*b);
  if (const auto* e = d.as<ComplexEllipsoid>()) return std::make_unique<EllipsoidLevel>(*e);
  if (const auto* img = d.as<AffineImage>()) {
    auto inner = make_level_set(*img->source);
    if (!inner) return nullptr;
    return std::make_unique<ImageLevel>(*img, std::move(inner));
  }
  return nullptr;
}

}  // namespace kobball::detail
