#pragma once

#include "curvkit/errors.hpp"
#include "curvkit/vec3.hpp"

namespace curvkit {

// Analytic level-set surface {x : phi(x) = 0} with outward orientation
// (phi > 0 outside). Supplies gradient and Hessian for exact normals,
// curvature, and closest-point projection.
class ImplicitSurface {
public:
    virtual ~ImplicitSurface() = default;
    virtual double phi(const Vec3& x) const = 0;
    virtual Vec3 gradient(const Vec3& x) const = 0;
    virtual Mat3 hessian(const Vec3& x) const = 0;
};

// (R - sqrt(x^2+y^2))^2 + a z^2 - r^2. The squish factor a > 1 compresses the
// tube in z and concentrates curvature on the inner and outer equators.
class SquishedTorus final : public ImplicitSurface {
public:
    SquishedTorus(double R, double r, double a);
    double phi(const Vec3& x) const override;
    Vec3 gradient(const Vec3& x) const override;
    Mat3 hessian(const Vec3& x) const override;

    double R() const { return R_; }
    double r() const { return r_; }
    double a() const { return a_; }

    // Round-torus (a = 1) closed forms, used as oracles.
    double round_distance(const Vec3& x) const;             // signed distance, a=1 only
    double round_mean_curvature_at_theta(double theta) const;  // (1/r + cos t/(R + r cos t))/2

private:
    double R_, r_, a_;
};

class Sphere final : public ImplicitSurface {
public:
    explicit Sphere(double radius);
    double phi(const Vec3& x) const override;
    Vec3 gradient(const Vec3& x) const override;
    Mat3 hessian(const Vec3& x) const override;
    double radius() const { return radius_; }

private:
    double radius_;
};

struct SurfacePoint {
    Vec3 position;
    double residual;  // |phi| at the returned point
};

// Unit outward normal grad(phi)/|grad(phi)|. Throws SingularGradient where the
// gradient vanishes (torus: the z-axis and the tube-center circle).
Vec3 exact_normal(const ImplicitSurface& surface, const Vec3& x);

// Mean curvature H = (k1 + k2)/2 = div(grad phi / |grad phi|) / 2, positive for
// a sphere with outward normal.
double exact_mean_curvature(const ImplicitSurface& surface, const Vec3& x);

// Newton iteration along the gradient: x <- x - phi * grad/|grad|^2 until
// |phi| <= tol (at most max_iterations). Throws NoConvergence outside the basin.
SurfacePoint project_to_surface(const ImplicitSurface& surface, const Vec3& x,
                                double tol = 1e-12, int max_iterations = 50);

// sign(phi(x)) * |x - project_to_surface(x)|.
double signed_distance(const ImplicitSurface& surface, const Vec3& x, double tol = 1e-12);

}  // namespace curvkit
