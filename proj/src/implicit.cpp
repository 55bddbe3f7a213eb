#include "curvkit/implicit.hpp"

#include <cmath>

namespace curvkit {

SquishedTorus::SquishedTorus(double R, double r, double a) : R_(R), r_(r), a_(a) {
    if (!(R > r && r > 0.0 && a > 0.0))
        throw InvalidParameter("SquishedTorus: need R > r > 0 and a > 0");
}

double SquishedTorus::phi(const Vec3& x) const {
    double rho = std::hypot(x.x, x.y);
    double g = R_ - rho;
    return g * g + a_ * x.z * x.z - r_ * r_;
}

Vec3 SquishedTorus::gradient(const Vec3& x) const {
    double rho = std::hypot(x.x, x.y);
    if (rho == 0.0) throw SingularGradient("torus gradient undefined on the z-axis");
    double g = R_ - rho;
    return {-2.0 * g * x.x / rho, -2.0 * g * x.y / rho, 2.0 * a_ * x.z};
}

Mat3 SquishedTorus::hessian(const Vec3& x) const {
    double rho = std::hypot(x.x, x.y);
    if (rho == 0.0) throw SingularGradient("torus Hessian undefined on the z-axis");
    double g = R_ - rho;
    double rho3 = rho * rho * rho;
    Mat3 h;
    h(0, 0) = 2.0 * x.x * x.x / (rho * rho) - 2.0 * g * x.y * x.y / rho3;
    h(1, 1) = 2.0 * x.y * x.y / (rho * rho) - 2.0 * g * x.x * x.x / rho3;
    h(0, 1) = h(1, 0) = 2.0 * x.x * x.y / (rho * rho) + 2.0 * g * x.x * x.y / rho3;
    h(2, 2) = 2.0 * a_;
    h(0, 2) = h(2, 0) = h(1, 2) = h(2, 1) = 0.0;
    return h;
}

double SquishedTorus::round_distance(const Vec3& x) const {
    double rho = std::hypot(x.x, x.y);
    return std::hypot(rho - R_, x.z) - r_;
}

double SquishedTorus::round_mean_curvature_at_theta(double theta) const {
    double c = std::cos(theta);
    return 0.5 * (1.0 / r_ + c / (R_ + r_ * c));
}

Sphere::Sphere(double radius) : radius_(radius) {
    if (!(radius > 0.0)) throw InvalidParameter("Sphere: radius must be positive");
}

double Sphere::phi(const Vec3& x) const { return norm2(x) - radius_ * radius_; }

Vec3 Sphere::gradient(const Vec3& x) const {
    if (norm2(x) == 0.0) throw SingularGradient("sphere gradient undefined at the center");
    return x * 2.0;
}

Mat3 Sphere::hessian(const Vec3&) const { return Mat3::identity() * 2.0; }

Vec3 exact_normal(const ImplicitSurface& surface, const Vec3& x) {
    Vec3 g = surface.gradient(x);
    double n = norm(g);
    if (n < 1e-300) throw SingularGradient("vanishing level-set gradient");
    return g / n;
}

double exact_mean_curvature(const ImplicitSurface& surface, const Vec3& x) {
    Vec3 g = surface.gradient(x);
    double gn2 = norm2(g);
    if (gn2 < 1e-300) throw SingularGradient("vanishing level-set gradient");
    Mat3 h = surface.hessian(x);
    // k1 + k2 = div(g/|g|) = (|g|^2 tr(H) - g^T H g) / |g|^3
    double k_sum = (gn2 * h.trace() - quadratic_form(h, g)) / (gn2 * std::sqrt(gn2));
    return 0.5 * k_sum;
}

SurfacePoint project_to_surface(const ImplicitSurface& surface, const Vec3& x, double tol,
                                int max_iterations) {
    Vec3 p = x;
    double value = surface.phi(p);
    for (int it = 0; it < max_iterations; ++it) {
        if (std::abs(value) <= tol) return {p, std::abs(value)};
        Vec3 g = surface.gradient(p);
        double gn2 = norm2(g);
        if (gn2 < 1e-300) throw SingularGradient("projection hit a gradient singularity");
        p -= g * (value / gn2);
        value = surface.phi(p);
    }
    if (std::abs(value) <= tol) return {p, std::abs(value)};
    throw NoConvergence("surface projection did not converge", std::abs(value), max_iterations);
}

double signed_distance(const ImplicitSurface& surface, const Vec3& x, double tol) {
    double value = surface.phi(x);
    SurfacePoint p = project_to_surface(surface, x, tol);
    double d = norm(x - p.position);
    return value > 0.0 ? d : (value < 0.0 ? -d : 0.0);
}

}  // namespace curvkit
