#pragma once

#include <Eigen/Dense>

#include <memory>
#include <random>
#include <vector>

#include "systolic/common.hpp"

namespace systolic::convex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exact hull computations are supported in dimensions 1 to 4.
inline constexpr int kMaxDim = 4;
inline constexpr double kMveeTol = 1e-7;

/// Facet { x : a.x = b } with |a| = 1 and a.x <= b on the body.
struct Facet {
    Vector a;
    double b = 0.0;
    std::vector<int> vertices; ///< indices of input points on the facet
};

/// Convex hull of finitely many points. Interior points are allowed.
class PolytopeV {
public:
    /// Throws if the affine hull is not full-dimensional, if the dimension is
    /// outside [1, kMaxDim], or if `symmetric` is set but the point set is not
    /// closed under x -> -x (tolerance 1e-12 relative to the largest norm).
    PolytopeV(std::vector<Vector> vertices, bool symmetric);

    int n() const { return n_; }
    const std::vector<Vector>& vertices() const { return vertices_; }
    bool symmetric() const { return symmetric_; }
    PolytopeV transformed(const Matrix& T) const;

    /// Facets known from construction (set by polar()), or null.
    const std::vector<Facet>* known_facets() const { return facets_.get(); }
    PolytopeV with_facets(std::vector<Facet> f) const;

private:
    int n_ = 0;
    std::vector<Vector> vertices_;
    bool symmetric_ = false;
    std::shared_ptr<const std::vector<Facet>> facets_;
};

std::vector<Facet> facets(const PolytopeV& P);

/// Extreme points of the hull.
std::vector<Vector> hull_vertices(const PolytopeV& P);

/// Thrown by polar() when the origin is not an interior point; `witness` is a
/// nonzero y with y.x <= 0 on the whole body.
class NotInteriorError : public InputError {
public:
    NotInteriorError(const std::string& what, Vector w) : InputError(what), witness(std::move(w)) {}
    Vector witness;
};

/// Polar body: each facet a.x <= b of P gives the vertex a / b, and each
/// vertex v of P gives the facet v.y <= 1 of the result.
PolytopeV polar(const PolytopeV& P);

/// Cone decomposition over facets from the centroid, recursing into facets.
double volume(const PolytopeV& P);

/// vol(P) vol(P polar). Requires the symmetric flag.
double mahler_volume(const PolytopeV& P);

struct SantaloMahlerReport {
    double value = 0.0;
    double lower = 0.0; ///< 4^n / n!
    double upper = 0.0; ///< vol(B^n)^2
    bool within = false;
};

SantaloMahlerReport santalo_mahler_check(const PolytopeV& P, double eps = 1e-12);

/// { x : (x - c)^T A (x - c) <= 1 }.
struct EllipsoidBody {
    Vector center;
    Matrix A;

    double volume() const;
    double level(const Vector& x) const { return (x - center).dot(A * (x - center)); }
};

double unit_ball_volume(int n);

/// Minimum-volume enclosing ellipsoid by Khachiyan iterations with
/// Todd-Yildirim away steps. Stops when the optimality gap is <= tol, then
/// scales A so that every point satisfies level <= 1.
EllipsoidBody mvee(const std::vector<Vector>& points, double tol = kMveeTol);

/// Symplectic eigenvalues nu_1 <= ... <= nu_m of a positive-definite 2m x 2m
/// matrix in the (q, p) ordering.
std::vector<double> symplectic_eigenvalues(const Matrix& A);

struct CoarseViterboReport {
    EllipsoidBody ellipsoid;
    double volume_p = 0.0;
    double volume_e = 0.0;
    double c_upper = 0.0;        ///< pi / nu_max, capacity of the enclosing ellipsoid
    double viterbo_proxy = 0.0;  ///< c_upper^m / (m! vol P)
    double volume_ratio = 0.0;   ///< vol E / vol P
    double bound = 0.0;          ///< (4m)^m
    bool holds = false;          ///< viterbo_proxy <= volume_ratio <= bound
};

CoarseViterboReport coarse_viterbo_bound(const PolytopeV& P, double tol = kMveeTol);

/// `half` random points (uniform in the unit ball) together with their negatives.
PolytopeV random_symmetric_polytope(int n, int half, std::mt19937_64& rng);

PolytopeV cube(int n);
PolytopeV cross_polytope(int n);

} // namespace systolic::convex
