#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace systolic::symp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vec4 = Eigen::Vector4d;

/// Coordinates are ordered (q_1..q_m, p_1..p_m). The standard form is
/// omega_0(u, v) = <J u, v> with J(q, p) = (p, -q), which equals
/// sum dp_j ^ dq_j and gives X_H = J grad H = (dH/dp, -dH/dq).
Matrix standard_j(int m);

struct SymplecticCheck {
    bool symplectic = false;
    double residual = 0.0; ///< max |(M^T J M - J)_{ij}|
};

SymplecticCheck is_symplectic(const Matrix& M, double tol = 1e-12);

/// E(a) = { sum (q_i^2 + p_i^2) / a_i <= 1 }, stored with a sorted ascending.
class EllipsoidSpec {
public:
    explicit EllipsoidSpec(std::vector<double> a);
    const std::vector<double>& a() const { return a_; }
    int m() const { return static_cast<int>(a_.size()); }

private:
    std::vector<double> a_;
};

double capacity_ellipsoid(const EllipsoidSpec& e);
double volume_ellipsoid(const EllipsoidSpec& e);
/// a_1^m / prod a_i, evaluated as prod (a_1 / a_i).
double viterbo_ratio_ellipsoid(const EllipsoidSpec& e);

/// Diagonal symplectic map sending the oscillator sublevel
/// { |p|^2 + sum q_i^2 / a_i^2 <= 1 } onto E(a). The scale s_i is 1:
/// (q_i, p_i) -> (q_i / sqrt(a_i), p_i sqrt(a_i)).
Matrix oscillator_normal_form(const std::vector<double>& a);

/// Reeb flow of the standard contact form on the unit sphere: each (q_j, p_j)
/// pair is rotated by angle 2t along 2 X_H, H = |z|^2 / 2. Period pi.
Vector hopf_flow(const Vector& z, double t);

/// Same flow obtained by integrating z' = 2 J z with Dormand-Prince 5(4).
Vector reeb_flow_numeric(const Vector& z, double t, double tol = 1e-12);

/// Area of the projection of M(B^{2m}) to the (q_1, p_1) plane.
double shadow_area_linear(const Matrix& M);

/// Product of `factors` random elementary symplectic maps: shears
/// [[I,S],[0,I]], [[I,0],[S,I]] with S symmetric, and embedded unitaries.
Matrix random_symplectic(int m, std::mt19937_64& rng, int factors = 10);

/// Volume-preserving, non-symplectic map scaling q_1 and p_1 by 1/2 and the
/// second pair by 2 (m >= 2). Its shadow area is pi/4.
Matrix squeeze_control(int m);

/// Real 2m x 2m matrix of a complex m x m matrix acting on z_j = p_j + i q_j.
Matrix realify(const Eigen::MatrixXcd& U);

/// Positive function psi on S^3 in R^4 sampled on the Hopf grid
/// z_1 = cos(eta) e^{i xi_1}, z_2 = sin(eta) e^{i xi_2}, with u = cos(2 eta)
/// at Gauss-Legendre nodes and xi_1, xi_2 uniform. Points are
/// (q_1, q_2, p_1, p_2) = (Re z_1, Re z_2, Im z_1, Im z_2).
class RadialHypersurfaceS3 {
public:
    static constexpr int kDefaultNu = 32;
    static constexpr int kDefaultNxi = 64;

    static RadialHypersurfaceS3 sample(const std::function<double(const Vec4&)>& psi, int nu = kDefaultNu,
                                       int nxi1 = kDefaultNxi, int nxi2 = kDefaultNxi);

    static Vec4 point(double u, double xi1, double xi2);

    int nu() const { return nu_; }
    int nxi1() const { return nxi1_; }
    int nxi2() const { return nxi2_; }
    const std::vector<double>& u_nodes() const { return u_; }
    const std::vector<double>& u_weights() const { return w_; }
    double at(int iu, int i1, int i2) const { return values_[(static_cast<std::size_t>(iu) * nxi1_ + i1) * nxi2_ + i2]; }
    double min_value() const;
    double max_value() const;

private:
    RadialHypersurfaceS3() = default;
    int nu_ = 0, nxi1_ = 0, nxi2_ = 0;
    std::vector<double> u_, w_, values_;
};

/// Contact volume of S_psi = { psi(x) x : x in S^3 }: (1/2) int psi^4 dsigma.
/// Equals pi^2 for psi = 1.
double contact_volume_radial_S3(const RadialHypersurfaceS3& h);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Euclidean volume of { x : |x| <= psi(x/|x|) } by uniform sampling in the
/// cube [-r_max, r_max]^4. Throws if a sampled direction has psi > r_max.
MonteCarloEstimate star_volume_monte_carlo(const std::function<double(const Vec4&)>& psi, double r_max,
                                           std::uint64_t samples, std::uint64_t seed);

/// psi(x) = c + b.x + x^T C x; a smooth test family on S^3.
struct QuadraticDensity {
    double c = 1.0;
    Vec4 b = Vec4::Zero();
    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();

    double operator()(const Vec4& x) const { return c + b.dot(x) + x.dot(C * x); }
    /// c = 1, |b_i| <= 0.15, |C_ij| <= 0.1: values in [0.3, 1.7] on S^3.
    static QuadraticDensity random(std::mt19937_64& rng);
    static constexpr double kRandomBound = 1.7;
};

} // namespace systolic::symp
