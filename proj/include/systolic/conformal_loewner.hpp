#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "systolic/flat_moduli.hpp"

namespace systolic::loewner {

/// Default quadrature tolerance for certifying the inequality chain.
inline constexpr double kQuadratureEps = 1e-9;

/// Conformal metric f^2 g* on a flat torus. f is sampled on the unit square
/// of parameters (s,t), which maps to the torus point s*(1,0) + t*(x0,y0);
/// row t of the grid is therefore the horizontal closed curve
/// gamma_t(s) = (s + t x0, t y0). The grid is doubly periodic: sample (i,j)
/// sits at (j/ns, i/nt) and there is no duplicated seam.
class ConformalTorusMetric {
public:
    ConformalTorusMetric(flat::TorusModulus modulus, std::size_t nt, std::size_t ns, std::vector<double> f);

    /// Samples f(s,t) given on parameter coordinates.
    static ConformalTorusMetric sample(flat::TorusModulus modulus, std::size_t nt, std::size_t ns,
                                       const std::function<double(double, double)>& f);

    /// Samples f(x,y) given on Euclidean coordinates of the flat torus.
    static ConformalTorusMetric sample_euclidean(flat::TorusModulus modulus, std::size_t nt, std::size_t ns,
                                                 const std::function<double(double, double)>& f);

    const flat::TorusModulus& modulus() const { return modulus_; }
    std::size_t rows() const { return nt_; }
    std::size_t cols() const { return ns_; }
    double at(std::size_t row, std::size_t col) const { return f_[row * ns_ + col]; }
    const std::vector<double>& values() const { return f_; }

    /// Bilinear interpolation on the periodic grid.
    double value_at(double s, double t) const;

    ConformalTorusMetric scaled(double c) const;

private:
    flat::TorusModulus modulus_;
    std::size_t nt_;
    std::size_t ns_;
    std::vector<double> f_;
};

struct LoewnerReport {
    double area_g = 0.0;
    /// y0 * int_0^1 l(gamma_t)^2 dt, the bound after the AM-QM stage.
    double mean_sq_bound = 0.0;
    double min_horizontal_length = 0.0;
    /// min_t l(gamma_t)^2 / area_g; an upper bound for sigma(g).
    double sigma_upper = 0.0;
    /// 1 / y0, the systolic ratio of the underlying flat metric.
    double flat_ratio = 0.0;
    /// { AM-QM gap, min-AM gap, 1/y0 - sigma_upper }, all >= 0 up to quadrature error.
    std::array<double, 3> stage_gaps{};
    /// Smallest per-row AM-QM gap int f^2 ds - (int f ds)^2.
    double min_row_gap = 0.0;
    bool certified = false;
};

/// vol_g(T^2) = y0 * int int f^2 ds dt, periodic trapezoid.
double area(const ConformalTorusMetric& metric);

/// l(gamma_t) = int_0^1 f(s + t x0, t y0) ds for each grid row.
std::vector<double> horizontal_lengths(const ConformalTorusMetric& metric);

/// Length of gamma_t for arbitrary t, interpolating between rows.
double horizontal_length_at(const ConformalTorusMetric& metric, double t);

LoewnerReport loewner_chain_check(const ConformalTorusMetric& metric, double eps = kQuadratureEps);

} // namespace systolic::loewner
