#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace systolic::zoll {

/// Closure tolerance at integrator tolerance 1e-10.
inline constexpr double kCloseTol = 1e-6;
inline constexpr double kIntegratorTol = 1e-10;
/// Default number of Clairaut constants in the certification battery.
inline constexpr std::size_t kClairautCount = 20;

/// Metric of revolution g = (1 + h(cos theta))^2 dtheta^2 + sin^2 theta dphi^2
/// on S^2 with a polynomial profile h.
class RevolutionMetric {
public:
    /// Zoll candidate h(u) = sum_k c_k (u - u^{2k+1}), k = 1, 2, ...
    /// Oddness and h(+-1) = 0 hold by construction.
    static RevolutionMetric zoll(std::span<const double> basis_coeffs);

    /// Arbitrary polynomial profile h(u) = sum_j a_j u^j (monomial basis).
    /// Only h(+-1) = 0 and |h| < 1 are enforced; used for negative controls.
    static RevolutionMetric profile(std::span<const double> monomial_coeffs);

    double h(double u) const;
    double dh(double u) const;
    bool is_odd() const;
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const std::vector<double>& monomial_coeffs() const { return coeffs_; }

    /// E(theta) = (1 + h(cos theta))^2, coefficient of dtheta^2.
    double e(double theta) const;

private:
    explicit RevolutionMetric(std::vector<double> coeffs);
    std::vector<double> coeffs_;
};

/// Phase-space point of the cogeodesic flow; p_phi is the Clairaut constant.
struct GeodesicState {
    double theta = 0.0;
    double phi = 0.0;
    double p_theta = 0.0;
    double p_phi = 0.0;
};

struct Trajectory {
    std::vector<double> s; ///< arc length
    std::vector<GeodesicState> states;
};

class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

/// p_theta^2 / E + p_phi^2 / G; equals 1 along unit-speed geodesics.
double unit_speed_energy(const RevolutionMetric& metric, const GeodesicState& x);

/// Unit-speed state at (theta, phi) with Clairaut constant p_phi and the
/// given sign of p_theta.
GeodesicState unit_speed_state(const RevolutionMetric& metric, double theta, double phi, double p_phi,
                               double sign = 1.0);

/// Geodesic starting on the equator heading towards larger theta.
GeodesicState equator_start(const RevolutionMetric& metric, double p_phi);

/// Integrates the unit-speed geodesic flow for arc length `length` with an
/// adaptive Dormand-Prince 5(4) scheme. Samples are written every `sample_step`
/// (0 picks length/256) and additionally at every station in (0, length].
Trajectory integrate_geodesic(const RevolutionMetric& metric, const GeodesicState& start, double length,
                              double tol = kIntegratorTol, std::span<const double> stations = {},
                              double sample_step = 0.0);

struct ClosureResult {
    bool closed = false;
    double defect = 0.0;
};

/// Compares the state at arc length `period` (a trajectory sample) with the
/// initial state in the product metric on (theta, phi mod 2pi, p_theta, p_phi).
ClosureResult closure_test(const Trajectory& traj, double period, double tol_close = kCloseTol);

/// Arc length at which the geodesic first comes back to the equator heading
/// the same way; for closed geodesics of this family that is the period.
struct FirstReturn {
    double length = 0.0;
    GeodesicState state;
    double phi_defect = 0.0; ///< |phi advance mod 2pi|
};
FirstReturn first_return(const RevolutionMetric& metric, double p_phi, double tol = kIntegratorTol,
                         double max_length = 8.0 * 3.141592653589793);

/// Length of a meridian great circle through both poles, 2 int_0^pi (1 + h(cos theta)) dtheta.
double meridian_length(const RevolutionMetric& metric);

/// 2 pi int_{-1}^{1} (1 + h(u)) du.
double surface_area(const RevolutionMetric& metric);

struct BatteryEntry {
    double p_phi = 0.0;
    double defect = 0.0;
    double closed_length = 0.0; ///< first-return length; meridian length for p_phi = 0
    bool closed = false;
};

struct ZollCertificate {
    std::vector<BatteryEntry> entries; ///< meridian first, then the Clairaut grid
    double max_defect = 0.0;
    bool zoll = false;
};

/// Clairaut constants of the battery: kClairautCount values equispaced on [0.05, 0.95].
std::vector<double> clairaut_grid(std::size_t count = kClairautCount);

/// Closure battery over the meridian and the Clairaut grid.
ZollCertificate certify_zoll(const RevolutionMetric& metric, double tol = kIntegratorTol,
                             double tol_close = kCloseTol, std::size_t count = kClairautCount);

struct WeakRatioEstimate {
    double ratio = 0.0;
    double shortest_closed = 0.0;
    double area = 0.0;
    bool zoll = false; ///< false: the ratio is a raw estimate, not a certified Zoll value
    ZollCertificate certificate;
};

/// (shortest detected closed geodesic)^2 / area.
WeakRatioEstimate weak_systolic_ratio_estimate(const RevolutionMetric& metric, double tol = kIntegratorTol,
                                               double tol_close = kCloseTol);

} // namespace systolic::zoll
