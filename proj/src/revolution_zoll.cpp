#include "systolic/revolution_zoll.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "systolic/common.hpp"
#include "systolic/quadrature.hpp"

namespace odeint = boost::numeric::odeint;

namespace systolic::zoll {

namespace {

using State = std::array<double, 4>;

constexpr double kHalfPi = 0.5 * kPi;
constexpr double kMinSinTheta = 0.05;

double wrap_angle(double a)
{
    // Into (-pi, pi].
    a = std::remainder(a, kTwoPi);
    return a;
}

State to_array(const GeodesicState& x) { return {x.theta, x.phi, x.p_theta, x.p_phi}; }
GeodesicState from_array(const State& y) { return {y[0], y[1], y[2], y[3]}; }

// Hamiltonian H = (p_theta^2 / E + p_phi^2 / G) / 2 with G = sin^2 theta.
struct GeodesicFlow {
    const RevolutionMetric& metric;

    void operator()(const State& y, State& dy, double /*s*/) const
    {
        const double st = std::sin(y[0]);
        const double ct = std::cos(y[0]);
        const double one_h = 1.0 + metric.h(ct);
        const double e = one_h * one_h;
        const double de = -2.0 * one_h * metric.dh(ct) * st;
        const double g = st * st;
        const double dg = 2.0 * st * ct;
        dy[0] = y[2] / e;
        dy[1] = y[3] / g;
        dy[2] = 0.5 * y[2] * y[2] * de / (e * e) + 0.5 * y[3] * y[3] * dg / (g * g);
        dy[3] = 0.0;
    }
};

void check_state(const State& y)
{
    for (double v : y)
        if (!std::isfinite(v))
            throw IntegrationError("geodesic integration produced a non-finite state");
    if (!(y[0] > 0.0 && y[0] < kPi))
        throw IntegrationError("geodesic entered a pole neighbourhood");
}

void check_tol(double tol)
{
    if (!(tol >= 1e-12 && tol <= 1e-6))
        throw InputError("integrator tolerance must lie in [1e-12, 1e-6]");
}

auto make_stepper(double tol)
{
    // Internal tolerance is a decade tighter than the requested drift scale.
    return odeint::make_dense_output(0.1 * tol, 0.1 * tol, odeint::runge_kutta_dopri5<State>());
}

} // namespace

RevolutionMetric::RevolutionMetric(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    while (!coeffs_.empty() && coeffs_.back() == 0.0)
        coeffs_.pop_back();
    for (double c : coeffs_)
        if (!std::isfinite(c))
            throw InputError("profile coefficients must be finite");
    if (std::abs(h(1.0)) > 1e-14 || std::abs(h(-1.0)) > 1e-14)
        throw InputError("profile must vanish at u = +-1");
    constexpr int samples = 4000;
    for (int i = 0; i <= samples; ++i) {
        const double u = -1.0 + 2.0 * i / samples;
        if (!(std::abs(h(u)) < 1.0))
            throw InputError("profile must satisfy |h| < 1 on [-1, 1]");
    }
}

RevolutionMetric RevolutionMetric::zoll(std::span<const double> basis_coeffs)
{
    std::vector<double> mono(2 * basis_coeffs.size() + 2, 0.0);
    for (std::size_t k = 0; k < basis_coeffs.size(); ++k) {
        mono[1] += basis_coeffs[k];
        mono[2 * (k + 1) + 1] -= basis_coeffs[k];
    }
    return RevolutionMetric(std::move(mono));
}

RevolutionMetric RevolutionMetric::profile(std::span<const double> monomial_coeffs)
{
    return RevolutionMetric(std::vector<double>(monomial_coeffs.begin(), monomial_coeffs.end()));
}

double RevolutionMetric::h(double u) const
{
    double v = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        v = v * u + *it;
    return v;
}

double RevolutionMetric::dh(double u) const
{
    double v = 0.0;
    for (std::size_t j = coeffs_.size(); j-- > 1;)
        v = v * u + static_cast<double>(j) * coeffs_[j];
    return v;
}

bool RevolutionMetric::is_odd() const
{
    for (std::size_t j = 0; j < coeffs_.size(); j += 2)
        if (coeffs_[j] != 0.0)
            return false;
    return true;
}

double RevolutionMetric::e(double theta) const
{
    const double one_h = 1.0 + h(std::cos(theta));
    return one_h * one_h;
}

double unit_speed_energy(const RevolutionMetric& metric, const GeodesicState& x)
{
    const double st = std::sin(x.theta);
    return x.p_theta * x.p_theta / metric.e(x.theta) + x.p_phi * x.p_phi / (st * st);
}

GeodesicState unit_speed_state(const RevolutionMetric& metric, double theta, double phi, double p_phi, double sign)
{
    const double st = std::sin(theta);
    const double rest = 1.0 - p_phi * p_phi / (st * st);
    if (rest < 0.0)
        throw InputError("Clairaut constant exceeds sin(theta) at the start point");
    return {theta, phi, std::copysign(std::sqrt(metric.e(theta) * rest), sign), p_phi};
}

GeodesicState equator_start(const RevolutionMetric& metric, double p_phi)
{
    return unit_speed_state(metric, kHalfPi, 0.0, p_phi, 1.0);
}

Trajectory integrate_geodesic(const RevolutionMetric& metric, const GeodesicState& start, double length, double tol,
                              std::span<const double> stations, double sample_step)
{
    check_tol(tol);
    if (!(length > 0.0))
        throw InputError("integration length must be positive");
    if (start.p_phi == 0.0)
        throw InputError("meridians (p_phi = 0) are handled by meridian_length");
    if (std::sin(start.theta) < kMinSinTheta)
        throw InputError("start point too close to a pole");

    if (sample_step <= 0.0)
        sample_step = length / 256.0;
    std::vector<double> times;
    for (double s = 0.0; s < length; s += sample_step)
        times.push_back(s);
    times.push_back(length);
    for (double s : stations)
        if (s > 0.0 && s <= length)
            times.push_back(s);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    Trajectory traj;
    traj.s.reserve(times.size());
    traj.states.reserve(times.size());
    State y = to_array(start);
    const GeodesicFlow flow{metric};
    auto observer = [&](const State& x, double s) {
        check_state(x);
        traj.s.push_back(s);
        traj.states.push_back(from_array(x));
    };
    try {
        odeint::integrate_times(make_stepper(tol), flow, y, times.begin(), times.end(), 1e-3, observer);
    } catch (const IntegrationError&) {
        throw;
    } catch (const std::exception& e) {
        throw IntegrationError(std::string("geodesic integration failed: ") + e.what());
    }
    return traj;
}

ClosureResult closure_test(const Trajectory& traj, double period, double tol_close)
{
    if (traj.s.empty())
        throw InputError("empty trajectory");
    const double eps = 1e-12 * std::max(1.0, period);
    const auto it = std::find_if(traj.s.begin(), traj.s.end(), [&](double s) { return std::abs(s - period) <= eps; });
    if (it == traj.s.end())
        throw InputError("trajectory has no sample at the candidate period");
    const GeodesicState& a = traj.states.front();
    const GeodesicState& b = traj.states[static_cast<std::size_t>(it - traj.s.begin())];
    const double dphi = wrap_angle(b.phi - a.phi);
    const double defect = std::sqrt((b.theta - a.theta) * (b.theta - a.theta) + dphi * dphi +
                                    (b.p_theta - a.p_theta) * (b.p_theta - a.p_theta) +
                                    (b.p_phi - a.p_phi) * (b.p_phi - a.p_phi));
    return {defect < tol_close, defect};
}

FirstReturn first_return(const RevolutionMetric& metric, double p_phi, double tol, double max_length)
{
    check_tol(tol);
    if (!(p_phi > 0.0 && p_phi < 1.0))
        throw InputError("first_return needs a Clairaut constant in (0, 1)");
    auto stepper = make_stepper(tol);
    const GeodesicFlow flow{metric};
    const GeodesicState start = equator_start(metric, p_phi);
    stepper.initialize(to_array(start), 0.0, 1e-3);
    while (stepper.current_time() < max_length) {
        const auto [t0, t1] = stepper.do_step(flow);
        const State& prev = stepper.previous_state();
        const State& cur = stepper.current_state();
        check_state(cur);
        if (!(prev[0] < kHalfPi && cur[0] >= kHalfPi))
            continue;
        double lo = t0, hi = t1;
        State mid{};
        for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
            const double t = 0.5 * (lo + hi);
            stepper.calc_state(t, mid);
            (mid[0] < kHalfPi ? lo : hi) = t;
        }
        const double s = 0.5 * (lo + hi);
        stepper.calc_state(s, mid);
        FirstReturn r;
        r.length = s;
        r.state = from_array(mid);
        r.phi_defect = std::abs(wrap_angle(mid[1] - start.phi));
        return r;
    }
    throw IntegrationError("no return to the equator within the length cap");
}

double meridian_length(const RevolutionMetric& metric)
{
    const std::size_t n = std::max<std::size_t>(48, 2 * metric.degree() + 16);
    const auto rule = quadrature::gauss_legendre(n, 0.0, kPi);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += rule.weights[i] * (1.0 + metric.h(std::cos(rule.nodes[i])));
    return 2.0 * s;
}

double surface_area(const RevolutionMetric& metric)
{
    const std::size_t n = metric.degree() / 2 + 2;
    const auto rule = quadrature::gauss_legendre(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += rule.weights[i] * (1.0 + metric.h(rule.nodes[i]));
    return kTwoPi * s;
}

std::vector<double> clairaut_grid(std::size_t count)
{
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = 0.5;
        return grid;
    }
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = 0.05 + 0.9 * static_cast<double>(k) / static_cast<double>(count - 1);
    return grid;
}

ZollCertificate certify_zoll(const RevolutionMetric& metric, double tol, double tol_close, std::size_t count)
{
    ZollCertificate cert;
    const double ml = meridian_length(metric);
    BatteryEntry meridian;
    meridian.p_phi = 0.0;
    meridian.defect = std::abs(ml - kTwoPi);
    meridian.closed = meridian.defect < tol_close;
    meridian.closed_length = ml;
    cert.entries.push_back(meridian);

    const double stations[] = {kTwoPi};
    for (double c : clairaut_grid(count)) {
        const Trajectory traj = integrate_geodesic(metric, equator_start(metric, c), kTwoPi + 0.25, tol, stations);
        const ClosureResult cl = closure_test(traj, kTwoPi, tol_close);
        const FirstReturn fr = first_return(metric, c, tol);
        cert.entries.push_back({c, cl.defect, fr.phi_defect < tol_close ? fr.length : 0.0, cl.closed});
    }
    cert.zoll = true;
    for (const auto& e : cert.entries) {
        cert.max_defect = std::max(cert.max_defect, e.defect);
        cert.zoll = cert.zoll && e.closed;
    }
    return cert;
}

WeakRatioEstimate weak_systolic_ratio_estimate(const RevolutionMetric& metric, double tol, double tol_close)
{
    WeakRatioEstimate est;
    est.certificate = certify_zoll(metric, tol, tol_close);
    est.zoll = est.certificate.zoll;
    est.area = surface_area(metric);
    // The equator is a closed geodesic of length 2 pi for every profile.
    est.shortest_closed = kTwoPi;
    for (const auto& e : est.certificate.entries)
        if (e.closed_length > 0.0)
            est.shortest_closed = std::min(est.shortest_closed, e.closed_length);
    est.ratio = est.shortest_closed * est.shortest_closed / est.area;
    return est;
}

} // namespace systolic::zoll
