#include "sifrk/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sifrk {

NonlinearSpec cubic(double epsilon_scale) {
    if (!(epsilon_scale > 0.0))
        throw std::invalid_argument("cubic: epsilon_scale must be positive");
    NonlinearSpec spec;
    const double inv = 1.0 / epsilon_scale;
    spec.f0 = [inv](double u) { return (u - u * u * u) * inv; };
    spec.f0_prime = [inv](double u) { return (1.0 - 3.0 * u * u) * inv; };
    spec.potential = [inv](double u) {
        const double q = 1.0 - u * u;
        return 0.25 * q * q * inv;
    };
    spec.gamma = 1.0;
    spec.kappa_min = 2.0 * inv;  // max of |1 - 3 xi^2| on [-1,1]
    spec.name = epsilon_scale == 1.0 ? "cubic" : "cubic_scaled";
    spec.clamp_to_gamma = false;
    return spec;
}

NonlinearSpec flory_huggins(double theta, double theta_c) {
    if (!(theta > 0.0) || !(theta_c > theta))
        throw std::invalid_argument("flory_huggins: need 0 < theta < theta_c");

    auto f0 = [theta, theta_c](double u) {
        return 0.5 * theta * std::log((1.0 - u) / (1.0 + u)) + theta_c * u;
    };

    // Positive root of f0: f0(0+) > 0 under theta < theta_c and f0 -> -inf
    // as u -> 1-, so scan for the sign change, then bisect.
    const double hi_lim = 1.0 - 1e-12;
    double lo = 0.0, hi = 0.0;
    const int scan = 4096;
    for (int k = 1; k <= scan; ++k) {
        const double u = hi_lim * k / scan;
        if (f0(u) < 0.0) {
            hi = u;
            lo = hi_lim * (k - 1) / scan;
            break;
        }
    }
    if (hi == 0.0)
        throw std::invalid_argument("flory_huggins: f0 has no sign change on (0,1)");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (f0(mid) < 0.0) hi = mid;
        else lo = mid;
    }
    const double gamma = 0.5 * (lo + hi);

    NonlinearSpec spec;
    spec.f0 = f0;
    spec.f0_prime = [theta, theta_c](double u) {
        return theta_c - theta / (1.0 - u * u);
    };
    spec.potential = [theta, theta_c](double u) {
        return 0.5 * theta * ((1.0 - u) * std::log(1.0 - u) + (1.0 + u) * std::log(1.0 + u)) -
               0.5 * theta_c * u * u;
    };
    spec.gamma = gamma;
    // |f0'| on [-gamma,gamma] peaks at the endpoints when theta/(1-gamma^2)
    // exceeds theta_c, which holds whenever the root exists.
    spec.kappa_min = std::abs(theta_c - theta / (1.0 - gamma * gamma));
    spec.name = "flory_huggins";
    spec.clamp_to_gamma = true;
    return spec;
}

StabilizedNonlinearity::StabilizedNonlinearity(NonlinearSpec spec, double kappa)
    : spec_(std::move(spec)), kappa_(kappa) {
    if (kappa_ < spec_.kappa_min - 1e-12)
        throw std::invalid_argument("StabilizedNonlinearity: kappa below kappa_min of '" +
                                    spec_.name + "'");
}

double StabilizedNonlinearity::N0(double xi) const {
    double arg = xi;
    if (spec_.clamp_to_gamma) arg = std::clamp(arg, -spec_.gamma, spec_.gamma);
    return kappa_ * xi + spec_.f0(arg);
}

void apply_N(const StabilizedNonlinearity& sn, const Field& u, Field& out) {
    require_same_grid(u, out, "apply_N");
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(u.data[i]))
            throw std::runtime_error("apply_N: non-finite input entry");
        out.data[i] = sn.N0(u.data[i]);
    }
}

Field apply_N(const StabilizedNonlinearity& sn, const Field& u) {
    Field out(u.grid);
    apply_N(sn, u, out);
    return out;
}

}  // namespace sifrk
