#pragma once

#include <functional>
#include <string>

#include "sifrk/grid.hpp"

namespace sifrk {

/// A reaction term f0 with the data needed for stabilized splitting: the MBP
/// bound gamma with f0(gamma) <= 0 <= f0(-gamma), the stabilizer floor
/// kappa_min = max_{|xi|<=gamma} |f0'(xi)|, and the potential F with
/// F' = -f0 for energy evaluation.
struct NonlinearSpec {
    std::function<double(double)> f0;
    std::function<double(double)> f0_prime;
    std::function<double(double)> potential;  // F, normalized per registry entry
    double gamma = 1.0;
    double kappa_min = 0.0;
    std::string name;
    /// Clamp arguments of f0 to [-gamma, gamma] before evaluation.  Enabled
    /// only for specs whose f0 is singular outside the bound (the logarithmic
    /// potential); polynomial specs evaluate unclamped so that bound
    /// violations of non-certified schemes stay visible.
    bool clamp_to_gamma = false;
};

/// f0(u) = (u - u^3) / epsilon_scale, gamma = 1, kappa_min = 2/epsilon_scale,
/// F(u) = (1 - u^2)^2 / (4 epsilon_scale).  Use epsilon_scale = 1 for the
/// plain double-well reaction and epsilon_scale = eps^2 for the scaled form.
NonlinearSpec cubic(double epsilon_scale);

/// f0(u) = (theta/2) ln((1-u)/(1+u)) + theta_c u on (-1,1); gamma is the
/// positive root of f0, found by bisection to 1e-12; kappa_min is
/// |theta_c - theta/(1-gamma^2)| (attained at +-gamma);
/// F(u) = (theta/2)[(1-u)ln(1-u) + (1+u)ln(1+u)] - (theta_c/2) u^2.
NonlinearSpec flory_huggins(double theta, double theta_c);

/// The stabilized reaction N0(xi) = kappa xi + f0(xi) with kappa >= kappa_min.
class StabilizedNonlinearity {
public:
    StabilizedNonlinearity(NonlinearSpec spec, double kappa);

    const NonlinearSpec& spec() const { return spec_; }
    double kappa() const { return kappa_; }
    double gamma() const { return spec_.gamma; }

    double N0(double xi) const;

private:
    NonlinearSpec spec_;
    double kappa_;
};

/// Elementwise N0 over a field.  Throws on non-finite input entries.
Field apply_N(const StabilizedNonlinearity& sn, const Field& u);

/// In-place variant writing into `out` (same grid as `u`).
void apply_N(const StabilizedNonlinearity& sn, const Field& u, Field& out);

}  // namespace sifrk
