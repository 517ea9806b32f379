#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sifrk/diagnostics.hpp"
#include "sifrk/grid.hpp"
#include "sifrk/stepper.hpp"
#include "sifrk/tableau.hpp"

namespace sifrk {

/// Default seed for the seeded random experiments.  The qualitative verdicts
/// (bound violation / preservation, energy env: nonincrease) are
/// seed-independent; exact curves are not.
inline constexpr std::uint64_t kBenchmarkSeed = 0x5EED5EED2026ull;

/// Allen-Cahn traveling-wave profile u(t,x) = (1 - tanh((x - s t)/(2 sqrt2
/// eps)))/2 with wave speed s = 3/(sqrt2 eps); independent of y and z.
double traveling_wave_exact(double eps, double t, double x);
double traveling_wave_speed(double eps);

Field traveling_wave_field(const Grid& grid, double eps, double t);

/// Indicator bubble: +1 inside x^2+y^2 <= radius^2, -1 outside.
Field bubble_initial(const Grid& grid, double radius = 0.25);

/// Uniform values in [low, high) from SplitMix64(seed), in row-major order.
Field random_initial(const Grid& grid, double low, double high,
                     std::uint64_t seed);

/// Traveling-wave benchmark problem (the nonlinearity is the scaled cubic
/// (u-u^3)/eps^2 with unit diffusivity; kappa = 2/eps^2).
struct TravelingWaveProblem {
    double eps = 0.015;
    int dim = 2;
    BoundaryCondition bc = BoundaryCondition::Periodic;
    double T = 0.0;  // end time; 0 means sqrt(2)*eps/4
    double end_time() const;
    double kappa() const { return 2.0 / (eps * eps); }
};

/// Integrates to T for each tau and measures L2/Linf errors against the
/// exact profile at t = T; rows are ordered by decreasing tau.
RateTable run_temporal_convergence(const AnyTableau& scheme,
                                   const TravelingWaveProblem& problem,
                                   const std::vector<double>& taus, double h);

/// Spatial self-convergence at fixed tau: each ladder solution is compared
/// with the next-finer one (the finest against an extra run at half its h),
/// resampled through the transform basis.  The measuring time must precede
/// the front's arrival at the boundary so the solution still carries spatial
/// structure; rows are ordered by decreasing h.
RateTable run_spatial_convergence(const AnyTableau& scheme,
                                  const TravelingWaveProblem& problem,
                                  const std::vector<double>& hs, double tau);

/// Evaluate a field at the points of another grid (same box, same bc)
/// through its transform representation: trigonometric interpolation for
/// periodic grids, cosine-series evaluation for Neumann grids.
Field resample(const Field& fine, const Grid& target);

struct RateWindow {
    double lo = 0.0, hi = 0.0;
    bool contains(double r) const { return r >= lo && r <= hi; }
};

/// Accepted finest-pair rate window per temporal order.
RateWindow temporal_rate_window(int order);

/// Accepted window for the two finest spatial pairs.
inline constexpr RateWindow kSpatialRateWindow{1.8, 2.05};

struct DeskTemporalOutcome {
    std::string scheme;   // registry key
    int order = 0;
    RateTable table;      // rows ordered coarse -> fine tau
    double finest_l2_rate = 0.0;
    double finest_l2 = 0.0;
};

/// The temporal study for all certified built-in schemes on an n^dim grid
/// (eps = 0.015, kappa = 2/eps^2, T = sqrt(2) eps/4, errors vs the exact
/// profile).  Ladders end at a common smallest tau = T/1024 for the
/// second-order family so their error constants are comparable.
std::vector<DeskTemporalOutcome> run_desk_temporal(int n = 512, int dim = 2);

/// The spatial study: sIFRK(2,2), tau = (sqrt(2) eps/4)/2048, ladder
/// h = 1/32 .. 1/256, homogeneous Neumann, measured at a quarter of the
/// traveling-wave horizon (the wave must not yet have reached the wall, and
/// the periodic variant of this problem carries a data discontinuity across
/// the seam that caps self-convergence at first order).
RateTable run_desk_spatial(int dim = 2);

struct ViolationDemo {
    double ssp_violation_time = -1.0;  // first time sup norm > 1 + 1e-12
    bool ssp_flagged = false;
    bool certified_flagged = false;
    std::vector<StepRecord> ssp_curve;
    std::vector<StepRecord> certified_curve;
};

/// SSP-sIFRK(2,2) vs sIFRK(2,2) on the plain cubic (diffusivity eps^2,
/// eps = 0.01, kappa = 2), periodic 1/h = 256, tau = 0.1, identical random
/// initial data in [-0.9, 0.9].  The SSP run stops at its first violation
/// (or ssp_cap); the certified run continues to certified_T.
ViolationDemo run_mbp_violation_demo(double certified_T = 50.0,
                                     double ssp_cap = 20.0,
                                     std::uint64_t seed = kBenchmarkSeed);

/// Radius of the +1 region on the row of cells nearest y = 0, measured by
/// linear interpolation of the sign change on each side of x = 0; zero once
/// the slice has no positive values.
double bubble_slice_radius(const Field& u);

struct BubbleRun {
    std::vector<std::pair<double, double>> radius_at;  // (t, slice radius)
    std::optional<double> vanish_time;  // first time max(u) < 0 everywhere
    std::vector<StepRecord> curve;
};

/// Shrinking-bubble run: plain cubic (eps = 0.01, kappa = 2), homogeneous
/// Neumann, sIFRK(2,2).
BubbleRun run_bubble(int n, double tau, double T_end,
                     const std::vector<double>& radius_times);

}  // namespace sifrk
