#pragma once

#include <cstdint>

#include "conehedge/reflection.hpp"
#include "conehedge/types.hpp"

namespace conehedge {

/// Free Brownian transition density (2 pi t)^(-d/2) exp(-|y-x|^2 / 2t).
double gaussian_kernel(double t, const Vector& x, const Vector& y);

/// Transition density of Brownian motion killed at the chamber boundary,
/// assembled by the method of images: sum over the group of
/// sign(w) * gaussian_kernel(t, x, w(y)).
class KilledKernel {
public:
    explicit KilledKernel(ReflectionGroup group) : group_(std::move(group)) {}

    const ReflectionGroup& group() const { return group_; }
    const FundamentalSystem& fs() const { return group_.fundamental_system(); }

    /// The raw signed image sum, defined for any x, y. Antisymmetric in y
    /// across every reflecting hyperplane.
    double image_sum(double t, const Vector& x, const Vector& y) const;

private:
    ReflectionGroup group_;
};

/// Checked evaluation of the killed density: requires t > 0 and x, y in the
/// closed chamber (throws std::domain_error otherwise). Vanishes on the
/// boundary and is nonnegative inside.
double killed_density(const KilledKernel& kernel, double t, const Vector& x, const Vector& y);

struct QuadratureSpec {
    int points_per_axis = 400;       // composite 4-point Gauss-Legendre
    double box_halfwidth = 8.0;      // in units of sqrt(t)
    std::uint64_t mc_points = 200000;  // importance-sampling fallback, d > 3
    std::uint64_t seed = kDefaultSeed;
    int n_threads = 0;
};

struct SurvivalEstimate {
    double value = 0.0;
    double std_error = 0.0;   // zero for grid quadrature
    bool monte_carlo = false;
};

/// P_x(no chamber exit before t) = integral of the killed density over the
/// chamber. Tensor-grid quadrature over the box x +- 8 sqrt(t) intersected
/// with the chamber for d <= 3; for d > 3 falls back to importance-sampled
/// Monte Carlo integration and reports its standard error.
SurvivalEstimate survival_probability(const KilledKernel& kernel, double t, const Vector& x,
                                      const QuadratureSpec& quad = {});

struct McWalkConfig {
    std::uint64_t n_paths = 100000;
    int n_steps = 512;
    std::uint64_t seed = kDefaultSeed;
    bool bridge = true;
    int n_threads = 0;
    std::uint64_t block_size = 8192;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Path-simulation estimate of the survival probability: Euler walk with
/// per-wall Brownian-bridge crossing corrections, killed when any
/// <position, alpha_i> <= 0. Deterministic given (seed, n_paths, n_steps).
McEstimate mc_survival(const FundamentalSystem& fs, double t, const Vector& x,
                       const McWalkConfig& cfg);

}  // namespace conehedge
