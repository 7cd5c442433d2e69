#include "conehedge/density.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "conehedge/parallel.hpp"
#include "conehedge/rng.hpp"

namespace conehedge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 4-point Gauss-Legendre rule on [-1, 1].
constexpr double kGl4Nodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
constexpr double kGl4Weights[4] = {0.3478548451374538, 0.6521451548625461,
                                   0.6521451548625461, 0.3478548451374538};

// Seed tags keep the quadrature fallback and the walk estimator on disjoint
// random streams even when the caller reuses one seed.
constexpr std::uint64_t kTagSurvivalMc = 0x53555256ull;
constexpr std::uint64_t kTagWalk = 0x57414c4bull;

}  // namespace

double gaussian_kernel(double t, const Vector& x, const Vector& y) {
    if (t <= 0.0) throw std::domain_error("gaussian_kernel: t must be positive");
    const double d = static_cast<double>(x.size());
    return std::pow(2.0 * kPi * t, -0.5 * d) * std::exp(-(y - x).squaredNorm() / (2.0 * t));
}

double KilledKernel::image_sum(double t, const Vector& x, const Vector& y) const {
    if (t <= 0.0) throw std::domain_error("killed density: t must be positive");
    const double norm = std::pow(2.0 * kPi * t, -0.5 * static_cast<double>(x.size()));
    double acc = 0.0;
    for (const GroupElement& w : group_.elements()) {
        const double q = (w.matrix * y - x).squaredNorm();
        acc += w.sign * std::exp(-q / (2.0 * t));
    }
    return norm * acc;
}

double killed_density(const KilledKernel& kernel, double t, const Vector& x, const Vector& y) {
    for (const Vector& alpha : kernel.fs().roots()) {
        if (x.dot(alpha) < 0.0 || y.dot(alpha) < 0.0)
            throw std::domain_error("killed_density: point outside the closed chamber");
    }
    return kernel.image_sum(t, x, y);
}

namespace {

// Composite Gauss-Legendre integral of f over [lo, hi] with n_cells cells.
template <class F>
double integrate_interval(double lo, double hi, int n_cells, F f) {
    if (hi <= lo) return 0.0;
    const double h = (hi - lo) / n_cells;
    double acc = 0.0;
    for (int c = 0; c < n_cells; ++c) {
        const double mid = lo + (c + 0.5) * h;
        for (int k = 0; k < 4; ++k)
            acc += kGl4Weights[k] * f(mid + 0.5 * h * kGl4Nodes[k]);
    }
    return acc * 0.5 * h;
}

// The last coordinate is integrated over the exact interval cut out of the
// box by the chamber inequalities; this removes the integrand kink that a
// plain indicator would introduce along that axis.
struct ChamberBoxQuadrature {
    const KilledKernel& kernel;
    double t;
    const Vector& x;
    double halfwidth;
    int n_cells;

    double run() const {
        Vector point = x;
        return outer_axis(0, 1.0, point);
    }

    double outer_axis(int axis, double weight, Vector& point) const {
        const int d = static_cast<int>(x.size());
        if (axis == d - 1) return inner_axis(weight, point);
        const double lo = x(axis) - halfwidth;
        const double h = 2.0 * halfwidth / n_cells;
        double acc = 0.0;
        for (int c = 0; c < n_cells; ++c) {
            const double mid = lo + (c + 0.5) * h;
            for (int k = 0; k < 4; ++k) {
                point(axis) = mid + 0.5 * h * kGl4Nodes[k];
                acc += outer_axis(axis + 1, weight * kGl4Weights[k] * 0.5 * h, point);
            }
        }
        return acc;
    }

    double inner_axis(double weight, Vector& point) const {
        const int d = static_cast<int>(x.size());
        double lo = x(d - 1) - halfwidth;
        double hi = x(d - 1) + halfwidth;
        for (const Vector& alpha : kernel.fs().roots()) {
            double partial = 0.0;
            for (int j = 0; j + 1 < d; ++j) partial += alpha(j) * point(j);
            const double c = alpha(d - 1);
            if (c > 0.0)
                lo = std::max(lo, -partial / c);
            else if (c < 0.0)
                hi = std::min(hi, -partial / c);
            else if (partial <= 0.0)
                return 0.0;
        }
        if (hi <= lo) return 0.0;
        Vector y = point;
        const double value = integrate_interval(lo, hi, n_cells, [&](double yd) {
            y(d - 1) = yd;
            return kernel.image_sum(t, x, y);
        });
        return weight * value;
    }
};

SurvivalEstimate survival_mc_fallback(const KilledKernel& kernel, double t, const Vector& x,
                                      const QuadratureSpec& quad) {
    const int d = static_cast<int>(x.size());
    const double sqrt_t = std::sqrt(t);
    const std::uint64_t seed = CounterRng::mix(quad.seed + kTagSurvivalMc);
    auto est = parallel_mean(
        quad.mc_points, kDefaultBlockSize, quad.n_threads, [&](std::uint64_t i) {
            CounterRng rng(seed, CounterRng::kStreamsPerPath * i);
            Vector y(d);
            for (int j = 0; j < d; ++j) y(j) = x(j) + sqrt_t * rng.normal();
            if (!chamber_contains(kernel.fs(), y)) return 0.0;
            return kernel.image_sum(t, x, y) / gaussian_kernel(t, x, y);
        });
    return SurvivalEstimate{est.mean, est.std_error, true};
}

}  // namespace

SurvivalEstimate survival_probability(const KilledKernel& kernel, double t, const Vector& x,
                                      const QuadratureSpec& quad) {
    if (t <= 0.0) throw std::domain_error("survival_probability: t must be positive");
    if (!chamber_contains(kernel.fs(), x))
        throw std::domain_error("survival_probability: x must lie inside the chamber");
    const int d = static_cast<int>(x.size());
    if (d > 3) return survival_mc_fallback(kernel, t, x, quad);

    const int n_cells = std::max(1, quad.points_per_axis / 4);
    ChamberBoxQuadrature q{kernel, t, x, quad.box_halfwidth * std::sqrt(t), n_cells};
    return SurvivalEstimate{q.run(), 0.0, false};
}

McEstimate mc_survival(const FundamentalSystem& fs, double t, const Vector& x,
                       const McWalkConfig& cfg) {
    if (cfg.n_paths < 1 || cfg.n_steps < 1)
        throw std::invalid_argument("mc_survival: n_paths and n_steps must be >= 1");
    const int d = fs.dim();
    const int m = fs.size();
    const double dt = t / cfg.n_steps;
    const double sqrt_dt = std::sqrt(dt);

    std::vector<double> inv_norms(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) inv_norms[static_cast<std::size_t>(k)] = 1.0 / fs.root(k).norm();

    const std::uint64_t seed = CounterRng::mix(cfg.seed + kTagWalk);
    auto est = parallel_mean(cfg.n_paths, cfg.block_size, cfg.n_threads, [&](std::uint64_t i) {
        CounterRng normals(seed, CounterRng::kStreamsPerPath * i + CounterRng::kStreamNormals);
        CounterRng kills(seed, CounterRng::kStreamsPerPath * i + CounterRng::kStreamKill);
        Vector pos = x;
        Vector dist(m), prev_dist(m);
        for (int k = 0; k < m; ++k) {
            dist(k) = pos.dot(fs.root(k)) * inv_norms[static_cast<std::size_t>(k)];
            if (dist(k) <= 0.0) return 0.0;
        }
        for (int s = 0; s < cfg.n_steps; ++s) {
            prev_dist = dist;
            for (int j = 0; j < d; ++j) pos(j) += sqrt_dt * normals.normal();
            for (int k = 0; k < m; ++k) {
                dist(k) = pos.dot(fs.root(k)) * inv_norms[static_cast<std::size_t>(k)];
                if (dist(k) <= 0.0) return 0.0;
            }
            if (cfg.bridge) {
                for (int k = 0; k < m; ++k) {
                    // Below exp(-37) the crossing probability is smaller than
                    // the least uniform the stream can produce.
                    const double arg = -2.0 * prev_dist(k) * dist(k) / dt;
                    if (arg > -37.0 && kills.uniform() <= std::exp(arg)) return 0.0;
                }
            }
        }
        return 1.0;
    });
    return McEstimate{est.mean, est.std_error};
}

}  // namespace conehedge
