#pragma once

#include <cstdint>
#include <vector>

#include "conehedge/reflection.hpp"
#include "conehedge/types.hpp"

namespace conehedge {

/// Multi-asset Black-Scholes economy: n risky assets plus a deterministic
/// 0-th asset, driven by a d-dimensional Brownian motion through the
/// (n+1) x d volatility matrix Lambda (row 0 zero, rank d).
class MarketModel {
public:
    MarketModel(Matrix lambda, double rate, Vector spot);

    const Matrix& lambda() const { return lambda_; }
    double rate() const { return rate_; }
    const Vector& spot() const { return spot_; }
    int n_assets() const { return static_cast<int>(lambda_.rows()) - 1; }
    int brownian_dim() const { return static_cast<int>(lambda_.cols()); }
    const Vector& variance_diag() const { return variance_diag_; }  // diag(Lambda Lambda^T)
    const Vector& log_spot() const { return log_spot_; }

private:
    Matrix lambda_;
    double rate_;
    Vector spot_;
    Vector variance_diag_;
    Vector log_spot_;
};

// Componentwise power notation: (v^M)_i = prod_j v_j^(M_ij), for v > 0.
Vector vec_pow(const Vector& v, const Matrix& exponents);
double vec_pow(const Vector& v, const RowVector& exponents);

/// The m x (n+1) exponent matrix C with C Lambda = Sigma', where row i of
/// Sigma' is nu_i alpha_i. Minimal-norm rows via the pseudo-inverse of
/// Lambda; always zero on the riskless asset.
Matrix solve_exponent_matrix(const MarketModel& model, const FundamentalSystem& fs,
                             const Vector& nu);

/// Minimal-norm mu with (C Lambda) mu = C (r 1 - diag(Lambda Lambda^T)/2).
Vector solve_drift(const MarketModel& model, const Matrix& c);

/// Minimal-norm h with (C Lambda) h = C log S0 - log H.
Vector solve_offset(const MarketModel& model, const Matrix& c, const Vector& levels);

/// Knock-out region in asset space: survival means S^C > H componentwise,
/// equivalently the Brownian coordinate X_t = h + B_t + mu t stays in the
/// cone { Sigma' x > 0 }.
class ConeBarrier {
public:
    ConeBarrier(const MarketModel& model, FundamentalSystem fs, Vector nu, Vector levels);

    const FundamentalSystem& fs() const { return fs_; }
    const Matrix& exponent_matrix() const { return c_; }
    const Vector& levels() const { return levels_; }
    const Vector& log_levels() const { return log_levels_; }
    const Vector& nu() const { return nu_; }
    const Matrix& sigma_prime() const { return sigma_prime_; }
    const Vector& drift() const { return drift_; }    // mu
    const Vector& offset() const { return offset_; }  // h
    int m() const { return static_cast<int>(c_.rows()); }
    const Vector& wall_inv_norms() const { return wall_inv_norms_; }

private:
    FundamentalSystem fs_;
    Matrix c_;
    Vector levels_;
    Vector log_levels_;
    Vector nu_;
    Matrix sigma_prime_;
    Vector drift_;
    Vector offset_;
    Vector wall_inv_norms_;  // 1 / |row_k Sigma'|
};

/// T_w with C Lambda w = T_w C Lambda; fails if the root span is not
/// invariant under w.
Matrix representation_matrix(const ConeBarrier& barrier, const GroupElement& w);

/// x_w with Sigma'^T x_w = w(mu) - mu; the exponent of the power weight
/// S^(x_w^T C) / H^(x_w) attached to the w-image term.
Vector solve_weight_exponent(const ConeBarrier& barrier, const GroupElement& w);

struct McConfig {
    std::uint64_t n_paths = 100000;
    int n_steps = 0;  // 0 -> 512 steps per unit maturity
    std::uint64_t seed = kDefaultSeed;
    bool bridge = true;
    bool antithetic = false;
    int n_threads = 0;
    std::uint64_t block_size = 8192;
};

int resolve_steps(const McConfig& mc, double maturity);

/// Draws exact terminal states: log S_T = log S0 + Lambda Z sqrt(T)
/// + (r - diag(Lambda Lambda^T)/2) T with Z standard normal.
class TerminalSampler {
public:
    TerminalSampler(const MarketModel& model, double maturity, std::uint64_t seed);

    /// Fills log_s for the given path index; the antithetic leg flips Z.
    void sample(std::uint64_t path, Vector& log_s, bool antithetic_leg = false) const;

    int brownian_dim() const { return static_cast<int>(scaled_lambda_.cols()); }

private:
    Matrix scaled_lambda_;  // Lambda sqrt(T)
    Vector log_drift_;      // log S0 + (r - diag/2) T
    std::uint64_t seed_;
};

/// Simulates X_t = h + B_t + mu t on a uniform grid and monitors the cone
/// walls, with optional per-wall Brownian-bridge crossing corrections.
/// Terminal prices are reconstructed from the accumulated B_T.
class PathSampler {
public:
    PathSampler(const MarketModel& model, const ConeBarrier& barrier, double maturity,
                int n_steps, bool bridge, std::uint64_t seed);

    /// Runs path `path`; returns survival and fills log_s with the terminal
    /// log prices. If early_exit is set the terminal state of killed paths
    /// is not computed.
    bool sample(std::uint64_t path, Vector& log_s, bool antithetic_leg = false,
                bool early_exit = true) const;

    int n_steps() const { return n_steps_; }

private:
    const MarketModel& model_;
    int n_steps_;
    bool bridge_;
    std::uint64_t seed_;
    double dt_;
    double sqrt_dt_;
    Matrix walls_;          // rows: Sigma' scaled to unit normals
    Vector start_dist_;     // wall distances at X_0 = h
    Vector drift_step_;     // walls * mu dt
    Vector terminal_drift_; // log S0 + (r - diag/2) T
};

/// Terminal asset prices, one row per path (exact sampling, no paths).
Matrix simulate_terminal(const MarketModel& model, double maturity, std::uint64_t n_paths,
                         std::uint64_t seed);

struct PathExitResult {
    Vector terminal;  // asset prices at T
    bool survived;
};

/// Per-path terminal states plus survival flags from the grid simulation.
std::vector<PathExitResult> simulate_path_with_exit(const MarketModel& model,
                                                    const ConeBarrier& barrier, double maturity,
                                                    int n_steps, std::uint64_t n_paths,
                                                    std::uint64_t seed, bool bridge = true);

}  // namespace conehedge
