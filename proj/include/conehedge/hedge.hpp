#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conehedge/market.hpp"
#include "conehedge/payoff.hpp"
#include "conehedge/reflection.hpp"
#include "conehedge/types.hpp"

namespace conehedge {

/// One image term of the replication portfolio: on a terminal state S it
/// contributes sign * f(H S^{C_w} / H^{T_w}) * S^{x_w^T C} / H^{x_w}
/// * 1{ S^{C_w} > H^{T_w} }. Stored in log coordinates so that a serialized
/// portfolio reproduces the same bits on reload.
struct HedgeTerm {
    GroupElement w;           // rep_matrix holds T_w
    double sign = 1.0;
    Matrix c_w;               // T_w C
    Vector x_w;
    Vector log_region;        // T_w log H: indicator is C_w log S > log_region
    RowVector weight_row;     // x_w^T C
    double log_weight_scale = 0.0;  // x_w^T log H
};

class HedgePortfolio {
public:
    HedgePortfolio(std::vector<HedgeTerm> terms, Vector levels, Payoff payoff,
                   std::string system_name, double maturity);

    const std::vector<HedgeTerm>& terms() const { return terms_; }
    const Vector& levels() const { return levels_; }
    const Vector& log_levels() const { return log_levels_; }
    const Payoff& payoff() const { return payoff_; }
    const std::string& system_name() const { return system_name_; }
    double maturity() const { return maturity_; }
    int m() const { return static_cast<int>(levels_.size()); }

    double evaluate_term(std::size_t idx, const Vector& log_s) const;
    double evaluate(const Vector& log_s) const;

    /// Negates the sign of one term; used as a negative control in identity
    /// verification.
    HedgePortfolio with_flipped_sign(std::size_t idx) const;

private:
    std::vector<HedgeTerm> terms_;
    Vector levels_;
    Vector log_levels_;
    Payoff payoff_;
    std::string system_name_;
    double maturity_;
};

/// One term per group element, the identity term reproducing the truncated
/// payoff f(S^C) 1{S^C > H} with unit weight.
HedgePortfolio build_portfolio(const ConeBarrier& barrier, const ReflectionGroup& group,
                               const Payoff& payoff, double maturity,
                               std::string system_name = "custom");

struct PriceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
};

/// E[f(S_T^C) 1{no barrier exit before T}] by grid path simulation
/// (undiscounted, as is the whole pricing surface).
PriceEstimate price_knockout_mc(const MarketModel& model, const ConeBarrier& barrier,
                                const Payoff& payoff, double maturity, const McConfig& mc);

/// E[portfolio payoff at T] by exact terminal sampling.
PriceEstimate price_portfolio_mc(const MarketModel& model, const HedgePortfolio& portfolio,
                                 double maturity, const McConfig& mc);

/// E[f(S_T^C)] with no barrier, by exact terminal sampling.
PriceEstimate price_vanilla_mc(const MarketModel& model, const Matrix& exponent_matrix,
                               const Payoff& payoff, double maturity, const McConfig& mc);

struct VerifyReport {
    double knockout = 0.0;
    double knockout_se = 0.0;
    double portfolio = 0.0;
    double portfolio_se = 0.0;
    double combined_se = 0.0;
    double z = 0.0;
    double vanilla = 0.0;
    double allowance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    double allowance_frac = 0.002;  // of the vanilla price
    // In convergence mode the allowance is halved each time n_steps doubles
    // relative to the 512-step baseline.
    bool scale_allowance_with_steps = false;
    int reference_steps = 512;
};

/// Prices both sides of the hedge identity and reports agreement:
/// pass iff |lhs - rhs| <= 3 * combined stderr + allowance. A failing
/// identity is a report, not an exception.
VerifyReport verify_hedge_identity(const MarketModel& model, const ConeBarrier& barrier,
                                   const Payoff& payoff, double maturity, const McConfig& mc,
                                   const VerifyOptions& opts = {});

/// Same, with a caller-supplied portfolio (e.g. a deliberately corrupted
/// one).
VerifyReport verify_hedge_identity(const MarketModel& model, const ConeBarrier& barrier,
                                   const HedgePortfolio& portfolio, double maturity,
                                   const McConfig& mc, const VerifyOptions& opts = {});

struct SymmetryReport {
    double exponent = 0.0;           // generated x_{s_1}
    double expected_exponent = 0.0;  // 1 - 2r/sigma^2
    bool exponent_ok = false;
    VerifyReport verify;
    bool pass = false;
};

/// The one-dimensional specialization: a single down-and-out barrier at H,
/// hedged by the two-term image portfolio with power weight
/// (S/H)^(1 - 2r/sigma^2).
SymmetryReport put_call_symmetry_case(double sigma, double rate, double spot, double level,
                                      double strike, double maturity, const McConfig& mc);

/// Single risky asset with volatility sigma; spot vector (1, spot).
MarketModel single_asset_model(double sigma, double rate, double spot);

/// Spot vectors S* with (S*^C)_face = H_face and the other components
/// strictly above their levels; used for boundary-vanishing checks.
std::vector<Vector> sample_boundary_states(const MarketModel& model, const ConeBarrier& barrier,
                                           int face, std::size_t count, std::uint64_t seed);

}  // namespace conehedge
