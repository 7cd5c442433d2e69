#include "conehedge/hedge.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "conehedge/parallel.hpp"
#include "conehedge/rng.hpp"

namespace conehedge {

namespace {

constexpr std::uint64_t kTagBoundary = 0x424e4452ull;

}  // namespace

HedgePortfolio::HedgePortfolio(std::vector<HedgeTerm> terms, Vector levels, Payoff payoff,
                               std::string system_name, double maturity)
    : terms_(std::move(terms)),
      levels_(std::move(levels)),
      payoff_(std::move(payoff)),
      system_name_(std::move(system_name)),
      maturity_(maturity) {
    if (terms_.empty()) throw std::invalid_argument("HedgePortfolio: no terms");
    log_levels_ = levels_.array().log();
}

double HedgePortfolio::evaluate_term(std::size_t idx, const Vector& log_s) const {
    const HedgeTerm& term = terms_[idx];
    Vector z = term.c_w * log_s - term.log_region;
    if (!(z.array() > 0.0).all()) return 0.0;
    const Vector argument = (log_levels_ + z).array().exp();
    const double weight = std::exp(term.weight_row.dot(log_s) - term.log_weight_scale);
    return term.sign * payoff_(argument) * weight;
}

double HedgePortfolio::evaluate(const Vector& log_s) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i) acc += evaluate_term(i, log_s);
    return acc;
}

HedgePortfolio HedgePortfolio::with_flipped_sign(std::size_t idx) const {
    HedgePortfolio copy = *this;
    copy.terms_.at(idx).sign = -copy.terms_.at(idx).sign;
    return copy;
}

HedgePortfolio build_portfolio(const ConeBarrier& barrier, const ReflectionGroup& group,
                               const Payoff& payoff, double maturity, std::string system_name) {
    if (!payoff.linear_growth())
        throw std::invalid_argument(
            "build_portfolio: payoff growth flag not asserted (hedge requires at most linear growth)");
    if (payoff.kind() == Payoff::Kind::Table) {
        if (payoff.table_dims() != barrier.m())
            throw std::invalid_argument("build_portfolio: tabulated payoff dimension != m");
    } else if (payoff.index() >= barrier.m()) {
        throw std::invalid_argument("build_portfolio: payoff component index exceeds m");
    }

    std::vector<HedgeTerm> terms;
    terms.reserve(group.order());
    const Vector log_levels = barrier.log_levels();
    for (const GroupElement& w : group.elements()) {
        HedgeTerm term;
        term.w = w;
        term.w.rep_matrix = representation_matrix(barrier, w);
        term.sign = static_cast<double>(w.sign);
        term.c_w = *term.w.rep_matrix * barrier.exponent_matrix();
        term.x_w = solve_weight_exponent(barrier, w);
        term.log_region = *term.w.rep_matrix * log_levels;
        term.weight_row = term.x_w.transpose() * barrier.exponent_matrix();
        term.log_weight_scale = term.x_w.dot(log_levels);
        terms.push_back(std::move(term));
    }
    return HedgePortfolio(std::move(terms), barrier.levels(), payoff, std::move(system_name),
                          maturity);
}

PriceEstimate price_knockout_mc(const MarketModel& model, const ConeBarrier& barrier,
                                const Payoff& payoff, double maturity, const McConfig& mc) {
    const int steps = resolve_steps(mc, maturity);
    PathSampler sampler(model, barrier, maturity, steps, mc.bridge, mc.seed);
    const Matrix& c = barrier.exponent_matrix();
    auto one_leg = [&](std::uint64_t i, bool leg) {
        thread_local Vector log_s;
        if (!sampler.sample(i, log_s, leg)) return 0.0;
        const Vector sc = (c * log_s).array().exp();
        return payoff(sc);
    };
    MeanEstimate est = parallel_mean(mc.n_paths, mc.block_size, mc.n_threads,
                                     [&](std::uint64_t i) {
                                         double v = one_leg(i, false);
                                         if (mc.antithetic) v = 0.5 * (v + one_leg(i, true));
                                         return v;
                                     });
    return PriceEstimate{est.mean, est.std_error, est.n};
}

PriceEstimate price_portfolio_mc(const MarketModel& model, const HedgePortfolio& portfolio,
                                 double maturity, const McConfig& mc) {
    TerminalSampler sampler(model, maturity, mc.seed);
    auto one_leg = [&](std::uint64_t i, bool leg) {
        thread_local Vector log_s;
        sampler.sample(i, log_s, leg);
        return portfolio.evaluate(log_s);
    };
    MeanEstimate est = parallel_mean(mc.n_paths, mc.block_size, mc.n_threads,
                                     [&](std::uint64_t i) {
                                         double v = one_leg(i, false);
                                         if (mc.antithetic) v = 0.5 * (v + one_leg(i, true));
                                         return v;
                                     });
    return PriceEstimate{est.mean, est.std_error, est.n};
}

PriceEstimate price_vanilla_mc(const MarketModel& model, const Matrix& exponent_matrix,
                               const Payoff& payoff, double maturity, const McConfig& mc) {
    TerminalSampler sampler(model, maturity, mc.seed);
    auto one_leg = [&](std::uint64_t i, bool leg) {
        thread_local Vector log_s;
        sampler.sample(i, log_s, leg);
        const Vector sc = (exponent_matrix * log_s).array().exp();
        return payoff(sc);
    };
    MeanEstimate est = parallel_mean(mc.n_paths, mc.block_size, mc.n_threads,
                                     [&](std::uint64_t i) {
                                         double v = one_leg(i, false);
                                         if (mc.antithetic) v = 0.5 * (v + one_leg(i, true));
                                         return v;
                                     });
    return PriceEstimate{est.mean, est.std_error, est.n};
}

VerifyReport verify_hedge_identity(const MarketModel& model, const ConeBarrier& barrier,
                                   const HedgePortfolio& portfolio, double maturity,
                                   const McConfig& mc, const VerifyOptions& opts) {
    VerifyReport report;
    const PriceEstimate lhs = price_knockout_mc(model, barrier, portfolio.payoff(), maturity, mc);
    const PriceEstimate rhs = price_portfolio_mc(model, portfolio, maturity, mc);
    const PriceEstimate vanilla =
        price_vanilla_mc(model, barrier.exponent_matrix(), portfolio.payoff(), maturity, mc);

    report.knockout = lhs.value;
    report.knockout_se = lhs.std_error;
    report.portfolio = rhs.value;
    report.portfolio_se = rhs.std_error;
    report.combined_se = std::hypot(lhs.std_error, rhs.std_error);
    report.vanilla = vanilla.value;
    report.allowance = opts.allowance_frac * std::abs(vanilla.value);
    if (opts.scale_allowance_with_steps) {
        const double steps = static_cast<double>(resolve_steps(mc, maturity));
        report.allowance *= static_cast<double>(opts.reference_steps) / steps;
    }
    const double gap = report.knockout - report.portfolio;
    report.z = report.combined_se > 0.0 ? gap / report.combined_se : 0.0;
    report.pass = std::abs(gap) <= 3.0 * report.combined_se + report.allowance;
    return report;
}

VerifyReport verify_hedge_identity(const MarketModel& model, const ConeBarrier& barrier,
                                   const Payoff& payoff, double maturity, const McConfig& mc,
                                   const VerifyOptions& opts) {
    const ReflectionGroup group = generate_group(barrier.fs());
    const HedgePortfolio portfolio = build_portfolio(barrier, group, payoff, maturity);
    return verify_hedge_identity(model, barrier, portfolio, maturity, mc, opts);
}

MarketModel single_asset_model(double sigma, double rate, double spot) {
    if (sigma <= 0.0) throw std::invalid_argument("single_asset_model: sigma must be positive");
    Matrix lambda(2, 1);
    lambda << 0.0, sigma;
    Vector s0(2);
    s0 << 1.0, spot;
    return MarketModel(std::move(lambda), rate, std::move(s0));
}

SymmetryReport put_call_symmetry_case(double sigma, double rate, double spot, double level,
                                      double strike, double maturity, const McConfig& mc) {
    const MarketModel model = single_asset_model(sigma, rate, spot);
    // nu = sigma makes C = (0, 1): the barrier and the payoff act on the
    // asset price itself and x_{s_1} is the put-call symmetry power.
    Vector nu(1), levels(1);
    nu << sigma;
    levels << level;
    const ConeBarrier barrier(model, orthogonal_system(1), nu, levels);
    const ReflectionGroup group = generate_group(barrier.fs());

    SymmetryReport report;
    report.expected_exponent = 1.0 - 2.0 * rate / (sigma * sigma);
    report.exponent = solve_weight_exponent(barrier, group.element(1))(0);
    report.exponent_ok = std::abs(report.exponent - report.expected_exponent) <= 1e-12;
    report.verify =
        verify_hedge_identity(model, barrier, Payoff::call(0, strike), maturity, mc);
    report.pass = report.exponent_ok && report.verify.pass;
    return report;
}

std::vector<Vector> sample_boundary_states(const MarketModel& model, const ConeBarrier& barrier,
                                           int face, std::size_t count, std::uint64_t seed) {
    if (face < 0 || face >= barrier.m())
        throw std::invalid_argument("sample_boundary_states: face out of range");
    const Eigen::CompleteOrthogonalDecomposition<Matrix> sp_cod(barrier.sigma_prime());
    CounterRng rng(CounterRng::mix(seed + kTagBoundary), static_cast<std::uint64_t>(face));
    std::vector<Vector> states;
    states.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector y(barrier.m());
        for (int k = 0; k < barrier.m(); ++k) y(k) = 0.05 + 0.45 * rng.uniform();
        y(face) = 0.0;
        const Vector x = sp_cod.solve(y);  // a point on wall `face`, inside the others
        Vector log_state =
            model.log_spot() + model.lambda() * (x - barrier.offset());
        states.push_back(log_state.array().exp());
    }
    return states;
}

}  // namespace conehedge
