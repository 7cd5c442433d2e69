#include "conehedge/market.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "conehedge/rng.hpp"

namespace conehedge {

namespace {

constexpr std::uint64_t kTagTerminal = 0x5445524dull;
constexpr std::uint64_t kTagPath = 0x50415448ull;

Eigen::CompleteOrthogonalDecomposition<Matrix> cod(const Matrix& a) {
    return Eigen::CompleteOrthogonalDecomposition<Matrix>(a);
}

[[noreturn]] void rank_error(const char* where, const Eigen::VectorXd& singular_values) {
    std::ostringstream msg;
    msg << where << ": rank-deficient system; singular values:";
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) msg << " " << singular_values(i);
    throw std::runtime_error(msg.str());
}

}  // namespace

MarketModel::MarketModel(Matrix lambda, double rate, Vector spot)
    : lambda_(std::move(lambda)), rate_(rate), spot_(std::move(spot)) {
    const int rows = static_cast<int>(lambda_.rows());
    const int d = static_cast<int>(lambda_.cols());
    if (rows < 2 || d < 1) throw std::invalid_argument("MarketModel: need at least one risky asset");
    if (d > rows - 1)
        throw std::invalid_argument("MarketModel: Brownian dimension exceeds the number of risky assets");
    if (lambda_.row(0).cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("MarketModel: row 0 of Lambda must be zero (riskless asset)");
    if (spot_.size() != rows) throw std::invalid_argument("MarketModel: spot size must be n+1");
    if ((spot_.array() <= 0.0).any())
        throw std::invalid_argument("MarketModel: spot prices must be strictly positive");

    Eigen::JacobiSVD<Matrix> svd(lambda_.bottomRows(rows - 1));
    if (svd.singularValues()(d - 1) <= 1e-10) rank_error("MarketModel", svd.singularValues());

    variance_diag_ = (lambda_ * lambda_.transpose()).diagonal();
    log_spot_ = spot_.array().log();
}

Vector vec_pow(const Vector& v, const Matrix& exponents) {
    return (exponents * Vector(v.array().log().matrix())).array().exp();
}

double vec_pow(const Vector& v, const RowVector& exponents) {
    return std::exp(exponents.dot(Vector(v.array().log().matrix())));
}

Matrix solve_exponent_matrix(const MarketModel& model, const FundamentalSystem& fs,
                             const Vector& nu) {
    const int d = model.brownian_dim();
    const int m = fs.size();
    if (fs.dim() != d)
        throw std::invalid_argument("solve_exponent_matrix: system dimension must match Brownian dimension");
    if (nu.size() != m || (nu.array() <= 0.0).any())
        throw std::invalid_argument("solve_exponent_matrix: nu must be a positive m-vector");

    Matrix sigma_prime = nu.asDiagonal() * fs.root_matrix();
    Matrix c = sigma_prime * cod(model.lambda()).pseudoInverse();
    const double residual = (c * model.lambda() - sigma_prime).cwiseAbs().maxCoeff();
    if (residual > 1e-10) {
        Eigen::JacobiSVD<Matrix> svd(model.lambda());
        rank_error("solve_exponent_matrix", svd.singularValues());
    }
    return c;
}

Vector solve_drift(const MarketModel& model, const Matrix& c) {
    const Matrix a = c * model.lambda();
    const Vector rhs = c * (model.rate() * Vector::Ones(c.cols()) - 0.5 * model.variance_diag());
    Vector mu = cod(a).solve(rhs);
    if ((a * mu - rhs).cwiseAbs().maxCoeff() > 1e-10) {
        Eigen::JacobiSVD<Matrix> svd(a);
        rank_error("solve_drift", svd.singularValues());
    }
    return mu;
}

Vector solve_offset(const MarketModel& model, const Matrix& c, const Vector& levels) {
    if (levels.size() != c.rows() || (levels.array() <= 0.0).any())
        throw std::invalid_argument("solve_offset: levels must be a strictly positive m-vector");
    const Matrix a = c * model.lambda();
    const Vector rhs = c * model.log_spot() - Vector(levels.array().log().matrix());
    Vector h = cod(a).solve(rhs);
    if ((a * h - rhs).cwiseAbs().maxCoeff() > 1e-10) {
        Eigen::JacobiSVD<Matrix> svd(a);
        rank_error("solve_offset", svd.singularValues());
    }
    return h;
}

ConeBarrier::ConeBarrier(const MarketModel& model, FundamentalSystem fs, Vector nu, Vector levels)
    : fs_(std::move(fs)),
      c_(solve_exponent_matrix(model, fs_, nu)),
      levels_(std::move(levels)),
      nu_(std::move(nu)) {
    log_levels_ = levels_.array().log();
    sigma_prime_ = nu_.asDiagonal() * fs_.root_matrix();
    drift_ = solve_drift(model, c_);
    offset_ = solve_offset(model, c_, levels_);
    wall_inv_norms_ = sigma_prime_.rowwise().norm().cwiseInverse();
}

Matrix representation_matrix(const ConeBarrier& barrier, const GroupElement& w) {
    const Matrix& sp = barrier.sigma_prime();
    const Matrix target = sp * w.matrix;  // C Lambda w
    Matrix t_w = cod(sp.transpose()).solve(target.transpose()).transpose();
    if ((t_w * sp - target).cwiseAbs().maxCoeff() > 1e-9)
        throw std::runtime_error(
            "representation_matrix: root span is not invariant under w; "
            "C was not built from a fundamental system of Lambda's geometry");
    return t_w;
}

Vector solve_weight_exponent(const ConeBarrier& barrier, const GroupElement& w) {
    const Matrix a = barrier.sigma_prime().transpose();
    const Vector rhs = w.matrix * barrier.drift() - barrier.drift();
    Vector x_w = cod(a).solve(rhs);
    if ((a * x_w - rhs).cwiseAbs().maxCoeff() > 1e-9)
        throw std::runtime_error("solve_weight_exponent: w(mu) - mu is not in the root span");
    return x_w;
}

int resolve_steps(const McConfig& mc, double maturity) {
    if (mc.n_steps > 0) return mc.n_steps;
    return std::max(1, static_cast<int>(std::ceil(512.0 * maturity)));
}

TerminalSampler::TerminalSampler(const MarketModel& model, double maturity, std::uint64_t seed)
    : seed_(CounterRng::mix(seed + kTagTerminal)) {
    if (maturity <= 0.0) throw std::invalid_argument("TerminalSampler: maturity must be positive");
    scaled_lambda_ = std::sqrt(maturity) * model.lambda();
    log_drift_ = model.log_spot() +
                 maturity * (model.rate() * Vector::Ones(model.lambda().rows()) -
                             0.5 * model.variance_diag());
}

void TerminalSampler::sample(std::uint64_t path, Vector& log_s, bool antithetic_leg) const {
    CounterRng rng(seed_, CounterRng::kStreamsPerPath * path + CounterRng::kStreamNormals);
    log_s = log_drift_;
    const int d = brownian_dim();
    for (int j = 0; j < d; ++j) {
        const double z = antithetic_leg ? -rng.normal() : rng.normal();
        log_s.noalias() += z * scaled_lambda_.col(j);
    }
}

PathSampler::PathSampler(const MarketModel& model, const ConeBarrier& barrier, double maturity,
                         int n_steps, bool bridge, std::uint64_t seed)
    : model_(model),
      n_steps_(n_steps),
      bridge_(bridge),
      seed_(CounterRng::mix(seed + kTagPath)) {
    if (maturity <= 0.0) throw std::invalid_argument("PathSampler: maturity must be positive");
    if (n_steps < 1) throw std::invalid_argument("PathSampler: n_steps must be >= 1");
    dt_ = maturity / n_steps;
    sqrt_dt_ = std::sqrt(dt_);
    walls_ = barrier.wall_inv_norms().asDiagonal() * barrier.sigma_prime();
    start_dist_ = walls_ * barrier.offset();
    drift_step_ = walls_ * (dt_ * barrier.drift());
    terminal_drift_ = model.log_spot() +
                      maturity * (model.rate() * Vector::Ones(model.lambda().rows()) -
                                  0.5 * model.variance_diag());
}

bool PathSampler::sample(std::uint64_t path, Vector& log_s, bool antithetic_leg,
                         bool early_exit) const {
    CounterRng normals(seed_, CounterRng::kStreamsPerPath * path + CounterRng::kStreamNormals);
    CounterRng kills(seed_, CounterRng::kStreamsPerPath * path +
                                (antithetic_leg ? CounterRng::kStreamKillAnti
                                                : CounterRng::kStreamKill));
    const int d = static_cast<int>(walls_.cols());
    const int m = static_cast<int>(walls_.rows());

    Vector b_acc = Vector::Zero(d);
    Vector dist = start_dist_;
    Vector prev_dist(m);
    Vector step(d);
    bool alive = (dist.array() > 0.0).all();
    if (!alive && early_exit) return false;

    for (int s = 0; s < n_steps_; ++s) {
        for (int j = 0; j < d; ++j) {
            const double z = antithetic_leg ? -normals.normal() : normals.normal();
            step(j) = sqrt_dt_ * z;
        }
        b_acc += step;
        if (!alive) continue;
        prev_dist = dist;
        dist.noalias() += walls_ * step;
        dist += drift_step_;
        if ((dist.array() <= 0.0).any()) {
            alive = false;
        } else if (bridge_) {
            for (int k = 0; k < m; ++k) {
                const double arg = -2.0 * prev_dist(k) * dist(k) / dt_;
                if (arg > -37.0 && kills.uniform() <= std::exp(arg)) {
                    alive = false;
                    break;
                }
            }
        }
        if (!alive && early_exit) return false;
    }

    log_s = terminal_drift_ + model_.lambda() * b_acc;
    return alive;
}

Matrix simulate_terminal(const MarketModel& model, double maturity, std::uint64_t n_paths,
                         std::uint64_t seed) {
    TerminalSampler sampler(model, maturity, seed);
    Matrix out(n_paths, model.lambda().rows());
    Vector log_s;
    for (std::uint64_t i = 0; i < n_paths; ++i) {
        sampler.sample(i, log_s);
        out.row(i) = log_s.array().exp();
    }
    return out;
}

std::vector<PathExitResult> simulate_path_with_exit(const MarketModel& model,
                                                    const ConeBarrier& barrier, double maturity,
                                                    int n_steps, std::uint64_t n_paths,
                                                    std::uint64_t seed, bool bridge) {
    PathSampler sampler(model, barrier, maturity, n_steps, bridge, seed);
    std::vector<PathExitResult> out;
    out.reserve(n_paths);
    Vector log_s;
    for (std::uint64_t i = 0; i < n_paths; ++i) {
        const bool survived = sampler.sample(i, log_s, false, /*early_exit=*/false);
        out.push_back(PathExitResult{log_s.array().exp(), survived});
    }
    return out;
}

}  // namespace conehedge
