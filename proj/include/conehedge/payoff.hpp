#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conehedge/types.hpp"

namespace conehedge {

/// Terminal payoff f evaluated on the m-vector S^C (componentwise positive).
/// Built-ins (call, put, indicator on one component) have at most linear
/// growth by construction; tabulated payoffs interpolate multilinearly in
/// log coordinates, clamp outside the grid, and carry a user-asserted
/// growth flag.
class Payoff {
public:
    enum class Kind { Call, Put, Indicator, Table };

    static Payoff call(int index, double strike);
    static Payoff put(int index, double strike);
    static Payoff indicator(int index, double strike);
    static Payoff table(std::vector<std::vector<double>> axes, std::vector<double> values,
                        bool linear_growth);

    /// "call:k=1,K=100" / "put:k=2,K=95" / "indicator:k=1,K=1.05" /
    /// "table:<json file>"; k is 1-based.
    static Payoff parse(const std::string& text);

    double operator()(const Vector& sc) const;

    Kind kind() const { return kind_; }
    int index() const { return index_; }          // 0-based component
    double strike() const { return strike_; }
    bool linear_growth() const { return linear_growth_; }

    /// Number of S^C components the payoff reads; 0 means "any" for the
    /// single-component kinds (validated against m at portfolio build).
    int table_dims() const { return static_cast<int>(log_axes_.size()); }

    nlohmann::json to_json() const;
    static Payoff from_json(const nlohmann::json& j);
    std::string describe() const;

private:
    Payoff() = default;

    Kind kind_ = Kind::Call;
    int index_ = 0;
    double strike_ = 0.0;
    bool linear_growth_ = true;
    std::vector<std::vector<double>> axes_;      // grids over S^C, ascending, > 0
    std::vector<std::vector<double>> log_axes_;
    std::vector<double> values_;                 // row-major over the axes
};

}  // namespace conehedge
