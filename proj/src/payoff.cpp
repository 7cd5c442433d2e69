#include "conehedge/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace conehedge {

Payoff Payoff::call(int index, double strike) {
    if (index < 0 || strike <= 0.0) throw std::invalid_argument("Payoff::call: bad parameters");
    Payoff p;
    p.kind_ = Kind::Call;
    p.index_ = index;
    p.strike_ = strike;
    return p;
}

Payoff Payoff::put(int index, double strike) {
    Payoff p = call(index, strike);
    p.kind_ = Kind::Put;
    return p;
}

Payoff Payoff::indicator(int index, double strike) {
    Payoff p = call(index, strike);
    p.kind_ = Kind::Indicator;
    return p;
}

Payoff Payoff::table(std::vector<std::vector<double>> axes, std::vector<double> values,
                     bool linear_growth) {
    if (axes.empty()) throw std::invalid_argument("Payoff::table: no axes");
    std::size_t expected = 1;
    for (const auto& axis : axes) {
        if (axis.size() < 2) throw std::invalid_argument("Payoff::table: axis needs >= 2 nodes");
        if (!std::is_sorted(axis.begin(), axis.end()) || axis.front() <= 0.0)
            throw std::invalid_argument("Payoff::table: axes must be ascending and positive");
        expected *= axis.size();
    }
    if (values.size() != expected)
        throw std::invalid_argument("Payoff::table: values size does not match the grid");
    Payoff p;
    p.kind_ = Kind::Table;
    p.linear_growth_ = linear_growth;
    p.axes_ = std::move(axes);
    p.values_ = std::move(values);
    p.log_axes_.reserve(p.axes_.size());
    for (const auto& axis : p.axes_) {
        std::vector<double> la(axis.size());
        std::transform(axis.begin(), axis.end(), la.begin(), [](double v) { return std::log(v); });
        p.log_axes_.push_back(std::move(la));
    }
    return p;
}

double Payoff::operator()(const Vector& sc) const {
    switch (kind_) {
        case Kind::Call:
            return std::max(sc(index_) - strike_, 0.0);
        case Kind::Put:
            return std::max(strike_ - sc(index_), 0.0);
        case Kind::Indicator:
            return sc(index_) > strike_ ? 1.0 : 0.0;
        case Kind::Table:
            break;
    }
    // Multilinear interpolation in log(S^C), clamped at the grid edges.
    const std::size_t dims = log_axes_.size();
    if (static_cast<std::size_t>(sc.size()) != dims)
        throw std::invalid_argument("Payoff: tabulated payoff dimension mismatch");
    std::vector<std::size_t> cell(dims);
    std::vector<double> frac(dims);
    for (std::size_t a = 0; a < dims; ++a) {
        const auto& axis = log_axes_[a];
        const double v = std::log(sc(static_cast<Eigen::Index>(a)));
        if (v <= axis.front()) {
            cell[a] = 0;
            frac[a] = 0.0;
        } else if (v >= axis.back()) {
            cell[a] = axis.size() - 2;
            frac[a] = 1.0;
        } else {
            const auto it = std::upper_bound(axis.begin(), axis.end(), v);
            cell[a] = static_cast<std::size_t>(it - axis.begin()) - 1;
            frac[a] = (v - axis[cell[a]]) / (axis[cell[a] + 1] - axis[cell[a]]);
        }
    }
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << dims); ++corner) {
        double weight = 1.0;
        std::size_t flat = 0;
        for (std::size_t a = 0; a < dims; ++a) {
            const bool hi = corner & (std::size_t{1} << a);
            weight *= hi ? frac[a] : 1.0 - frac[a];
            flat = flat * axes_[a].size() + cell[a] + (hi ? 1 : 0);
        }
        acc += weight * values_[flat];
    }
    return acc;
}

namespace {

double parse_field(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    if (pos == std::string::npos)
        throw std::invalid_argument("Payoff::parse: missing '" + key + "=' in '" + text + "'");
    return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

Payoff Payoff::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("Payoff::parse: expected '<kind>:<params>', got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "table") {
        std::ifstream in(rest);
        if (!in) throw std::invalid_argument("Payoff::parse: cannot open table file '" + rest + "'");
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }
    const int k = static_cast<int>(parse_field(rest, "k")) - 1;
    const double strike = parse_field(rest, "K");
    if (kind == "call") return call(k, strike);
    if (kind == "put") return put(k, strike);
    if (kind == "indicator") return indicator(k, strike);
    throw std::invalid_argument("Payoff::parse: unknown kind '" + kind + "'");
}

nlohmann::json Payoff::to_json() const {
    switch (kind_) {
        case Kind::Call:
            return {{"kind", "call"}, {"k", index_ + 1}, {"K", strike_}};
        case Kind::Put:
            return {{"kind", "put"}, {"k", index_ + 1}, {"K", strike_}};
        case Kind::Indicator:
            return {{"kind", "indicator"}, {"k", index_ + 1}, {"K", strike_}};
        case Kind::Table:
            return {{"kind", "table"},
                    {"axes", axes_},
                    {"values", values_},
                    {"linear_growth", linear_growth_}};
    }
    throw std::logic_error("Payoff::to_json: unreachable");
}

Payoff Payoff::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "table")
        return table(j.at("axes").get<std::vector<std::vector<double>>>(),
                     j.at("values").get<std::vector<double>>(),
                     j.at("linear_growth").get<bool>());
    const int k = j.at("k").get<int>() - 1;
    const double strike = j.at("K").get<double>();
    if (kind == "call") return call(k, strike);
    if (kind == "put") return put(k, strike);
    if (kind == "indicator") return indicator(k, strike);
    throw std::invalid_argument("Payoff::from_json: unknown kind '" + kind + "'");
}

std::string Payoff::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::Call:
            out << "call:k=" << index_ + 1 << ",K=" << strike_;
            break;
        case Kind::Put:
            out << "put:k=" << index_ + 1 << ",K=" << strike_;
            break;
        case Kind::Indicator:
            out << "indicator:k=" << index_ + 1 << ",K=" << strike_;
            break;
        case Kind::Table:
            out << "table[" << axes_.size() << "d]";
            break;
    }
    return out.str();
}

}  // namespace conehedge
