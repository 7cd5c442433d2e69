#include "conehedge/io.hpp"

#include <cstdio>
#include <fstream>

namespace conehedge {

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw ConfigError("field '" + field + "': expected an array of rows");
    const std::size_t cols = j.front().size();
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ConfigError("field '" + field + "': ragged rows at row " + std::to_string(i));
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw ConfigError("field '" + field + "': non-numeric entry at (" +
                                  std::to_string(i) + "," + std::to_string(k) + ")");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
        }
    }
    return m;
}

Vector vector_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError("field '" + field + "': expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ConfigError("field '" + field + "': non-numeric entry at index " +
                              std::to_string(i));
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

nlohmann::json system_to_json(const FundamentalSystem& fs) {
    nlohmann::json j;
    j["dim"] = fs.dim();
    nlohmann::json roots = nlohmann::json::array();
    for (const Vector& a : fs.roots()) roots.push_back(vector_to_json(a));
    j["simple_roots"] = std::move(roots);
    return j;
}

FundamentalSystem system_from_json(const nlohmann::json& j) {
    if (j.is_string()) return system_from_name(j.get<std::string>());
    if (!j.is_object() || !j.contains("dim") || !j.contains("simple_roots"))
        throw ConfigError("field 'system': expected a name string or {dim, simple_roots}");
    const int dim = j.at("dim").get<int>();
    std::vector<Vector> roots;
    for (const auto& r : j.at("simple_roots"))
        roots.push_back(vector_from_json(r, "system.simple_roots"));
    try {
        return FundamentalSystem(dim, std::move(roots));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field 'system': ") + e.what());
    }
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError("missing field '" + field + "'");
    return j.at(field);
}

}  // namespace

ModelConfig model_config_from_json(const nlohmann::json& j) {
    Matrix lambda = matrix_from_json(require_field(j, "lambda"), "lambda");
    const auto& r_field = require_field(j, "r");
    if (!r_field.is_number()) throw ConfigError("field 'r': expected a number");
    const double rate = r_field.get<double>();
    Vector spot = vector_from_json(require_field(j, "s0"), "s0");

    std::string system_name = "custom";
    const auto& system_field = require_field(j, "system");
    if (system_field.is_string()) system_name = system_field.get<std::string>();
    FundamentalSystem fs = system_from_json(system_field);

    Vector levels = vector_from_json(require_field(j, "H"), "H");
    Vector nu;
    if (j.contains("nu"))
        nu = vector_from_json(j.at("nu"), "nu");
    else
        nu = Vector::Ones(fs.size());

    try {
        MarketModel model(std::move(lambda), rate, std::move(spot));
        return ModelConfig{std::move(model), std::move(fs), std::move(nu), std::move(levels),
                           std::move(system_name)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return model_config_from_json(j);
}

nlohmann::json portfolio_to_json(const HedgePortfolio& portfolio) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["system"] = portfolio.system_name();
    j["maturity"] = portfolio.maturity();
    j["H"] = vector_to_json(portfolio.levels());
    j["payoff"] = portfolio.payoff().to_json();
    nlohmann::json terms = nlohmann::json::array();
    for (const HedgeTerm& t : portfolio.terms()) {
        nlohmann::json jt;
        jt["sign"] = t.sign;
        jt["word"] = t.w.word;
        jt["w_matrix"] = matrix_to_json(t.w.matrix);
        jt["t_w"] = matrix_to_json(*t.w.rep_matrix);
        jt["c_w"] = matrix_to_json(t.c_w);
        jt["x_w"] = vector_to_json(t.x_w);
        jt["log_region"] = vector_to_json(t.log_region);
        jt["weight_row"] = vector_to_json(t.weight_row.transpose());
        jt["log_weight_scale"] = t.log_weight_scale;
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    return j;
}

HedgePortfolio portfolio_from_json(const nlohmann::json& j) {
    try {
        Vector levels = vector_from_json(require_field(j, "H"), "H");
        Payoff payoff = Payoff::from_json(require_field(j, "payoff"));
        const double maturity = require_field(j, "maturity").get<double>();
        const std::string system_name = j.value("system", "custom");
        std::vector<HedgeTerm> terms;
        for (const auto& jt : require_field(j, "terms")) {
            HedgeTerm t;
            t.sign = jt.at("sign").get<double>();
            t.w.word = jt.at("word").get<std::vector<int>>();
            t.w.sign = t.w.word.size() % 2 == 0 ? 1 : -1;
            t.w.matrix = matrix_from_json(jt.at("w_matrix"), "terms.w_matrix");
            t.w.rep_matrix = matrix_from_json(jt.at("t_w"), "terms.t_w");
            t.c_w = matrix_from_json(jt.at("c_w"), "terms.c_w");
            t.x_w = vector_from_json(jt.at("x_w"), "terms.x_w");
            t.log_region = vector_from_json(jt.at("log_region"), "terms.log_region");
            t.weight_row = vector_from_json(jt.at("weight_row"), "terms.weight_row").transpose();
            t.log_weight_scale = jt.at("log_weight_scale").get<double>();
            terms.push_back(std::move(t));
        }
        return HedgePortfolio(std::move(terms), std::move(levels), std::move(payoff), system_name,
                              maturity);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("portfolio: ") + e.what());
    }
}

void save_portfolio(const HedgePortfolio& portfolio, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << portfolio_to_json(portfolio).dump(2) << "\n";
}

HedgePortfolio load_portfolio(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open portfolio file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("portfolio '" + path + "': " + e.what());
    }
    return portfolio_from_json(j);
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out) : out_(out) {
    out_ << "# conehedge " << kVersion << "\n";
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_full(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

}  // namespace conehedge
