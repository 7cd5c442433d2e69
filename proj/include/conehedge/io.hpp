#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conehedge/hedge.hpp"
#include "conehedge/market.hpp"
#include "conehedge/reflection.hpp"
#include "conehedge/types.hpp"

namespace conehedge {

/// Raised for malformed configuration input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);
Vector vector_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json system_to_json(const FundamentalSystem& fs);
FundamentalSystem system_from_json(const nlohmann::json& j);

struct ModelConfig {
    MarketModel model;
    FundamentalSystem fs;
    Vector nu;
    Vector levels;
    std::string system_name;

    ConeBarrier make_barrier() const { return ConeBarrier(model, fs, nu, levels); }
};

/// Parses {"lambda": [[..]], "r": .., "s0": [..], "system": name-or-object,
/// "nu": [..] (optional, default ones), "H": [..]}. Throws ConfigError with
/// the offending field named.
ModelConfig model_config_from_json(const nlohmann::json& j);
ModelConfig load_model_config(const std::string& path);

nlohmann::json portfolio_to_json(const HedgePortfolio& portfolio);
HedgePortfolio portfolio_from_json(const nlohmann::json& j);
void save_portfolio(const HedgePortfolio& portfolio, const std::string& path);
HedgePortfolio load_portfolio(const std::string& path);

/// Round-trip decimal formatting ("%.17g").
std::string format_full(double v);

/// CSV with "# conehedge <version>" as its first line.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out);
    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
};

}  // namespace conehedge
