#include "rstrade/config.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "rstrade/errors.hpp"

namespace rstrade {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

const char* const kRequiredKeys[] = {"mu1", "mu2", "sigma", "rho", "lambda1",
                                     "lambda2", "K", "T", "n_p", "n_t"};
const char* const kOptionalKeys[] = {"eps", "penalty_eps"};

double number_at(const nlohmann::json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(key, std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

Index integer_at(const nlohmann::json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number_integer())
        throw ConfigError(key, std::string("key \"") + key + "\" must be an integer");
    return v.get<Index>();
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "config document must be a JSON object");

    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        bool known = false;
        for (const char* k : kRequiredKeys) known |= key == k;
        for (const char* k : kOptionalKeys) known |= key == k;
        if (!known) throw ConfigError(key, "unknown config key \"" + key + "\"");
    }
    for (const char* k : kRequiredKeys)
        if (!doc.contains(k))
            throw ConfigError(k, std::string("missing required config key \"") + k + "\"");

    RunConfig cfg;
    cfg.params.mu1 = number_at(doc, "mu1");
    cfg.params.mu2 = number_at(doc, "mu2");
    cfg.params.sigma = number_at(doc, "sigma");
    cfg.params.rho = number_at(doc, "rho");
    cfg.params.lambda1 = number_at(doc, "lambda1");
    cfg.params.lambda2 = number_at(doc, "lambda2");
    cfg.params.K = number_at(doc, "K");
    cfg.params.T = number_at(doc, "T");
    cfg.n_p = integer_at(doc, "n_p");
    cfg.n_t = integer_at(doc, "n_t");

    if (cfg.n_p < 3) throw ConfigError("n_p", "grid too small: n_p must be >= 3");
    if (cfg.n_t < 1) throw ConfigError("n_t", "grid too small: n_t must be >= 1");

    cfg.params = validate_params(cfg.params);

    cfg.eps = doc.contains("eps") ? number_at(doc, "eps")
                                  : 1.0 / static_cast<double>(cfg.n_p + 1);
    if (!(cfg.eps >= 0.0 && cfg.eps < 0.5))
        throw ConfigError("eps", "eps must lie in [0, 0.5)");

    cfg.penalty_eps = doc.contains("penalty_eps") ? number_at(doc, "penalty_eps") : 1e-4;
    if (!(cfg.penalty_eps > 0.0)) throw ConfigError("penalty_eps", "penalty_eps must be positive");

    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read config file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

Grid grid_from(const RunConfig& cfg) {
    return make_grid(cfg.params.T, cfg.n_p, cfg.n_t, cfg.eps);
}

std::string config_digest(const RunConfig& cfg) {
    std::string canon;
    auto add = [&](const char* key, const std::string& value) {
        canon += key;
        canon += '=';
        canon += value;
        canon += ';';
    };
    add("mu1", format_double(cfg.params.mu1));
    add("mu2", format_double(cfg.params.mu2));
    add("sigma", format_double(cfg.params.sigma));
    add("rho", format_double(cfg.params.rho));
    add("lambda1", format_double(cfg.params.lambda1));
    add("lambda2", format_double(cfg.params.lambda2));
    add("K", format_double(cfg.params.K));
    add("T", format_double(cfg.params.T));
    add("n_p", std::to_string(cfg.n_p));
    add("n_t", std::to_string(cfg.n_t));
    add("eps", format_double(cfg.eps));
    add("penalty_eps", format_double(cfg.penalty_eps));

    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char ch : canon) {
        hash ^= ch;
        hash *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

nlohmann::json config_json(const RunConfig& cfg) {
    return nlohmann::json{{"mu1", cfg.params.mu1},
                          {"mu2", cfg.params.mu2},
                          {"sigma", cfg.params.sigma},
                          {"rho", cfg.params.rho},
                          {"lambda1", cfg.params.lambda1},
                          {"lambda2", cfg.params.lambda2},
                          {"K", cfg.params.K},
                          {"T", cfg.params.T},
                          {"n_p", cfg.n_p},
                          {"n_t", cfg.n_t},
                          {"eps", cfg.eps},
                          {"penalty_eps", cfg.penalty_eps}};
}

}  // namespace rstrade
