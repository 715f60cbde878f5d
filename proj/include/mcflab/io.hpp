#pragma once
//
// Text formats: model descriptors, key-value scenario files, spectrum and
// profile JSON.
//

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcflab/criteria.hpp"
#include "mcflab/errors.hpp"
#include "mcflab/geometry.hpp"
#include "mcflab/svcore.hpp"

namespace mcflab {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(what + ": expected a number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size() || !std::isfinite(v)) throw ConfigError(what + ": '" + t + "' is not a finite number");
    return v;
}

inline long parse_integer(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || errno != 0 || end != t.c_str() + t.size()) throw ConfigError(what + ": '" + t + "' is not an integer");
    return v;
}

/// sphere(n[, r]) | cp(l) | hp(l) | torus(n), optionally followed by "scaled rho".
inline CurvatureModel parse_model(const std::string& text)
{
    static const std::regex re(R"(^\s*(sphere|cp|hp|torus)\s*\(\s*([^,()]+?)\s*(?:,\s*([^()]+?)\s*)?\)\s*(?:scaled\s+(\S+))?\s*$)");
    std::smatch mt;
    if (!std::regex_match(text, mt, re)) throw ConfigError("cannot parse model descriptor '" + text + "'");
    const std::string kind = mt[1];
    const long dim = parse_integer(mt[2], "model dimension");
    if (dim < 1 || dim > 1000) throw ConfigError("model dimension out of range in '" + text + "'");
    if (mt[3].matched && kind != "sphere") throw ConfigError("only sphere(n, r) takes a radius");
    try {
        CurvatureModel model = CurvatureModel::flat_torus(1);
        if (kind == "sphere")
            model = CurvatureModel::round_sphere(int(dim), mt[3].matched ? parse_real(mt[3], "sphere radius") : 1.0);
        else if (kind == "cp")
            model = CurvatureModel::fubini_study_cp(int(dim));
        else if (kind == "hp")
            model = CurvatureModel::fubini_study_hp(int(dim));
        else
            model = CurvatureModel::flat_torus(int(dim));
        if (mt[4].matched) model = model.rescaled(parse_real(mt[4], "scale"));
        return model;
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid model '") + text + "': " + e.what());
    }
}

/// Key-value file: "key = value" lines, '#' starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>")
    {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            if (cfg.values_.count(key)) throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
            cfg.values_[key] = value;
            cfg.order_.push_back(key);
        }
        cfg.origin_ = origin;
        return cfg;
    }

    static KeyValueConfig load(const std::string& path)
    {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path);
    }

    bool has(const std::string& k) const { return values_.count(k) > 0; }

    std::string get(const std::string& k) const
    {
        auto it = values_.find(k);
        if (it == values_.end()) throw ConfigError(origin_ + ": missing key '" + k + "'");
        used_[k] = true;
        return it->second;
    }
    std::string get(const std::string& k, const std::string& def) const { return has(k) ? get(k) : def; }
    double real(const std::string& k) const { return parse_real(get(k), origin_ + ": " + k); }
    double real(const std::string& k, double def) const { return has(k) ? real(k) : def; }
    long integer(const std::string& k) const { return parse_integer(get(k), origin_ + ": " + k); }
    long integer(const std::string& k, long def) const { return has(k) ? integer(k) : def; }

    /// Keys never read; callers reject them to catch typos.
    std::vector<std::string> unused() const
    {
        std::vector<std::string> out;
        for (const auto& k : order_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

    const std::vector<std::string>& keys() const { return order_; }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
    mutable std::map<std::string, bool> used_;
    std::string origin_;
};

inline nlohmann::json spectrum_to_json(const SingularSpectrum& s) { return nlohmann::json(s.lambda()); }

inline SingularSpectrum spectrum_from_json(const nlohmann::json& j, int n, int m)
{
    if (!j.is_array()) throw ConfigError("spectrum must be a flat JSON array");
    std::vector<double> v;
    for (const auto& x : j) {
        if (!x.is_number()) throw ConfigError("spectrum entries must be numbers");
        v.push_back(x.get<double>());
    }
    try {
        return SingularSpectrum::from_values(n, m, v);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid spectrum: ") + e.what());
    }
}

/// {"name": ..., "source": "<model>", "target": "<model>", "spectra": [[...], ...]}
/// ("spectrum": [...] is accepted for a constant profile).
inline MapProfile profile_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw ConfigError("profile must be a JSON object");
    for (const char* k : {"source", "target"})
        if (!j.contains(k) || !j[k].is_string()) throw ConfigError(std::string("profile needs a string '") + k + "'");
    const CurvatureModel src = parse_model(j["source"].get<std::string>());
    const CurvatureModel tgt = parse_model(j["target"].get<std::string>());
    std::vector<SingularSpectrum> spectra;
    if (j.contains("spectra")) {
        if (!j["spectra"].is_array()) throw ConfigError("'spectra' must be an array of arrays");
        for (const auto& s : j["spectra"]) spectra.push_back(spectrum_from_json(s, src.real_dim(), tgt.real_dim()));
    } else if (j.contains("spectrum")) {
        spectra.push_back(spectrum_from_json(j["spectrum"], src.real_dim(), tgt.real_dim()));
    } else {
        throw ConfigError("profile needs 'spectra' or 'spectrum'");
    }
    try {
        return MapProfile(j.value("name", std::string("custom")), src, tgt, std::move(spectra));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid profile: ") + e.what());
    }
}

/// Finite numbers as numbers, +inf as the string "inf", NaN as null.
inline nlohmann::json real_to_json(double x)
{
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

inline nlohmann::json verdict_to_json(const HypothesisVerdict& v)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : v.checks)
        checks.push_back({{"name", c.name}, {"lhs", real_to_json(c.lhs)}, {"relation", c.relation}, {"rhs", real_to_json(c.rhs)}, {"ok", c.ok}});
    nlohmann::json j{{"criterion", criterion_number(v.criterion)}, {"holds", v.holds}, {"checks", checks}, {"notes", v.notes}};
    j["failing"] = v.failing.empty() ? nlohmann::json(nullptr) : nlohmann::json(v.failing);
    return j;
}

inline nlohmann::json dilation_to_json(const DilationResult& r)
{
    nlohmann::json j{{"criterion", criterion_number(r.criterion)},
                     {"feasible", r.feasible},
                     {"dilation_bound", real_to_json(r.dilation_bound)},
                     {"notes", r.notes}};
    if (r.feasible) {
        j["rho_interval"] = {{"lo", real_to_json(r.rho_lo)}, {"lo_closed", r.lo_closed}, {"hi", real_to_json(r.rho_hi)}, {"hi_closed", r.hi_closed}};
        j["witness"] = real_to_json(*r.witness);
        j["witness_hypotheses"] = verdict_to_json(*r.witness_check);
        j["witness_area_decreasing"] = r.witness_area_decreasing;
        j["citation"] = r.citation;
    }
    return j;
}

}  // namespace mcflab
