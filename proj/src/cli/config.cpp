#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fairaudit::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string describe_key(const std::string& section, const std::string& key) {
    return section.empty() ? "'" + key + "'" : "'" + key + "' in [" + section + "]";
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']' || stripped.size() < 3) {
                throw ValidationError(origin + ":" + std::to_string(line_no) +
                                      ": malformed section header '" + stripped + "'");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            cfg.sections_[section]; // a section may legitimately be empty
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(origin + ":" + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError(origin + ":" + std::to_string(line_no) +
                                  ": empty key");
        }
        auto [it, inserted] = cfg.sections_[section].emplace(key, value);
        if (!inserted) {
            throw ValidationError(origin + ":" + std::to_string(line_no) +
                                  ": duplicate key " + describe_key(section, key));
        }
    }
    return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto sit = sections_.find(section);
    return sit != sections_.end() && sit->second.count(key) > 0;
}

std::optional<std::string> ConfigFile::get(const std::string& section,
                                           const std::string& key) const {
    const auto sit = sections_.find(section);
    if (sit == sections_.end()) return std::nullopt;
    const auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return std::nullopt;
    return kit->second;
}

std::string ConfigFile::require_string(const std::string& section,
                                       const std::string& key) const {
    const auto v = get(section, key);
    if (!v) {
        throw ValidationError(origin_ + ": missing required key " +
                              describe_key(section, key));
    }
    return *v;
}

double ConfigFile::require_double(const std::string& section,
                                  const std::string& key) const {
    const std::string raw = require_string(section, key);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ValidationError(origin_ + ": key " + describe_key(section, key) +
                              " must be a finite number, got '" + raw + "'");
    }
    return v;
}

std::uint64_t ConfigFile::require_uint(const std::string& section,
                                       const std::string& key) const {
    const std::string raw = require_string(section, key);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0' || errno == ERANGE ||
        raw.find('-') != std::string::npos) {
        throw ValidationError(origin_ + ": key " + describe_key(section, key) +
                              " must be a non-negative integer, got '" + raw + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::optional<double> ConfigFile::get_double(const std::string& section,
                                             const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return require_double(section, key);
}

std::optional<std::uint64_t> ConfigFile::get_uint(const std::string& section,
                                                  const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return require_uint(section, key);
}

bool ConfigFile::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

std::vector<std::string> ConfigFile::unknown_keys(
    const std::map<std::string, std::vector<std::string>>& accepted) const {
    std::vector<std::string> unknown;
    for (const auto& [section, kv] : sections_) {
        const auto ait = accepted.find(section);
        if (ait == accepted.end()) {
            for (const auto& [key, value] : kv) {
                unknown.push_back(describe_key(section, key));
            }
            continue;
        }
        for (const auto& [key, value] : kv) {
            bool known = false;
            for (const auto& k : ait->second) {
                if (k == key) { known = true; break; }
            }
            if (!known) unknown.push_back(describe_key(section, key));
        }
    }
    return unknown;
}

GroupRates group_rates_from_config(const ConfigFile& cfg, const std::string& section) {
    if (!cfg.has_section(section)) {
        throw ValidationError(cfg.origin() + ": missing [" + section + "] section");
    }
    const auto prevalence = cfg.get_double(section, "prevalence");
    const auto tpr = cfg.get_double(section, "tpr");
    const auto tnr = cfg.get_double(section, "tnr");
    const auto mpp = cfg.get_double(section, "positive_pred_rate");

    const bool any_triple = prevalence || tpr || tnr;
    if (any_triple) {
        if (!(prevalence && tpr && tnr)) {
            throw ValidationError(cfg.origin() + ": [" + section +
                                  "] must give all of prevalence, tpr, tnr "
                                  "(or positive_pred_rate alone)");
        }
        const GroupRates rates = GroupRates::from_parameters(*prevalence, *tpr, *tnr);
        if (mpp && std::fabs(rates.positive_pred_rate() - *mpp) > 1e-9) {
            throw ValidationError(
                cfg.origin() + ": [" + section + "] positive_pred_rate " +
                std::to_string(*mpp) + " is inconsistent with the (prevalence, "
                "tpr, tnr) triple, which implies " +
                std::to_string(rates.positive_pred_rate()));
        }
        return rates;
    }
    if (mpp) {
        return GroupRates::from_positive_rate(*mpp);
    }
    throw ValidationError(cfg.origin() + ": [" + section +
                          "] must give (prevalence, tpr, tnr) or positive_pred_rate");
}

} // namespace fairaudit::cli
