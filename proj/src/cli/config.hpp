#pragma once

#include "fairaudit/confusion.hpp"
#include "fairaudit/errors.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairaudit::cli {

// Key-value config file with optional [section] headers.
//
//   # comment
//   metric = DP
//   [group1]
//   positive_pred_rate = 0.3478
//
// Keys before any section header belong to the unnamed top-level section "".
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;

    std::string require_string(const std::string& section, const std::string& key) const;
    double require_double(const std::string& section, const std::string& key) const;
    std::uint64_t require_uint(const std::string& section, const std::string& key) const;
    std::optional<double> get_double(const std::string& section, const std::string& key) const;
    std::optional<std::uint64_t> get_uint(const std::string& section, const std::string& key) const;

    bool has_section(const std::string& section) const;

    // Keys present in the file but not in the accepted set; surfaced as
    // warnings so typos do not silently change a run.
    std::vector<std::string> unknown_keys(
        const std::map<std::string, std::vector<std::string>>& accepted) const;

    const std::string& origin() const noexcept { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Group rates from a [groupN] config section. Accepts either the full
// (prevalence, tpr, tnr) triple, or positive_pred_rate alone, or both (the
// derived rate is then cross-checked to 1e-9).
GroupRates group_rates_from_config(const ConfigFile& cfg, const std::string& section);

} // namespace fairaudit::cli
