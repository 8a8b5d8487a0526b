#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace fairaudit::cli {

// The result of one CLI command. Every numeric field is the value computed
// by the library; the renderers below only format, never re-derive.
struct ReportDocument {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::vector<std::string> warnings;

    // Machine-readable form. Keys are emitted in sorted order and floats as
    // shortest round-trip decimals, so identical runs are byte-identical.
    nlohmann::json to_json() const;

    // Human-readable form; numbers are formatted through the same JSON
    // serializer so both renderings agree on every value.
    std::string to_text() const;
};

// Shortest round-trip decimal for a double, identical to its JSON rendering.
std::string format_number(double value);

} // namespace fairaudit::cli
