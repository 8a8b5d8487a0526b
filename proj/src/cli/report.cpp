#include "report.hpp"

#include <sstream>

namespace fairaudit::cli {

namespace {

void render_section(std::ostringstream& out, const std::string& name,
                    const nlohmann::json& values, int indent) {
    const std::string pad(indent, ' ');
    if (!name.empty()) out << pad << name << ":\n";
    const std::string inner((name.empty() ? indent : indent + 2), ' ');
    for (const auto& [key, value] : values.items()) {
        if (value.is_object()) {
            render_section(out, key, value, static_cast<int>(inner.size()));
        } else {
            out << inner << key << ": " << value.dump() << "\n";
        }
    }
}

} // namespace

std::string format_number(double value) {
    return nlohmann::json(value).dump();
}

nlohmann::json ReportDocument::to_json() const {
    nlohmann::json doc;
    doc["command"] = command;
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["warnings"] = warnings;
    return doc;
}

std::string ReportDocument::to_text() const {
    std::ostringstream out;
    out << "command: " << command << "\n";
    render_section(out, "inputs", inputs, 0);
    render_section(out, "outputs", outputs, 0);
    if (!warnings.empty()) {
        out << "warnings:\n";
        for (const auto& w : warnings) out << "  - " << w << "\n";
    }
    return out.str();
}

} // namespace fairaudit::cli
