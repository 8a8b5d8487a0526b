#include "csv.hpp"

#include "fairaudit/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fairaudit::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

int parse_binary_field(const std::string& raw, const std::string& column, int line_no) {
    const std::string v = lower(raw);
    if (v == "1" || v == "true" || v == "+") return 1;
    if (v == "0" || v == "false" || v == "-") return 0;
    throw DataError("line " + std::to_string(line_no) + ": column '" + column +
                    "' must be one of 0, 1, true, false, +, - (got '" + raw + "')");
}

AuditDataset load_audit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open data file '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("data file '" + path + "' is empty");
    }
    const auto header = split_fields(strip_cr(line));
    auto column_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    const auto group_col = column_of("group");
    const auto y_true_col = column_of("y_true");
    const auto y_pred_col = column_of("y_pred");
    if (!group_col) {
        throw DataError("data file '" + path + "' is missing the 'group' column");
    }
    if (!y_pred_col) {
        throw DataError("data file '" + path + "' is missing the 'y_pred' column");
    }

    AuditDataset data;
    data.has_y_true = y_true_col.has_value();
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = strip_cr(line);
        if (row.empty()) continue;
        const auto fields = split_fields(row);
        const std::size_t needed =
            std::max({*group_col, *y_pred_col, y_true_col.value_or(0)}) + 1;
        if (fields.size() < needed) {
            throw DataError("line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(needed) + " fields, got " +
                            std::to_string(fields.size()));
        }

        AuditRecord record;
        record.group = fields[*group_col];
        const std::string y_pred_raw = fields[*y_pred_col];
        const std::string y_true_raw = y_true_col ? fields[*y_true_col] : std::string("0");
        if (record.group.empty() || y_pred_raw.empty() ||
            (y_true_col && fields[*y_true_col].empty())) {
            ++data.rejected_rows;
            continue;
        }
        record.y_pred = parse_binary_field(y_pred_raw, "y_pred", line_no);
        if (y_true_col) {
            record.y_true = parse_binary_field(y_true_raw, "y_true", line_no);
        }

        GroupTally& tally = data.groups[record.group];
        ++tally.n;
        tally.pred_positive += record.y_pred;
        if (record.y_true) {
            if (*record.y_true == 1) {
                if (record.y_pred == 1) ++tally.counts.tp; else ++tally.counts.fn;
            } else {
                if (record.y_pred == 1) ++tally.counts.fp; else ++tally.counts.tn;
            }
        }
    }
    if (data.groups.empty()) {
        throw DataError("data file '" + path + "' contains no usable rows");
    }
    return data;
}

TwoGroupView split_privileged(const AuditDataset& data, const std::string& privileged) {
    const auto it = data.groups.find(privileged);
    if (it == data.groups.end()) {
        std::string labels;
        for (const auto& [label, tally] : data.groups) {
            if (!labels.empty()) labels += ", ";
            labels += "'" + label + "'";
        }
        throw DataError("privileged group '" + privileged +
                        "' does not appear in the data (labels present: " + labels + ")");
    }

    TwoGroupView view;
    view.group1_label = privileged;
    view.group1 = it->second;
    for (const auto& [label, tally] : data.groups) {
        if (label == privileged) continue;
        view.group2.n += tally.n;
        view.group2.pred_positive += tally.pred_positive;
        view.group2.counts.tp += tally.counts.tp;
        view.group2.counts.fp += tally.counts.fp;
        view.group2.counts.fn += tally.counts.fn;
        view.group2.counts.tn += tally.counts.tn;
        view.pooled_labels.push_back(label);
    }
    if (view.pooled_labels.empty()) {
        throw DataError("data contains only the privileged group '" + privileged +
                        "'; a comparison group is required");
    }
    if (view.pooled_labels.size() == 1) {
        view.group2_label = view.pooled_labels.front();
        view.pooled_labels.clear();
    } else {
        std::string joined;
        for (const auto& label : view.pooled_labels) {
            if (!joined.empty()) joined += "+";
            joined += label;
        }
        view.group2_label = "pooled:" + joined;
    }
    return view;
}

} // namespace fairaudit::cli
