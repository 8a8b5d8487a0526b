#pragma once

#include "fairaudit/confusion.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairaudit::cli {

// One parsed audit row.
struct AuditRecord {
    std::string group;
    std::optional<int> y_true; // absent when the file has no y_true column
    int y_pred = 0;
};

// Aggregated counts for one group label.
struct GroupTally {
    std::uint64_t n = 0;
    std::uint64_t pred_positive = 0;
    ConfusionCounts counts; // meaningful only when the file carries y_true
};

struct AuditDataset {
    std::map<std::string, GroupTally> groups;
    bool has_y_true = false;
    std::uint64_t rejected_rows = 0; // rows with empty fields, skipped
};

// Parse one binary field. Accepts 0/1, true/false (case-insensitive) and the
// class labels +/-. Throws DataError naming the line otherwise.
int parse_binary_field(const std::string& raw, const std::string& column, int line_no);

// Load `group,y_true,y_pred` audit data (UTF-8, comma-separated, LF or CRLF).
// Columns are located by header name; y_true may be absent when the metric
// does not need labels. Rows with empty fields are skipped and counted.
AuditDataset load_audit_csv(const std::string& path);

// The two-group view of a dataset: the privileged label becomes group 1 and
// every other label is pooled into group 2 (pooled labels are reported so the
// caller can surface a warning). Throws when the privileged label is missing
// from the data.
struct TwoGroupView {
    std::string group1_label;
    std::string group2_label; // the other label, or "pooled:<a>+<b>..." when >2
    GroupTally group1;
    GroupTally group2;
    std::vector<std::string> pooled_labels; // non-empty only when >2 labels
};

TwoGroupView split_privileged(const AuditDataset& data, const std::string& privileged);

} // namespace fairaudit::cli
