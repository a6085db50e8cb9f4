#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace robust_grad::harness {

enum class OutputFormat { Csv, JsonLines };

OutputFormat format_from_string(std::string_view name);

/// One long-format metric row. Empty optionals render as empty CSV fields
/// (and are omitted from JSON lines), e.g. seed for cross-seed summaries.
struct Row {
    std::string study;
    std::string method;
    std::string setting;
    double alpha = 0.0;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> iter;
    std::string metric;
    double value = 0.0;
};

inline constexpr std::string_view kCsvHeader = "study,method,setting,alpha,seed,iter,metric,value";

/// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const Row& row);
void write_jsonl_row(std::ostream& os, const Row& row);
void write_rows(std::ostream& os, const std::vector<Row>& rows, OutputFormat format, bool with_header = true);

}  // namespace robust_grad::harness
