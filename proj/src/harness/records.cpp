#include "robust_grad/harness/records.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace robust_grad::harness {

OutputFormat format_from_string(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "jsonl" || name == "json-lines") return OutputFormat::JsonLines;
    throw std::invalid_argument("unknown output format '" + std::string(name) + "' (expected csv|jsonl)");
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), end);
}

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const Row& row) {
    // Fields are identifiers we generate ourselves; none contains a comma.
    os << row.study << ',' << row.method << ',' << row.setting << ',' << format_double(row.alpha) << ',';
    if (row.seed) os << *row.seed;
    os << ',';
    if (row.iter) os << *row.iter;
    os << ',' << row.metric << ',' << format_double(row.value) << '\n';
}

void write_jsonl_row(std::ostream& os, const Row& row) {
    // Assembled by hand so numbers use the same shortest round-trip text as CSV.
    auto str = [](const std::string& v) { return nlohmann::json(v).dump(); };
    auto num = [](double v) {
        const std::string text = format_double(v);
        return std::isfinite(v) ? text : "\"" + text + "\"";
    };
    os << "{\"study\":" << str(row.study) << ",\"method\":" << str(row.method) << ",\"setting\":" << str(row.setting)
       << ",\"alpha\":" << num(row.alpha);
    if (row.seed) os << ",\"seed\":" << *row.seed;
    if (row.iter) os << ",\"iter\":" << *row.iter;
    os << ",\"metric\":" << str(row.metric) << ",\"value\":" << num(row.value) << "}\n";
}

void write_rows(std::ostream& os, const std::vector<Row>& rows, OutputFormat format, bool with_header) {
    if (format == OutputFormat::Csv) {
        if (with_header) write_csv_header(os);
        for (const auto& r : rows) write_csv_row(os, r);
    } else {
        for (const auto& r : rows) write_jsonl_row(os, r);
    }
}

}  // namespace robust_grad::harness
