#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace morrey {

// Fixed float formatting shared by every emitted artifact: %.12g, with
// non-finite values spelled "inf", "-inf", "nan".
std::string format_sig12(double v);

// Deterministic JSON dump: object keys in sorted order, two-space indent,
// numbers through format_sig12 (non-finite ones as quoted strings), trailing
// newline.  Re-running the same experiment must reproduce the bytes exactly.
std::string dump_sorted_json(const nlohmann::json& j);

// Minimal CSV quoting: a cell is wrapped (with doubled quotes) only when it
// contains a comma, quote, or newline, so numeric tables stay clean.
std::string csv_escape(const std::string& cell);
std::string csv_row(const std::vector<std::string>& cells);

void write_text_file(const std::string& path, const std::string& content);

} // namespace morrey
