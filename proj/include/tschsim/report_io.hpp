#ifndef TSCHSIM_REPORT_IO_HPP
#define TSCHSIM_REPORT_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tschsim/engine.hpp"

namespace tschsim {

/// Power table, one row per node plus the "All" totals row.
/// Columns: node, P_send, P_rec, P_listen, P (uW, 1 decimal).
std::string power_csv(const RunReport& report);

/// Latency table, one row per flow plus the merged "all" row.
/// Columns: flow, mu, sigma, min, p99, p99_9, p99_99, max (s, 3 decimals), n.
/// Flows without samples keep their statistic columns empty.
std::string latency_csv(const RunReport& report);

/// Self-describing report with full precision (integer microseconds and
/// nanojoules) plus run metadata. Contains nothing but the run parameters
/// and the results, so equivalent runs serialize to identical bytes.
std::string report_json(const RunReport& report);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(const std::string& name) const;
    const std::vector<std::string>* row(const std::string& first_field) const;
};

std::optional<CsvTable> parse_csv(const std::string& text);

/// Writes via a temp file and rename so readers never observe partial
/// output. Returns false (and cleans up) on I/O failure.
bool write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::optional<std::string> read_file(const std::filesystem::path& path);

} // namespace tschsim

#endif
