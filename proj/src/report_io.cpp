#include "tschsim/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tschsim {

namespace {

std::string i128_str(__int128 v) {
    if (v == 0)
        return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    std::string out;
    while (u > 0) {
        out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg)
        out.insert(out.begin(), '-');
    return out;
}

std::string sigma_seconds(const LatencyStat& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s.stddev_us() / 1e6);
    return buf;
}

} // namespace

std::string power_csv(const RunReport& report) {
    std::ostringstream os;
    os << "node,P_send,P_rec,P_listen,P\n";
    const DurUs dur = report.effective_duration_us();
    auto row = [&](const std::string& name, const EnergyAccount& e) {
        os << name << ',' << format_power_uw(e.send_nj, dur) << ',' << format_power_uw(e.rec_nj, dur)
           << ',' << format_power_uw(e.listen_nj, dur) << ',' << format_power_uw(e.total_nj(), dur)
           << '\n';
    };
    for (std::size_t i = 0; i < report.node_names.size(); ++i)
        row(report.node_names[i], report.node_energy[i]);
    row("All", report.total_energy());
    return os.str();
}

std::string latency_csv(const RunReport& report) {
    std::ostringstream os;
    os << "flow,mu,sigma,min,p99,p99_9,p99_99,max,n\n";
    auto row = [&](const std::string& name, const LatencyStat& s) {
        os << name << ',';
        if (s.n == 0) {
            os << ",,,,,,," << 0 << '\n';
            return;
        }
        os << format_fixed(s.sum_us, static_cast<__int128>(s.n) * kUsPerSecond, 3) << ','
           << sigma_seconds(s) << ',' << format_seconds(s.min_us) << ',' << format_seconds(s.p99_us)
           << ',' << format_seconds(s.p99_9_us) << ',' << format_seconds(s.p99_99_us) << ','
           << format_seconds(s.max_us) << ',' << s.n << '\n';
    };
    for (std::size_t i = 0; i < report.flow_names.size(); ++i)
        row(report.flow_names[i], report.flow_latency[i]);
    row("all", report.merged_latency);
    return os.str();
}

std::string report_json(const RunReport& report) {
    nlohmann::ordered_json doc;
    doc["meta"] = {
        {"seed", report.seed},
        {"duration_us", report.duration_us},
        {"warmup_us", report.warmup_us},
        {"percentile_method", "nearest-rank"},
    };

    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.node_names.size(); ++i) {
        const EnergyAccount& e = report.node_energy[i];
        nodes.push_back({
            {"node", report.node_names[i]},
            {"send_nj", e.send_nj},
            {"rec_nj", e.rec_nj},
            {"listen_nj", e.listen_nj},
            {"send_count", e.send_count},
            {"rec_count", e.rec_count},
            {"listen_count", e.listen_count},
        });
    }
    doc["power"] = {{"effective_duration_us", report.effective_duration_us()}, {"nodes", nodes}};

    auto stat_json = [](const std::string& name, const LatencyStat& s) {
        return nlohmann::ordered_json{
            {"flow", name},
            {"n", s.n},
            {"min_us", s.min_us},
            {"p99_us", s.p99_us},
            {"p99_9_us", s.p99_9_us},
            {"p99_99_us", s.p99_99_us},
            {"max_us", s.max_us},
            {"sum_us", static_cast<std::int64_t>(s.sum_us)},
            {"sumsq_us2", i128_str(s.sumsq_us2)},
        };
    };
    nlohmann::ordered_json flows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.flow_names.size(); ++i)
        flows.push_back(stat_json(report.flow_names[i], report.flow_latency[i]));
    doc["latency"] = {{"flows", flows}, {"merged", stat_json("all", report.merged_latency)}};

    const RunCounters& c = report.counters;
    doc["counters"] = {
        {"generated", c.generated},
        {"delivered", c.delivered},
        {"in_queue_at_end", c.in_queue_at_end},
        {"dropped_retry_cap", c.dropped_retry_cap},
        {"dropped_queue_overflow", c.dropped_queue_overflow},
        {"tx_attempts", c.tx_attempts},
        {"tx_lost", c.tx_lost},
        {"commands_attached", c.commands_attached},
        {"commands_applied", c.commands_applied},
        {"ignored_commands", c.ignored_commands},
    };
    return doc.dump(2) + "\n";
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    return std::nullopt;
}

const std::vector<std::string>* CsvTable::row(const std::string& first_field) const {
    for (const auto& r : rows)
        if (!r.empty() && r.front() == first_field)
            return &r;
    return nullptr;
}

std::optional<CsvTable> parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (line.back() == ',')
            fields.push_back("");
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (first)
        return std::nullopt;
    return table;
}

bool write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            return false;
        out << content;
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp, ec);
            return false;
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        return false;
    }
    return true;
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace tschsim
