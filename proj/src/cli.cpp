#include "tschsim/cli.hpp"

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "tschsim/analytic.hpp"
#include "tschsim/oracle.hpp"
#include "tschsim/report_io.hpp"
#include "tschsim/scenario.hpp"

namespace tschsim {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string scenario;
    std::string technique;
    int r = 0;
    std::int64_t seed = -1;
    std::string duration;
    std::string warmup;
    double loss = -1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_technique = true) {
    cmd->add_option("scenario", o.scenario,
                    "Scenario file, or a built-in name (fig1, fig1-tsch, fig1-pril-m, fig1-pril-ml-r4)")
        ->required();
    if (with_technique) {
        cmd->add_option("--technique", o.technique,
                        "Override the pril section: tsch, pril-m or pril-ml");
        cmd->add_option("--r", o.r, "Subdivision factor for pril-ml (default 4)");
    }
    cmd->add_option("--seed", o.seed, "Override the run seed");
    cmd->add_option("--duration", o.duration, "Override the run duration (e.g. 30d, 1y, 600s)");
    cmd->add_option("--warmup", o.warmup, "Override the warm-up window excluded from reports");
    cmd->add_option("--loss", o.loss, "Override the frame loss probability");
}

std::optional<Scenario> load_from_opts(const CommonOpts& o, std::ostream& err) {
    std::string text;
    if (auto builtin = builtin_scenario_text(o.scenario)) {
        text = *builtin;
    } else if (auto file = read_file(o.scenario)) {
        text = *file;
    } else {
        err << "error: no such scenario file or built-in: " << o.scenario << "\n";
        return std::nullopt;
    }

    ScenarioOverrides ov;
    if (o.seed >= 0)
        ov.seed = static_cast<std::uint64_t>(o.seed);
    if (!o.duration.empty()) {
        auto d = parse_duration_us(o.duration);
        if (!d) {
            err << "error: cannot parse --duration '" << o.duration << "'\n";
            return std::nullopt;
        }
        ov.duration_us = *d;
    }
    if (!o.warmup.empty()) {
        auto w = parse_duration_us(o.warmup);
        if (!w) {
            err << "error: cannot parse --warmup '" << o.warmup << "'\n";
            return std::nullopt;
        }
        ov.warmup_us = *w;
    }
    if (o.loss >= 0.0)
        ov.loss_probability = o.loss;
    if (!o.technique.empty())
        ov.technique = o.technique;
    if (o.r > 0)
        ov.r = o.r;

    LoadResult res = load_scenario(text, ov);
    if (!res.ok()) {
        err << "scenario '" << o.scenario << "' is invalid:\n";
        for (const auto& e : res.errors)
            err << "  " << e << "\n";
        return std::nullopt;
    }
    return std::move(res.scenario);
}

bool write_run_outputs(const fs::path& dir, const RunReport& report, std::ostream& err) {
    const std::vector<std::pair<fs::path, std::string>> files = {
        {dir / "power.csv", power_csv(report)},
        {dir / "latency.csv", latency_csv(report)},
        {dir / "report.json", report_json(report)},
    };
    std::vector<fs::path> written;
    for (const auto& [path, content] : files) {
        if (!write_file_atomic(path, content)) {
            err << "error: cannot write " << path << "\n";
            std::error_code ec;
            for (const auto& w : written)
                fs::remove(w, ec);
            return false;
        }
        written.push_back(path);
    }
    return true;
}

void print_summary(const RunReport& report, std::ostream& out) {
    const DurUs dur = report.effective_duration_us();
    out << "power (uW, over " << format_seconds(dur) << " s):\n";
    out << "  node        P_send     P_rec  P_listen         P\n";
    auto prow = [&](const std::string& name, const EnergyAccount& e) {
        out << "  " << name;
        for (std::size_t i = name.size(); i < 6; ++i)
            out << ' ';
        for (const auto& v : {e.send_nj, e.rec_nj, e.listen_nj, e.total_nj()}) {
            const std::string s = format_power_uw(v, dur);
            for (std::size_t i = s.size(); i < 10; ++i)
                out << ' ';
            out << s;
        }
        out << "\n";
    };
    for (std::size_t i = 0; i < report.node_names.size(); ++i)
        prow(report.node_names[i], report.node_energy[i]);
    prow("All", report.total_energy());

    out << "latency (s):\n";
    auto lrow = [&](const std::string& name, const LatencyStat& s) {
        out << "  " << name;
        for (std::size_t i = name.size(); i < 6; ++i)
            out << ' ';
        if (s.n == 0) {
            out << "  (no samples)\n";
            return;
        }
        out << "  mu=" << format_fixed(s.sum_us, static_cast<__int128>(s.n) * kUsPerSecond, 3)
            << "  min=" << format_seconds(s.min_us) << "  p99=" << format_seconds(s.p99_us)
            << "  max=" << format_seconds(s.max_us) << "  n=" << s.n << "\n";
    };
    for (std::size_t i = 0; i < report.flow_names.size(); ++i)
        lrow(report.flow_names[i], report.flow_latency[i]);
    lrow("all", report.merged_latency);

    const RunCounters& c = report.counters;
    out << "packets: generated=" << c.generated << " delivered=" << c.delivered
        << " queued=" << c.in_queue_at_end << " dropped=" << c.dropped_retry_cap + c.dropped_queue_overflow
        << "\n";
}

int cmd_run(const CommonOpts& o, const std::string& out_dir, bool use_oracle) {
    auto sc = load_from_opts(o, std::cerr);
    if (!sc)
        return 1;
    RunReport report;
    if (use_oracle) {
        try {
            report = oracle_run(*sc);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    } else {
        report = run(*sc);
    }
    if (!write_run_outputs(out_dir, report, std::cerr))
        return 1;
    print_summary(report, std::cout);
    std::cout << "reports written to " << out_dir << "\n";
    return 0;
}

Ratio seconds_ratio_to_us(const Ratio& seconds) {
    return Ratio{seconds.num * kUsPerSecond, seconds.den};
}

struct PredictTarget {
    Link link;
    int flow = -1;
    DurUs t_min_us = 0;
    int r = 4;
};

std::optional<PredictTarget> pick_predict_target(const Scenario& sc, const std::string& flow_override,
                                                 int r_override, std::ostream& err) {
    PredictTarget t;
    const ScenarioLink* target_link = nullptr;
    for (const auto& sl : sc.links)
        if (sl.pril.active()) {
            target_link = &sl;
            break;
        }
    if (!target_link) {
        // plain-TSCH scenario: predict for the relay link
        for (const auto& sl : sc.links)
            if (!sl.flows_through.empty() && !sl.first_hop_for_all) {
                target_link = &sl;
                break;
            }
    }
    if (!target_link) {
        err << "error: no multi-hop link to predict for\n";
        return std::nullopt;
    }
    t.link = target_link->link;
    t.t_min_us = t_min(sc.flows, target_link->flows_through).t_min_us;
    if (target_link->pril.technique == PrilTechnique::PrilMl)
        t.r = target_link->pril.r;
    if (r_override > 0)
        t.r = r_override;

    for (int fi : target_link->flows_through) {
        const Flow& f = sc.flows[static_cast<std::size_t>(fi)];
        if (!flow_override.empty()) {
            if (f.name == flow_override)
                t.flow = fi;
        } else if (t.flow < 0 ||
                   f.nominal_period_us >
                       sc.flows[static_cast<std::size_t>(t.flow)].nominal_period_us) {
            t.flow = fi; // default: the slowest flow crossing the link
        }
    }
    if (t.flow < 0) {
        err << "error: flow '" << flow_override << "' does not cross link "
            << sc.node_names[t.link.from] << "->" << sc.node_names[t.link.to] << "\n";
        return std::nullopt;
    }
    return t;
}

int cmd_predict(const CommonOpts& o, const std::string& baselines, const std::string& flow_override,
                const std::string& out_dir) {
    auto sc = load_from_opts(o, std::cerr);
    if (!sc)
        return 1;
    auto target = pick_predict_target(*sc, flow_override, o.r, std::cerr);
    if (!target)
        return 1;

    const fs::path base(baselines);
    auto latency_text = read_file(base / "tsch" / "latency.csv");
    auto power_text = read_file(base / "pril-m" / "power.csv");
    if (!latency_text || !power_text) {
        std::cerr << "error: baselines need " << (base / "tsch" / "latency.csv") << " and "
                  << (base / "pril-m" / "power.csv") << "\n";
        return 1;
    }
    auto latency = parse_csv(*latency_text);
    auto power = parse_csv(*power_text);
    if (!latency || !power) {
        std::cerr << "error: cannot parse baseline CSV files\n";
        return 1;
    }

    const std::string flow_name = sc->flows[static_cast<std::size_t>(target->flow)].name;
    const auto* lrow = latency->row(flow_name);
    const auto* prow = power->row("All");
    const auto mu_col = latency->column("mu");
    const auto max_col = latency->column("max");
    const auto p_col = power->column("P");
    const auto pl_col = power->column("P_listen");
    if (!lrow || !prow || !mu_col || !max_col || !p_col || !pl_col) {
        std::cerr << "error: baseline CSVs lack flow '" << flow_name << "' or the All power row\n";
        return 1;
    }

    Baselines b;
    Ratio mu_s, max_s;
    if (!parse_decimal((*lrow)[*mu_col], mu_s) || !parse_decimal((*lrow)[*max_col], max_s) ||
        !parse_decimal((*prow)[*p_col], b.pril_m_p_uw) ||
        !parse_decimal((*prow)[*pl_col], b.pril_m_p_listen_uw)) {
        std::cerr << "error: baseline values are not plain decimals\n";
        return 1;
    }
    b.tsch_mean_us = seconds_ratio_to_us(mu_s);
    b.tsch_max_us = seconds_ratio_to_us(max_s);

    const AnalyticPrediction p =
        compose_predictions(b, target->t_min_us, target->r, sc->frame.slot_us, sc->energy.e_listen_nj);

    auto s3 = [](const Ratio& us) { return Ratio{us.num, us.den * kUsPerSecond}.fixed(3); };
    std::cout << "analytic prediction for flow " << flow_name << " over link "
              << sc->node_names[target->link.from] << "->" << sc->node_names[target->link.to]
              << " (T_min = " << format_seconds(p.t_min_us) << " s, r = " << p.r << ")\n";
    std::cout << "                     PRIL-M    PRIL-ML\n";
    auto line = [&](const char* label, const std::string& m, const std::string& ml) {
        std::cout << label;
        for (std::size_t i = std::string(label).size(); i < 18; ++i)
            std::cout << ' ';
        std::cout << (m.empty() ? std::string(9, ' ') : std::string(9 - std::min<std::size_t>(9, m.size()), ' ') + m);
        std::cout << "  ";
        std::cout << std::string(9 - std::min<std::size_t>(9, ml.size()), ' ') + ml << "\n";
    };
    line("delta_mu [s]", s3(p.pril_m.mean_us), s3(p.pril_ml.mean_us));
    line("delta_max [s]", s3(p.pril_m.max_us), s3(p.pril_ml.max_us));
    line("mu_hat [s]", s3(p.mu_hat_m_us), s3(p.mu_hat_ml_us));
    line("dmax_hat [s]", s3(p.dmax_hat_m_us), s3(p.dmax_hat_ml_us));
    line("delta_P [uW]", "", p.delta_p.fixed(1));
    line("P_hat [uW]", "", p.p_hat_uw.fixed(1));
    line("P_listen_hat [uW]", "", p.p_listen_hat_uw.fixed(1));

    if (!out_dir.empty()) {
        std::ostringstream js;
        js << "{\n"
           << "  \"flow\": \"" << flow_name << "\",\n"
           << "  \"t_min_s\": " << format_seconds(target->t_min_us) << ",\n"
           << "  \"r\": " << target->r << ",\n"
           << "  \"delta\": {\n"
           << "    \"pril_m\": {\"mu_s\": " << s3(p.pril_m.mean_us) << ", \"max_s\": "
           << s3(p.pril_m.max_us) << "},\n"
           << "    \"pril_ml\": {\"mu_s\": " << s3(p.pril_ml.mean_us) << ", \"max_s\": "
           << s3(p.pril_ml.max_us) << "},\n"
           << "    \"p_uw\": " << p.delta_p.fixed(1) << "\n"
           << "  },\n"
           << "  \"composed\": {\n"
           << "    \"pril_m\": {\"mu_hat_s\": " << s3(p.mu_hat_m_us) << ", \"dmax_hat_s\": "
           << s3(p.dmax_hat_m_us) << "},\n"
           << "    \"pril_ml\": {\"mu_hat_s\": " << s3(p.mu_hat_ml_us) << ", \"dmax_hat_s\": "
           << s3(p.dmax_hat_ml_us) << "},\n"
           << "    \"p_hat_uw\": " << p.p_hat_uw.fixed(1) << ",\n"
           << "    \"p_listen_hat_uw\": " << p.p_listen_hat_uw.fixed(1) << "\n"
           << "  }\n"
           << "}\n";
        if (!write_file_atomic(fs::path(out_dir) / "prediction.json", js.str())) {
            std::cerr << "error: cannot write prediction.json\n";
            return 1;
        }
    }
    return 0;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b) {
    std::cout << "file,row,column,a,b,delta\n";
    bool any = false;
    for (const char* name : {"power.csv", "latency.csv"}) {
        auto ta = read_file(fs::path(dir_a) / name);
        auto tb = read_file(fs::path(dir_b) / name);
        if (!ta || !tb)
            continue;
        auto a = parse_csv(*ta);
        auto b = parse_csv(*tb);
        if (!a || !b)
            continue;
        any = true;
        for (const auto& row_a : a->rows) {
            if (row_a.empty())
                continue;
            const auto* row_b = b->row(row_a.front());
            if (!row_b)
                continue;
            for (std::size_t col = 1; col < a->header.size() && col < row_a.size() &&
                                      col < row_b->size();
                 ++col) {
                Ratio va, vb;
                if (!parse_decimal(row_a[col], va) || !parse_decimal((*row_b)[col], vb))
                    continue;
                const double delta = vb.to_double() - va.to_double();
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6g", delta);
                std::cout << name << ',' << row_a.front() << ',' << a->header[col] << ','
                          << row_a[col] << ',' << (*row_b)[col] << ',' << buf << "\n";
            }
        }
    }
    if (!any) {
        std::cerr << "error: no comparable report files in " << dir_a << " and " << dir_b << "\n";
        return 1;
    }
    return 0;
}

std::optional<std::vector<int>> parse_r_list(const std::string& spec) {
    std::vector<int> rs;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t next = spec.find(',', pos);
        if (next == std::string::npos)
            next = spec.size();
        const std::string item = spec.substr(pos, next - pos);
        const std::size_t dots = item.find("..");
        try {
            if (dots != std::string::npos) {
                const int lo = std::stoi(item.substr(0, dots));
                const int hi = std::stoi(item.substr(dots + 2));
                if (lo < 1 || hi < lo)
                    return std::nullopt;
                for (int r = lo; r <= hi; ++r)
                    rs.push_back(r);
            } else {
                const int r = std::stoi(item);
                if (r < 1)
                    return std::nullopt;
                rs.push_back(r);
            }
        } catch (...) {
            return std::nullopt;
        }
        pos = next + 1;
    }
    if (rs.empty())
        return std::nullopt;
    return rs;
}

int cmd_sweep(const CommonOpts& base_opts, const std::string& r_spec, const std::string& out_file) {
    auto rs = parse_r_list(r_spec);
    if (!rs) {
        std::cerr << "error: cannot parse --r list '" << r_spec << "' (use e.g. 1..8 or 1,2,4)\n";
        return 1;
    }
    std::ostringstream os;
    bool header_done = false;
    for (int r : *rs) {
        CommonOpts o = base_opts;
        o.technique = "pril-ml";
        o.r = r;
        auto sc = load_from_opts(o, std::cerr);
        if (!sc)
            return 1;
        const RunReport rep = run(*sc);
        if (!header_done) {
            os << "r";
            for (const auto& f : rep.flow_names)
                os << ',' << f << "_mu" << ',' << f << "_max";
            os << ",P,P_listen\n";
            header_done = true;
        }
        os << r;
        for (const auto& s : rep.flow_latency) {
            if (s.n == 0) {
                os << ",,";
                continue;
            }
            os << ',' << format_fixed(s.sum_us, static_cast<__int128>(s.n) * kUsPerSecond, 3) << ','
               << format_seconds(s.max_us);
        }
        const EnergyAccount total = rep.total_energy();
        os << ',' << format_power_uw(total.total_nj(), rep.effective_duration_us()) << ','
           << format_power_uw(total.listen_nj, rep.effective_duration_us()) << "\n";
    }
    if (out_file.empty()) {
        std::cout << os.str();
    } else if (!write_file_atomic(out_file, os.str())) {
        std::cerr << "error: cannot write " << out_file << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"TSCH network simulator with PRIL-F/M/ML idle-listening reduction"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string run_out = "out";
    CLI::App* run_cmd = app.add_subcommand("run", "Simulate a scenario and write report files");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--out", run_out, "Output directory (power.csv, latency.csv, report.json)");

    CommonOpts oracle_opts;
    std::string oracle_out = "out-oracle";
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "Run the slot-by-slot reference interpreter (short horizons only)");
    add_common(oracle_cmd, oracle_opts);
    oracle_cmd->add_option("--out", oracle_out, "Output directory");

    CommonOpts predict_opts;
    std::string baselines;
    std::string predict_flow;
    std::string predict_out;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Analytic PRIL-M / PRIL-ML estimates from measured baselines");
    add_common(predict_cmd, predict_opts);
    predict_cmd->add_option("--baselines", baselines,
                            "Directory holding tsch/latency.csv and pril-m/power.csv")
        ->required();
    predict_cmd->add_option("--flow", predict_flow, "Flow to predict for (default: slowest on the link)");
    predict_cmd->add_option("--out", predict_out, "Directory for prediction.json");

    std::string cmp_a, cmp_b;
    CLI::App* compare_cmd = app.add_subcommand("compare", "Per-metric deltas between two run directories");
    compare_cmd->add_option("dir-a", cmp_a)->required();
    compare_cmd->add_option("dir-b", cmp_b)->required();

    CommonOpts sweep_opts;
    std::string sweep_r = "1..8";
    std::string sweep_out;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run PRIL-ML for a range of r values");
    add_common(sweep_cmd, sweep_opts, false);
    sweep_cmd->add_option("--r", sweep_r, "r values, e.g. 1..8 or 1,2,4");
    sweep_cmd->add_option("--out", sweep_out, "CSV output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (run_cmd->parsed())
        return cmd_run(run_opts, run_out, false);
    if (oracle_cmd->parsed())
        return cmd_run(oracle_opts, oracle_out, true);
    if (predict_cmd->parsed())
        return cmd_predict(predict_opts, baselines, predict_flow, predict_out);
    if (compare_cmd->parsed())
        return cmd_compare(cmp_a, cmp_b);
    if (sweep_cmd->parsed())
        return cmd_sweep(sweep_opts, sweep_r, sweep_out);
    return 1;
}

} // namespace tschsim
