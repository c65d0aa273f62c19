// Acceptance suite: exercises the full behavioral contract end to end and
// prints one pass/fail line per criterion.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "random_scenario.hpp"
#include "tschsim/cli.hpp"
#include "tschsim/oracle.hpp"
#include "tschsim/report_io.hpp"
#include "tschsim/scenario.hpp"

using namespace tschsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int n, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << n << " (" << name << "): "
              << detail << "\n";
    if (!pass)
        ++g_failures;
}

Scenario load(const std::string& name, const ScenarioOverrides& ov) {
    auto text = builtin_scenario_text(name);
    LoadResult res = load_scenario(*text, ov);
    if (!res.ok()) {
        for (const auto& e : res.errors)
            std::cerr << e << "\n";
        std::exit(2);
    }
    return *std::move(res.scenario);
}

double total_power_uw(const RunReport& rep) {
    return static_cast<double>(rep.total_energy().total_nj()) * 1000.0 /
           static_cast<double>(rep.effective_duration_us());
}

double mean_s(const LatencyStat& s) {
    return s.mean_us() / 1e6;
}

int run_cli_vec(std::vector<std::string> args, std::string& out) {
    std::vector<char*> argv;
    argv.reserve(args.size());
    for (auto& a : args)
        argv.push_back(a.data());
    std::ostringstream captured;
    auto* old = std::cout.rdbuf(captured.rdbuf());
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    out = captured.str();
    return rc;
}

// ---- criterion 1: the predict subcommand reproduces the worked estimates ----
void criterion_1(const fs::path& work) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path base = work / "baselines";
    write_file_atomic(base / "tsch" / "latency.csv",
                      "flow,mu,sigma,min,p99,p99_9,p99_99,max,n\n"
                      "tau0,1.644,1.300,0.060,5.960,8.360,11.12,18.12,5256000\n"
                      "tau1,1.731,1.413,0.040,6.440,9.500,11.90,17.96,525600\n"
                      "all,1.652,1.310,0.040,5.980,8.560,11.28,18.12,5781600\n");
    write_file_atomic(base / "pril-m" / "power.csv", "node,P_send,P_rec,P_listen,P\n"
                                                     "N0,0.0,13.8,0.4,14.2\n"
                                                     "N1,19.9,13.7,0.0,33.6\n"
                                                     "N2,18.9,0.0,0.0,18.9\n"
                                                     "N3,1.9,0.0,0.0,1.9\n"
                                                     "All,40.7,27.5,0.4,68.6\n");
    const fs::path out = work / "prediction";
    std::string stdout_text;
    const int rc = run_cli_vec({"tschsim", "predict", "fig1-pril-ml-r4", "--baselines",
                                base.string(), "--out", out.string()},
                               stdout_text);
    auto pred = read_file(out / "prediction.json");
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool pass = rc == 0 && pred.has_value() && elapsed < 1.0;
    const char* expected[] = {
        "\"p_uw\": 15.2",           "\"mu_hat_s\": 9.231",           "\"dmax_hat_s\": 32.960",
        "\"p_hat_uw\": 83.8",       "\"p_listen_hat_uw\": 15.6",     "\"mu_hat_s\": 31.731",
        "\"dmax_hat_s\": 77.960",
    };
    std::string missing;
    for (const char* e : expected)
        if (pred && pred->find(e) == std::string::npos) {
            pass = false;
            missing += std::string(" missing ") + e;
        }
    std::ostringstream detail;
    detail << "delta_P=15.2 mu_hat_ml=9.231 dmax_hat_ml=32.960 P_hat=83.8 P_listen_hat=15.6"
           << missing << " (" << elapsed << " s)";
    criterion(1, "analytic exactness", pass, detail.str());
}

// ---- criterion 2: PRIL-M eliminates idle listening exactly at zero loss ----
void criterion_2() {
    ScenarioOverrides ov;
    ov.duration_us = seconds_us(30LL * 86'400);
    ov.warmup_us = seconds_us(600);
    const RunReport rep = run(load("fig1-pril-m", ov));
    const EnergyNj n0 = rep.node_energy[0].listen_nj;
    const EnergyNj n1 = rep.node_energy[1].listen_nj;
    std::ostringstream detail;
    detail << "30 days, loss 0, 10 min warm-up: P_listen(N0)=" << n0 << " nJ, P_listen(N1)=" << n1
           << " nJ";
    criterion(2, "idle-listening elimination", n0 == 0 && n1 == 0, detail.str());
}

// ---- criteria 3 and 4: latency shifts against the analytic deltas ----
void criterion_3_4() {
    ScenarioOverrides year;
    year.duration_us = seconds_us(365LL * 86'400);
    const RunReport tsch = run(load("fig1", year));
    const RunReport m = run(load("fig1-pril-m", year));
    const RunReport ml = run(load("fig1-pril-ml-r4", year));
    const std::size_t tau1 = 1;
    const double frame_s = 2.02;

    {
        const double shift = mean_s(m.flow_latency[tau1]) - mean_s(tsch.flow_latency[tau1]);
        const double max_shift = (static_cast<double>(m.flow_latency[tau1].max_us) -
                                  static_cast<double>(tsch.flow_latency[tau1].max_us)) /
                                 1e6;
        const bool pass = shift >= 0.9 * 30.0 && shift <= 1.1 * 30.0 &&
                          max_shift <= 60.0 + 2 * frame_s;
        std::ostringstream detail;
        detail << "tau1 mean shift " << shift << " s (band [27, 33]), max shift " << max_shift
               << " s (cap " << 60.0 + 2 * frame_s << ")";
        criterion(3, "PRIL-M latency shift", pass, detail.str());
    }
    {
        const double shift = mean_s(ml.flow_latency[tau1]) - mean_s(tsch.flow_latency[tau1]);
        const double max_shift = (static_cast<double>(ml.flow_latency[tau1].max_us) -
                                  static_cast<double>(tsch.flow_latency[tau1].max_us)) /
                                 1e6;
        const bool pass = shift >= 0.85 * 7.5 && shift <= 1.15 * 7.5 &&
                          max_shift <= 15.0 + 2 * frame_s;
        std::ostringstream detail;
        detail << "tau1 mean shift " << shift << " s (band [6.375, 8.625]), max shift " << max_shift
               << " s (cap " << 15.0 + 2 * frame_s << ")";
        criterion(4, "PRIL-ML latency shift", pass, detail.str());
    }
}

// ---- criterion 5: simulated power increase stays under the bound ----
void criterion_5() {
    ScenarioOverrides month;
    month.duration_us = seconds_us(30LL * 86'400);
    const RunReport m = run(load("fig1-pril-m", month));
    const double p_m = total_power_uw(m);
    bool pass = true;
    std::ostringstream detail;
    detail.precision(4);
    for (int r : {2, 4, 8}) {
        ScenarioOverrides ov = month;
        ov.technique = "pril-ml";
        ov.r = r;
        const RunReport ml = run(load("fig1", ov));
        const double delta = total_power_uw(ml) - p_m;
        const double bound = (r - 1) * 303.3 / 60.0 + 0.2;
        pass = pass && delta > 0.0 && delta <= bound;
        detail << "r=" << r << ": dP=" << delta << " uW (bound " << bound << ") ";
    }
    criterion(5, "delta-P upper bound", pass, detail.str());
}

// ---- criterion 6: engine/oracle equivalence on randomized scenarios ----
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    int equal = 0;
    std::string first_bad;
    for (std::uint64_t c = 0; c < 100; ++c) {
        const std::string text = random_scenario_text(c);
        LoadResult res = load_scenario(text);
        if (!res.ok()) {
            first_bad = "case " + std::to_string(c) + " failed to load";
            break;
        }
        const RunReport fast = run(*res.scenario);
        const RunReport slow = oracle_run(*res.scenario, 4LL * 3600 * 1'000'000);
        if (report_json(fast) != report_json(slow) || !(fast == slow)) {
            first_bad = "case " + std::to_string(c) + " diverged";
            break;
        }
        ++equal;
    }
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream detail;
    detail << equal << "/100 byte-identical in " << elapsed << " s " << first_bad;
    criterion(6, "oracle equivalence", equal == 100 && elapsed < 300.0, detail.str());
}

// ---- criterion 7: PRIL-ML with r = 1 equals PRIL-M byte for byte ----
void criterion_7() {
    bool pass = true;
    for (std::uint64_t seed : {1ULL, 99ULL}) {
        ScenarioOverrides m;
        m.duration_us = seconds_us(30LL * 86'400);
        m.seed = seed;
        ScenarioOverrides ml = m;
        ml.technique = "pril-ml";
        ml.r = 1;
        const RunReport a = run(load("fig1-pril-m", m));
        const RunReport b = run(load("fig1", ml));
        pass = pass && report_json(a) == report_json(b) && power_csv(a) == power_csv(b) &&
               latency_csv(a) == latency_csv(b);
    }
    criterion(7, "r = 1 degeneration", pass, "seeds 1 and 99, 30 days, all output bytes equal");
}

// ---- criterion 8: a simulated decade stays fast and deterministic ----
void criterion_8() {
    ScenarioOverrides decade;
    decade.duration_us = seconds_us(10LL * 365 * 86'400);
    const Scenario sc = load("fig1", decade);
    const auto t0 = std::chrono::steady_clock::now();
    const RunReport a = run(sc);
    const double first =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const RunReport b = run(sc);
    const bool identical =
        report_json(a) == report_json(b) && power_csv(a) == power_csv(b) &&
        latency_csv(a) == latency_csv(b);
    std::ostringstream detail;
    detail << "10 years in " << first << " s, " << a.counters.delivered
           << " packets delivered, repeat run byte-identical=" << (identical ? "yes" : "no");
    criterion(8, "determinism and scale", identical && first < 300.0, detail.str());
}

// ---- criterion 9: metrics properties over randomized sample sets ----
void criterion_9() {
    std::mt19937_64 rng(1234);
    bool pass = true;
    for (int trial = 0; trial < 1000 && pass; ++trial) {
        const int flows = 1 + static_cast<int>(rng() % 4);
        std::vector<TimeUs> pooled;
        std::int64_t n_total = 0;
        __int128 sum_total = 0;
        for (int f = 0; f < flows; ++f) {
            std::vector<TimeUs> samples(1 + rng() % 400);
            for (auto& s : samples)
                s = static_cast<TimeUs>(rng() % 80'000'000);
            pooled.insert(pooled.end(), samples.begin(), samples.end());
            const LatencyStat st = latency_summary(samples);
            pass = pass && st.min_us <= st.p99_us && st.p99_us <= st.p99_9_us &&
                   st.p99_9_us <= st.p99_99_us && st.p99_99_us <= st.max_us;
            n_total += st.n;
            sum_total += st.sum_us;
        }
        const LatencyStat merged = latency_summary(pooled);
        // merged mean is the sample-count-weighted mean of the parts, exactly
        pass = pass && merged.n == n_total && merged.sum_us == sum_total;

        // energy totals are order independent
        EnergyModel model;
        std::vector<EnergyEvent> events;
        for (int i = 0; i < 200; ++i)
            events.push_back(static_cast<EnergyEvent>(rng() % 3));
        EnergyAccount fwd, rev;
        for (auto e : events)
            charge(fwd, model, e, 1);
        for (auto it = events.rbegin(); it != events.rend(); ++it)
            charge(rev, model, *it, 1);
        pass = pass && fwd == rev &&
               fwd.total_nj() == fwd.send_count * model.e_send_nj +
                                     fwd.rec_count * model.e_rec_nj +
                                     fwd.listen_count * model.e_listen_nj;
    }
    criterion(9, "metrics properties", pass, "1000 randomized sample sets");
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path work = fs::temp_directory_path() / "tschsim-acceptance";
    std::error_code ec;
    fs::remove_all(work, ec);
    fs::create_directories(work, ec);

    criterion_1(work);
    criterion_2();
    criterion_3_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (g_failures == 0 ? "all criteria passed" : "FAILURES: " + std::to_string(g_failures))
              << " (total " << elapsed << " s)\n";
    fs::remove_all(work, ec);
    return g_failures == 0 ? 0 : 1;
}
