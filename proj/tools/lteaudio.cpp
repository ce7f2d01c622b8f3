#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lteaudio/analytics.hpp"
#include "lteaudio/champions.hpp"
#include "lteaudio/csv.hpp"
#include "lteaudio/runtime.hpp"
#include "lteaudio/transceiver.hpp"
#include "lteaudio/wav.hpp"
#include "lteaudio/waveform.hpp"

using namespace lteaudio;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Input the user can fix: bad flags, files, schemas.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    bool verbose = false;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw UsageError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

ParamMap parse_sets(const std::vector<std::string>& sets) {
    ParamMap out;
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
        out[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return out;
}

std::string fmt_number(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.6g}", v);
}

const char* kReportHeader = "snr_db,ber,bler,evm_db,throughput_bps,bits,blocks";

std::string report_row(const LinkReport& r) {
    const auto snr = r.snr_db ? fmt_number(*r.snr_db) : std::string();
    const auto ber = r.bits_total ? fmt_number(r.ber()) : std::string();
    const auto bler = r.blocks_total ? fmt_number(r.bler()) : std::string();
    const auto evm = r.evm_reference_energy > 0.0 ? fmt_number(r.evm_db()) : std::string();
    return fmt::format("{},{},{},{},{},{},{}", snr, ber, bler, evm, fmt_number(r.throughput_bps()), r.bits_total,
                       r.blocks_total);
}

void log_report(const Globals& g, const LinkReport& r) {
    if (!g.verbose) return;
    fmt::print(stderr, "bits {} errors {} | blocks {} failed {} | raw bits {} errors {} | lost subframes {} | {:.3f} s\n",
               r.bits_total, r.bit_errors, r.blocks_total, r.blocks_failed, r.raw_bits_total, r.raw_bit_errors,
               r.lost_subframes, r.duration_s);
}

WaveformGraph load_graph(const std::string& path) {
    if (!std::ifstream(path)) throw UsageError("cannot open waveform file " + path);
    return load_waveform(path);
}

LinkReport run_waveform(const WaveformGraph& graph, const Globals& g, int subframes, std::optional<double> snr,
                        const ParamMap& overrides) {
    RunConfig cfg;
    cfg.seed = g.seed;
    cfg.n_subframes = subframes;
    cfg.snr_db = snr;
    cfg.overrides = overrides;
    return run(graph, cfg);
}

struct SimulateArgs {
    std::string waveform;
    int subframes = 100;
    std::optional<double> snr;
    std::vector<std::string> sets;
    std::string out;
};

void cmd_simulate(const Globals& g, const SimulateArgs& a) {
    if (a.subframes < 1) throw UsageError("--subframes must be >= 1");
    const auto graph = load_graph(a.waveform);
    const auto report = run_waveform(graph, g, a.subframes, a.snr, parse_sets(a.sets));
    log_report(g, report);
    Output out(a.out);
    out.stream() << kReportHeader << '\n' << report_row(report) << '\n';
}

struct SweepArgs {
    std::string waveform;
    double from = 0.0;
    double to = 10.0;
    double step = 1.0;
    int subframes = 100;
    int jobs = 1;
    std::vector<std::string> sets;
    std::string out;
};

void cmd_sweep(const Globals& g, const SweepArgs& a) {
    if (!(a.step > 0.0)) throw UsageError("--snr-step must be positive");
    if (a.from > a.to) throw UsageError("--snr-from must not exceed --snr-to");
    if (a.subframes < 1) throw UsageError("--subframes must be >= 1");
    if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
    const auto graph = load_graph(a.waveform);
    const auto overrides = parse_sets(a.sets);
    const int points = static_cast<int>(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;

    std::vector<LinkReport> reports(static_cast<std::size_t>(points));
    for (int first = 0; first < points; first += a.jobs) {
        std::vector<std::future<LinkReport>> batch;
        for (int i = first; i < std::min(points, first + a.jobs); ++i) {
            const double snr = a.from + i * a.step;
            batch.push_back(std::async(std::launch::async,
                                       [&, snr] { return run_waveform(graph, g, a.subframes, snr, overrides); }));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) reports[first + k] = batch[k].get();
    }
    Output out(a.out);
    out.stream() << kReportHeader << '\n';
    for (const auto& r : reports) {
        log_report(g, r);
        out.stream() << report_row(r) << '\n';
    }
}

struct LinkArgs {
    std::uint64_t payload_seed = 1;
    int frames = 1;
    int mcs = 0;
    int nid2 = 0;
    std::string path;
    std::string out;
};

LinkSetup link_setup(const LinkArgs& a) {
    LinkSetup s;
    s.payload_seed = a.payload_seed;
    s.frames = a.frames;
    s.mcs = a.mcs;
    s.nid2 = a.nid2;
    if (s.frames < 1) throw UsageError("--frames must be >= 1");
    if (s.mcs < 0 || s.mcs >= static_cast<int>(s.mcs_table.size())) {
        throw UsageError(fmt::format("--mcs must be in [0, {}]", s.mcs_table.size() - 1));
    }
    if (s.nid2 < 0 || s.nid2 > 2) throw UsageError("--nid2 must be 0, 1 or 2");
    return s;
}

void cmd_txwav(const Globals& g, const LinkArgs& a) {
    const auto setup = link_setup(a);
    const auto tx = transmit(setup);
    wav_write(tx.audio, a.path, static_cast<int>(setup.numerology.fs_audio));
    if (g.verbose) {
        fmt::print(stderr, "{} subframes, {} samples ({:.3f} s)\n", tx.subframes, tx.audio.size(),
                   tx.audio.size() / setup.numerology.fs_audio);
    }
}

void cmd_rxwav(const Globals& g, const LinkArgs& a) {
    const auto setup = link_setup(a);
    RealVec audio;
    try {
        audio = wav_read(a.path, static_cast<int>(setup.numerology.fs_audio));
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    const auto rx = receive(audio, setup);
    if (g.verbose) {
        fmt::print(stderr, "PSS nid2 {} metric {:.3f}, frame start {}\n", rx.detection.nid2, rx.detection.metric,
                   rx.frame_start);
    }
    log_report(g, rx.report);
    Output out(a.out);
    out.stream() << kReportHeader << '\n' << report_row(rx.report) << '\n';
}

struct QualifyArgs {
    std::string waveform = std::string(LTEAUDIO_WAVEFORM_DIR) + "/full_awgn.app";
    std::vector<std::string> sets;
    std::string out;
};

constexpr double kQualificationSnrDb = 10.0;
constexpr int kQualificationSubframes = 100;

void cmd_qualify(const Globals& g, const QualifyArgs& a) {
    const auto graph = load_graph(a.waveform);
    const auto report = run_waveform(graph, g, kQualificationSubframes, kQualificationSnrDb, parse_sets(a.sets));
    log_report(g, report);
    if (report.bits_total == 0) throw std::runtime_error("waveform produced no bit comparisons");
    Output out(a.out);
    out.stream() << "snr_db,subframes,ber,bler,mark\n"
                 << fmt::format("{},{},{},{},{:.1f}\n", fmt_number(kQualificationSnrDb), kQualificationSubframes,
                                fmt_number(report.ber()), report.blocks_total ? fmt_number(report.bler()) : "",
                                qualification_mark(report.ber()));
}

struct BracketArgs {
    std::string results;
    double alpha = 0.5;
    double beta = 0.5;
    std::string tree;
    std::string out;
};

RoundResults load_results(const std::string& path) {
    CsvTable t = [&] {
        try {
            return CsvTable::load(path);
        } catch (const std::exception& e) {
            throw UsageError(fmt::format("{}: {}", path, e.what()));
        }
    }();
    RoundResults results;
    try {
        const auto c_team = t.column("team_id");
        const auto c_round = t.column("round");
        const auto c_medium = t.column("medium");
        const auto c_ber = t.column("ber");
        const auto c_snr = t.column("snr_db");
        const auto c_dist = t.column("distance_m");
        const auto c_tp = t.column("throughput_bps");
        for (std::size_t r = 0; r < t.rows(); ++r) {
            try {
                ScenarioResult s;
                s.team_id = t.at(r, c_team);
                s.medium = parse_medium(t.at(r, c_medium));
                auto ber = parse_optional_number(t.at(r, c_ber));
                auto round = parse_optional_number(t.at(r, c_round));
                if (!ber || !round || *round < 0 || *round != std::floor(*round)) {
                    throw std::invalid_argument("round and ber are required");
                }
                s.ber = *ber;
                s.snr_db = parse_optional_number(t.at(r, c_snr));
                s.distance_m = parse_optional_number(t.at(r, c_dist));
                s.throughput_bps = parse_optional_number(t.at(r, c_tp)).value_or(0.0);
                s.validate();
                if (!results[static_cast<int>(*round)].emplace(s.team_id, s).second) {
                    throw std::invalid_argument(fmt::format("duplicate result for team {}", s.team_id));
                }
            } catch (const std::invalid_argument& e) {
                throw UsageError(fmt::format("{} line {}: {}", path, t.line(r), e.what()));
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(fmt::format("{}: {}", path, e.what()));
    }
    return results;
}

void cmd_bracket(const Globals&, const BracketArgs& a) {
    const auto results = load_results(a.results);
    const int n_teams = results.count(0) ? static_cast<int>(results.at(0).size()) : 0;
    BracketOutcome outcome;
    try {
        outcome = run_bracket(results, n_teams);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.alpha < 0.0 || a.beta < 0.0) throw UsageError("--alpha and --beta must be non-negative");
    Output out(a.out);
    out.stream() << "team_id,placement,ps,cs,final_mark\n";
    bool warned = false;
    for (const auto& s : outcome.standings) {
        const double cs = champions_score(s.placement, n_teams);
        const auto mark = final_mark(cs, s.ps, a.alpha, a.beta);
        if (mark.warning && !warned) {
            fmt::print(stderr, "warning: {}\n", *mark.warning);
            warned = true;
        }
        out.stream() << fmt::format("{},{},{},{},{}\n", s.team_id, s.placement.rank, fmt_number(s.ps), fmt_number(cs),
                                    fmt_number(mark.mark));
    }
    if (!a.tree.empty()) {
        Output tree(a.tree);
        tree.stream() << bracket_tree(outcome);
    }
}

struct AnalyzeArgs {
    std::string grades;
    int bins = 10;
    bool matrix = false;
    std::string histogram;
    std::string out;
};

void write_analysis(const AnalyzeArgs& a);

void cmd_analyze(const Globals&, const AnalyzeArgs& a) {
    try {
        write_analysis(a);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void write_analysis(const AnalyzeArgs& a) {
    if (a.bins < 1) throw UsageError("--bins must be >= 1");
    std::vector<GradeRecord> records;
    try {
        records = load_grades(a.grades);
    } catch (const std::exception& e) {
        throw UsageError(fmt::format("{}: {}", a.grades, e.what()));
    }
    Output out(a.out);
    auto& os = out.stream();
    if (a.matrix) {
        const std::vector<std::string> fields{"ex1", "ex2", "ex_aver", "lab1", "lab2", "lab3"};
        os << "field";
        for (const auto& f : fields) os << ',' << f;
        os << '\n';
        for (const auto& row : fields) {
            os << row;
            for (const auto& col : fields) {
                os << ',';
                try {
                    os << fmt_number(correlation_table(records, {{row, col}}).front().r);
                } catch (const std::invalid_argument&) {
                } catch (const std::domain_error&) {
                }
            }
            os << '\n';
        }
    } else {
        os << "x,y,n,r,slope,offset\n";
        for (const auto& e : correlation_table(records, default_grade_pairs())) {
            os << fmt::format("{},{},{},{},{},{}\n", e.x, e.y, e.n, fmt_number(e.r), fmt_number(e.fit.slope),
                              fmt_number(e.fit.offset));
        }
    }

    const auto impacts = impact_values(records);
    const auto fit = normal_fit(impacts, a.bins);
    Output hist_file(a.histogram);
    auto& hs = a.histogram.empty() ? os : hist_file.stream();
    if (a.histogram.empty()) hs << '\n';
    hs << "bin_lo,bin_hi,count,fit_mean,fit_std\n";
    for (std::size_t i = 0; i < fit.histogram.counts.size(); ++i) {
        hs << fmt::format("{},{},{},{},{}\n", fmt_number(fit.histogram.edges[i]), fmt_number(fit.histogram.edges[i + 1]),
                          fit.histogram.counts[i], fmt_number(fit.mean), fmt_number(fit.stddev));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LTE downlink over an audio channel: simulation, WAV link and competition scoring"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Run seed")->capture_default_str();
    app.add_flag("-v,--verbose", g.verbose, "Diagnostics on stderr");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a waveform once and print one report row");
    simulate->add_option("--waveform", sim.waveform, "Waveform description file")->required();
    simulate->add_option("--subframes", sim.subframes, "Subframes to run")->capture_default_str();
    simulate->add_option("--snr", sim.snr, "SNR in dB for every AWGN channel");
    simulate->add_option("--set", sim.sets, "Parameter override key=value or module.key=value");
    simulate->add_option("--out", sim.out, "Output CSV (default stdout)");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Run a waveform over an SNR range");
    sweep->add_option("--waveform", sw.waveform, "Waveform description file")->required();
    sweep->add_option("--snr-from", sw.from, "First SNR in dB")->capture_default_str();
    sweep->add_option("--snr-to", sw.to, "Last SNR in dB")->capture_default_str();
    sweep->add_option("--snr-step", sw.step, "SNR step in dB")->capture_default_str();
    sweep->add_option("--subframes", sw.subframes, "Subframes per point")->capture_default_str();
    sweep->add_option("--jobs", sw.jobs, "Points evaluated in parallel")->capture_default_str();
    sweep->add_option("--set", sw.sets, "Parameter override key=value or module.key=value");
    sweep->add_option("--out", sw.out, "Output CSV (default stdout)");

    LinkArgs tx;
    auto* txwav = app.add_subcommand("txwav", "Write a coded transmission to a WAV file");
    txwav->add_option("--payload-seed", tx.payload_seed, "PRBS payload seed")->capture_default_str();
    txwav->add_option("--frames", tx.frames, "Radio frames to send")->capture_default_str();
    txwav->add_option("--mcs", tx.mcs, "MCS index")->capture_default_str();
    txwav->add_option("--nid2", tx.nid2, "PSS sequence index")->capture_default_str();
    txwav->add_option("--out", tx.path, "WAV file to write")->required();

    LinkArgs rx;
    auto* rxwav = app.add_subcommand("rxwav", "Receive a WAV file and report against the regenerated payload");
    rxwav->add_option("--in", rx.path, "WAV file to read")->required();
    rxwav->add_option("--payload-seed", rx.payload_seed, "PRBS payload seed")->capture_default_str();
    rxwav->add_option("--frames", rx.frames, "Radio frames expected")->capture_default_str();
    rxwav->add_option("--mcs", rx.mcs, "MCS index")->capture_default_str();
    rxwav->add_option("--out", rx.out, "Output CSV (default stdout)");

    QualifyArgs q;
    auto* qualify = app.add_subcommand("qualify", "Qualification run: AWGN 10 dB, 100 subframes");
    qualify->add_option("--waveform", q.waveform, "Waveform description file")->capture_default_str();
    qualify->add_option("--set", q.sets, "Parameter override key=value or module.key=value");
    qualify->add_option("--out", q.out, "Output CSV (default stdout)");

    BracketArgs br;
    auto* bracket = app.add_subcommand("bracket", "Playoff standings from per-round results");
    bracket->add_option("--results", br.results, "Results CSV")->required();
    bracket->add_option("--alpha", br.alpha, "Weight of the champions score")->capture_default_str();
    bracket->add_option("--beta", br.beta, "Weight of the performance score")->capture_default_str();
    bracket->add_option("--tree", br.tree, "Write the match tree as text to this file ('-' for stdout)");
    bracket->add_option("--out", br.out, "Output CSV (default stdout)");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Grade correlations and impact histogram");
    analyze->add_option("--grades", an.grades, "Grades CSV")->required();
    analyze->add_option("--bins", an.bins, "Histogram bins")->capture_default_str();
    analyze->add_flag("--matrix", an.matrix, "Full correlation matrix instead of the pair list");
    analyze->add_option("--histogram", an.histogram, "Write the impact histogram to this file");
    analyze->add_option("--out", an.out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*simulate) cmd_simulate(g, sim);
        if (*sweep) cmd_sweep(g, sw);
        if (*txwav) cmd_txwav(g, tx);
        if (*rxwav) cmd_rxwav(g, rx);
        if (*qualify) cmd_qualify(g, q);
        if (*bracket) cmd_bracket(g, br);
        if (*analyze) cmd_analyze(g, an);
    } catch (const ParseError& e) {
        fmt::print(stderr, "error: waveform line {}, column {}: {}\n", e.line(), e.column(), e.message());
        return kExitUsage;
    } catch (const ValidationError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const UsageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
