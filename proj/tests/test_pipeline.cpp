#include <doctest.h>

#include <set>

#include "lteaudio/numerology.hpp"
#include "lteaudio/qpp.hpp"
#include "lteaudio/registry.hpp"
#include "lteaudio/runtime.hpp"
#include "lteaudio/waveform.hpp"
#include "oracles.hpp"

using namespace lteaudio;

namespace {

WaveformGraph golden(const std::string& name) {
    return load_waveform(std::string(LTEAUDIO_WAVEFORM_DIR) + "/" + name + ".app");
}

ParseError parse_error(std::string_view text) {
    try {
        parse_waveform(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error for:\n" << text);
    return ParseError(0, 0, "");
}

// Kahn order that prefers the most recently declared ready module.
std::vector<std::string> reverse_tie_order(const WaveformGraph& g) {
    std::map<std::string, int> indegree;
    for (const auto& m : g.modules) indegree[m.name] = 0;
    for (const auto& c : g.connections) ++indegree[c.to.module];
    std::vector<std::string> order;
    std::set<std::string> done;
    while (order.size() < g.modules.size()) {
        for (auto it = g.modules.rbegin(); it != g.modules.rend(); ++it) {
            if (done.count(it->name) || indegree[it->name] != 0) continue;
            order.push_back(it->name);
            done.insert(it->name);
            for (const auto& c : g.connections) {
                if (c.from.module == it->name) --indegree[c.to.module];
            }
            break;
        }
    }
    return order;
}

// Es/N0 on the PDSCH cells relative to the time-domain burst SNR: the noise
// spreads over all FFT bins, the signal over the active ones.
double burst_snr_for_esn0(double esn0_db) {
    const auto& num = default_numerology();
    return esn0_db - 10 * std::log10(static_cast<double>(num.n_fft) / num.n_active_sc);
}

// Payload bits per coded bit averaged over a frame, for the tb payload.
double coded_rate(int mcs_index) {
    const auto& num = default_numerology();
    const auto& mcs = default_mcs_table().at(mcs_index);
    double payload = 0, coded = 0;
    for (int sf = 0; sf < 10; ++sf) {
        const int E = coded_bits_per_subframe(num, mcs, sf);
        payload += select_code_block(E, mcs.target_rate, default_qpp_table()) - kCrcLength;
        coded += E;
    }
    return payload / coded;
}

class FailAt : public Module {
public:
    FailAt(const ModuleSetup& s) : ctx_(s.context), tick_(s.params.integer("tick")) {}
    void process(PortPackets&, PortPackets&) override {
        if (ctx_->tick == tick_) throw std::runtime_error("deliberate failure");
    }

private:
    RunContext* ctx_;
    long long tick_;
};

}  // namespace

TEST_CASE("parse a minimal graph") {
    const auto g = parse_waveform(R"(
# two modules
[modules]
src: data_source { payload = raw , mcs=0 }
snk : data_sink{}

[connections]
src.out->snk.in   # trailing comment
)");
    REQUIRE(g.modules.size() == 2);
    REQUIRE(g.connections.size() == 1);
    CHECK(g.modules[0].name == "src");
    CHECK(g.modules[0].type == "data_source");
    CHECK(g.modules[0].params.at("payload") == "raw");
    CHECK(g.modules[0].params.at("mcs") == "0");
    CHECK(g.modules[0].line == 4);
    CHECK(g.connections[0].from.str() == "src.out");
    CHECK(g.connections[0].to.str() == "snk.in");
    CHECK(g.topological_order() == std::vector<std::string>{"src", "snk"});

    const auto q = parse_waveform("[modules]\nw: wav_out { path = \"a # b.wav\", gain = 0.5 }\n");
    CHECK(q.modules[0].params.at("path") == "a # b.wav");
}

TEST_CASE("parse errors carry positions") {
    auto e = parse_error("[modules]\nsrc: data_source {}\nx: nosuchtype {}\n");
    CHECK(e.line() == 3);
    CHECK(e.column() >= 1);
    CHECK(e.message().find("unknown module type") != std::string::npos);

    e = parse_error("[modules]\na: channel_ideal {}\nb: channel_ideal {}\n[connections]\na.out -> b.in\nb.out -> a.in\n");
    CHECK(e.message().find("cycle detected") != std::string::npos);
    CHECK(e.message().find("a") != std::string::npos);
    CHECK(e.message().find("b") != std::string::npos);

    e = parse_error("[modules]\na: data_source {}\na: data_source {}\n");
    CHECK(e.line() == 3);
    CHECK(e.message().find("duplicate") != std::string::npos);

    e = parse_error("[stuff]\n");
    CHECK(e.line() == 1);
    CHECK(e.message().find("unknown section") != std::string::npos);

    e = parse_error("a: data_source {}\n");
    CHECK(e.line() == 1);

    e = parse_error("[modules]\na: data_source { mcs = }\n");
    CHECK(e.line() == 2);

    e = parse_error("[modules]\na: data_source {}\n[connections]\na.out -> ghost.in\n");
    CHECK(e.line() == 4);
    CHECK(e.message().find("ghost") != std::string::npos);

    e = parse_error("[modules]\na: data_source {}\n[connections]\na.out => b.in\n");
    CHECK(e.line() == 4);

    CHECK_THROWS(load_waveform("/nonexistent/file.app"));
}

TEST_CASE("validation diagnostics") {
    for (const char* name : {"step0_ideal", "step0_awgn", "step1_awgn", "full_awgn", "full_wav"}) {
        CAPTURE(name);
        CHECK(validate(golden(name), builtin_registry()).empty());
    }

    const char* missing_snr = R"([modules]
src: data_source { payload = raw }
mod: modulator {}
map: grid_map {}
tx: ofdm_mod {}
ch: channel_awgn {}
rx: ofdm_demod {}
dm: grid_demap {}
hd: demod_hard {}
snk: data_sink {}
[connections]
src.out -> mod.in
mod.out -> map.in
map.out -> tx.in
tx.out -> ch.in
ch.out -> rx.in
rx.out -> dm.in
dm.out -> hd.in
hd.out -> snk.in
src.out -> snk.ref
)";
    const auto g = parse_waveform(missing_snr);
    auto d = validate(g, builtin_registry());
    REQUIRE(d.size() == 1);
    CHECK(d[0].module == "ch");
    CHECK(d[0].message.find("snr_db") != std::string::npos);
    CHECK(validate(g, builtin_registry(), {{"snr_db", "3"}}).empty());
    CHECK(validate(g, builtin_registry(), {{"ch.snr_db", "3"}}).empty());
    CHECK(validate(g, builtin_registry(), {{"ch.snr_db", "oops"}}).size() == 1);
    CHECK(validate(g, builtin_registry(), {{"nobody.snr_db", "3"}}).size() == 2);

    RunConfig cfg;
    CHECK_THROWS_AS(run(g, cfg), ValidationError);

    std::string twice(missing_snr);
    twice.replace(twice.find("ch: channel_awgn {}"), 19, "ch: channel_awgn { snr_db = 5 }\nalt: channel_ideal {}");
    twice += "tx.out -> alt.in\nalt.out -> rx.in\n";
    d = validate(parse_waveform(twice), builtin_registry());
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("ch.out") != std::string::npos);
    CHECK(d[0].message.find("alt.out") != std::string::npos);

    d = validate(parse_waveform("[modules]\nsrc: data_source { mcs = -1, payload = nope, bogus = 1 }\n"), builtin_registry());
    CHECK(d.size() == 3);
    d = validate(parse_waveform("[modules]\nsrc: data_source {}\nt: turbo_dec {}\n[connections]\nsrc.out -> t.in\n"),
                 builtin_registry());
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("type") != std::string::npos);
    d = validate(parse_waveform("[modules]\nsrc: data_source {}\nm: modulator {}\n[connections]\nsrc.out -> m.nope\n"),
                 builtin_registry());
    CHECK(d.size() == 2);
}

TEST_CASE("step 0 loopback over an ideal channel is error-free") {
    RunConfig cfg;
    cfg.n_subframes = 20;
    const auto r = run(golden("step0_ideal"), cfg);
    CHECK(r.bits_total == 2 * (2 * 936 + 18 * 1008));
    CHECK(r.bit_errors == 0);
    CHECK(r.ber() == 0.0);
    CHECK(r.evm_db() == kEvmFloorDb);
    CHECK(r.duration_s == doctest::Approx(20 * 0.16));

    cfg.n_subframes = 0;
    CHECK_THROWS(run(golden("step0_ideal"), cfg));
}

TEST_CASE("coded chain at baseband and through the front end") {
    RunConfig cfg;
    cfg.n_subframes = 20;
    cfg.snr_db = 10.0;
    const auto step1 = run(golden("step1_awgn"), cfg);
    CHECK(step1.blocks_total == 20);
    CHECK(step1.bit_errors == 0);
    CHECK(step1.raw_bits_total > 0);
    CHECK(step1.throughput_bps() > 0);
    const auto full = run(golden("full_awgn"), cfg);
    CHECK(full.blocks_total >= 19);
    CHECK(full.ber() < 0.1);
    CHECK(full.snr_db == 10.0);
}

TEST_CASE("runs are deterministic and schedule independent") {
    RunConfig cfg;
    cfg.n_subframes = 12;
    cfg.seed = 77;
    cfg.snr_db = 1.0;
    const auto g = golden("step1_awgn");
    const auto a = run(g, cfg);
    const auto b = run(g, cfg);
    CHECK(a == b);
    cfg.schedule = reverse_tie_order(g);
    CHECK(cfg.schedule != g.topological_order());
    CHECK(run(g, cfg) == a);

    cfg.schedule = g.topological_order();
    std::swap(cfg.schedule.front(), cfg.schedule.back());
    CHECK_THROWS(run(g, cfg));

    cfg.schedule.clear();
    cfg.seed = 78;
    CHECK_FALSE(run(g, cfg) == a);
}

TEST_CASE("overrides") {
    const auto g = golden("step0_awgn");
    RunConfig cfg;
    cfg.n_subframes = 10;
    const auto qpsk = run(g, cfg);
    cfg.overrides = {{"mcs", "2"}};
    const auto qam16 = run(g, cfg);
    CHECK(qam16.bits_total == 2 * qpsk.bits_total);

    cfg.overrides = {{"channel.snr_db", "40"}};
    cfg.snr_db = -5.0;
    CHECK(run(g, cfg).bit_errors == 0);
    cfg.overrides.clear();
    CHECK(run(g, cfg).ber() > 0.1);
    CHECK(effective_overrides(cfg).at("snr_db") == "-5");
}

TEST_CASE("module failures name the module and tick") {
    Registry reg = builtin_registry();
    ModuleInfo info;
    info.type = "fail_at";
    info.inputs = {PortSpec{"in", PortType::bits}};
    info.params = {ParamSpec{"tick", ParamKind::integer, "0"}};
    info.factory = [](const ModuleSetup& s) { return std::make_unique<FailAt>(s); };
    reg.add(info);
    const auto g = parse_waveform("[modules]\nsrc: data_source {}\nboom: fail_at { tick = 3 }\n[connections]\nsrc.out -> boom.in\n", reg);
    RunConfig cfg;
    try {
        run(g, cfg, reg);
        FAIL("run did not fail");
    } catch (const RuntimeError& e) {
        CHECK(e.module() == "boom");
        CHECK(e.tick() == 3);
        CHECK(std::string(e.what()).find("deliberate failure") != std::string::npos);
    }
}

TEST_CASE("step 1 coded BER never exceeds step 0 uncoded BER at matched Eb/N0") {
    const auto step0 = golden("step0_awgn");
    const auto step1 = golden("step1_awgn");
    const double rate = coded_rate(0);
    for (double ebn0 : {2.0, 3.0, 4.0, 6.0}) {
        RunConfig cfg;
        cfg.n_subframes = 30;
        cfg.seed = 5;
        cfg.snr_db = burst_snr_for_esn0(ebn0 + 10 * std::log10(2.0));
        const auto uncoded = run(step0, cfg);
        cfg.snr_db = burst_snr_for_esn0(ebn0 + 10 * std::log10(2.0 * rate));
        const auto coded = run(step1, cfg);
        CAPTURE(ebn0);
        CAPTURE(uncoded.ber());
        CAPTURE(coded.ber());
        CHECK(coded.ber() <= uncoded.ber());
        if (ebn0 <= 4.0) CHECK(uncoded.ber() == doctest::Approx(oracle::q_integral(std::sqrt(2 * std::pow(10.0, ebn0 / 10)))).epsilon(0.15));
    }
}
