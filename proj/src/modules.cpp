#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "lteaudio/bits.hpp"
#include "lteaudio/channel.hpp"
#include "lteaudio/frontend.hpp"
#include "lteaudio/modulation.hpp"
#include "lteaudio/ofdm.hpp"
#include "lteaudio/rate_match.hpp"
#include "lteaudio/registry.hpp"
#include "lteaudio/sync.hpp"
#include "lteaudio/turbo.hpp"
#include "lteaudio/wav.hpp"

namespace lteaudio {
namespace {

ParamSpec integer_param(std::string name, std::string def, std::optional<double> min = {},
                        std::optional<double> max = {}) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::integer;
    p.default_value = std::move(def);
    p.min = min;
    p.max = max;
    return p;
}

ParamSpec real_param(std::string name, std::string def, std::optional<double> min = {},
                     std::optional<double> max = {}) {
    auto p = integer_param(std::move(name), std::move(def), min, max);
    p.kind = ParamKind::real;
    return p;
}

ParamSpec bool_param(std::string name, std::string def) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::boolean;
    p.default_value = std::move(def);
    return p;
}

ParamSpec choice_param(std::string name, std::string def, std::vector<std::string> choices) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::choice;
    p.default_value = std::move(def);
    p.choices = std::move(choices);
    return p;
}

ParamSpec required(ParamSpec p) {
    p.required = true;
    p.default_value.clear();
    return p;
}

ParamSpec text_param(std::string name) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::text;
    p.required = true;
    return p;
}

ParamSpec mcs_param() { return integer_param("mcs", "0", 0); }

std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Bits hard_decide(const Llrs& llrs) {
    Bits out(llrs.size());
    std::transform(llrs.begin(), llrs.end(), out.begin(), [](double l) { return static_cast<Bit>(l < 0.0); });
    return out;
}

// Modules whose output is a pure function of one input packet.
template <typename F>
class MapModule : public Module {
public:
    explicit MapModule(F f) : f_(std::move(f)) {}
    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) out["out"].push_back(f_(p));
    }

private:
    F f_;
};

template <typename F>
std::unique_ptr<Module> map_module(F f) {
    return std::make_unique<MapModule<F>>(std::move(f));
}

class DataSource : public Module {
public:
    explicit DataSource(const ModuleSetup& s)
        : ctx_(*s.context),
          transport_block_(s.params.text("payload") == "tb"),
          mcs_(ctx_.mcs_table.at(static_cast<int>(s.params.integer("mcs")))),
          prbs_(derive_seed(ctx_.seed, 0x64617461ULL, static_cast<std::uint64_t>(s.params.integer("seed")))) {
        if (transport_block_) {
            for (int sf = 0; sf < std::min(2, ctx_.numerology.subframes_per_frame); ++sf) {
                select_code_block(coded_bits_per_subframe(ctx_.numerology, mcs_, sf), mcs_.target_rate,
                                  ctx_.qpp_table);
            }
        }
    }

    void process(PortPackets&, PortPackets& out) override {
        const int sf = static_cast<int>(ctx_.tick % ctx_.numerology.subframes_per_frame);
        const int E = coded_bits_per_subframe(ctx_.numerology, mcs_, sf);
        const int n = transport_block_ ? select_code_block(E, mcs_.target_rate, ctx_.qpp_table) - kCrcLength : E;
        Packet p;
        p.seq = static_cast<std::uint64_t>(ctx_.tick);
        p.subframe = sf;
        p.type = PortType::bits;
        p.data = prbs_.take(static_cast<std::size_t>(n));
        out["out"].push_back(std::move(p));
    }

private:
    RunContext& ctx_;
    bool transport_block_;
    McsEntry mcs_;
    Prbs prbs_;
};

class Duc : public Module {
public:
    Duc(const Numerology& num, FirFilter filter) : up_(num, std::move(filter)) {}
    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) {
            last_ = p;
            out["out"].push_back(p.with(PortType::audio, up_.process(p.complex())));
        }
    }
    void finish(PortPackets& out) override {
        auto tail = last_.with(PortType::audio, up_.flush());
        tail.tail = true;
        out["out"].push_back(std::move(tail));
    }

private:
    Upconverter up_;
    Packet last_;
};

class Ddc : public Module {
public:
    Ddc(const Numerology& num, FirFilter filter, int tx_group_delay) : down_(num, std::move(filter), tx_group_delay) {}
    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) {
            last_ = p;
            out["out"].push_back(p.with(PortType::baseband, down_.process(p.reals())));
        }
    }
    void finish(PortPackets& out) override {
        auto tail = last_.with(PortType::baseband, down_.flush());
        tail.tail = true;
        out["out"].push_back(std::move(tail));
    }

private:
    Downconverter down_;
    Packet last_;
};

FirFilter frontend_filter(const ModuleSetup& s, const std::string& taps_key) {
    const auto& num = s.context->numerology;
    auto filter = design_lowpass(s.params.real("cutoff_hz"), num.fs_audio, static_cast<int>(s.params.integer(taps_key)));
    check_frontend_filter(filter, num);
    return filter;
}

class ChannelAwgn : public Module {
public:
    explicit ChannelAwgn(const ModuleSetup& s)
        : ctx_(*s.context),
          snr_db_(s.params.real("snr_db")),
          stream_(name_hash(s.name) ^ static_cast<std::uint64_t>(s.params.integer("seed"))) {
        ctx_.report.snr_db = snr_db_;
    }
    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) {
            const auto seed = derive_seed(ctx_.seed, stream_, counter_++);
            if (p.type == PortType::audio) {
                out["out"].push_back(p.with(p.type, apply_awgn(p.reals(), snr_db_, seed)));
            } else {
                out["out"].push_back(p.with(p.type, apply_awgn(p.complex(), snr_db_, seed)));
            }
        }
    }

private:
    RunContext& ctx_;
    double snr_db_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

class WavOut : public Module {
public:
    explicit WavOut(const ModuleSetup& s)
        : path_(s.params.text("path")), gain_(s.params.real("gain")), rate_(s.context->numerology.fs_audio) {}
    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) {
            RealVec q(p.reals().size());
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double y = p.reals()[i] * gain_;
                if (std::abs(y) > 1.0) {
                    throw std::runtime_error(
                        fmt::format("sample {} reaches {:.3f} of full scale after gain {}; lower the gain", written_ + i,
                                    std::abs(y), gain_));
                }
                q[i] = std::clamp(std::round(y * 32768.0), -32768.0, 32767.0) / 32768.0;
            }
            written_ += q.size();
            samples_.insert(samples_.end(), q.begin(), q.end());
            out["out"].push_back(p.with(PortType::audio, std::move(q)));
        }
    }
    void finish(PortPackets&) override { wav_write(samples_, path_, static_cast<int>(rate_)); }

private:
    std::string path_;
    double gain_;
    double rate_;
    std::size_t written_ = 0;
    RealVec samples_;
};

class WavIn : public Module {
public:
    explicit WavIn(const ModuleSetup& s)
        : ctx_(*s.context),
          samples_(wav_read(s.params.text("path"), static_cast<int>(ctx_.numerology.fs_audio))),
          chunk_(static_cast<std::size_t>(ctx_.numerology.subframe_samples()) * ctx_.numerology.interp_factor) {}
    void process(PortPackets&, PortPackets& out) override {
        if (pos_ >= samples_.size()) return;
        const auto n = std::min(chunk_, samples_.size() - pos_);
        Packet p;
        p.type = PortType::audio;
        p.seq = static_cast<std::uint64_t>(ctx_.tick);
        p.subframe = static_cast<int>(ctx_.tick % ctx_.numerology.subframes_per_frame);
        p.data = RealVec(samples_.begin() + static_cast<std::ptrdiff_t>(pos_),
                         samples_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        out["out"].push_back(std::move(p));
    }

private:
    RunContext& ctx_;
    RealVec samples_;
    std::size_t chunk_;
    std::size_t pos_ = 0;
};

// Buffers baseband until a PSS is found, then emits frame-aligned
// subframes numbered from the frame timing.
class PssSync : public Module {
public:
    explicit PssSync(const ModuleSetup& s)
        : num_(s.context->numerology), threshold_(s.params.real("threshold")), use_cfo_(s.params.boolean("cfo")) {}

    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) buf_.insert(buf_.end(), p.complex().begin(), p.complex().end());
        if (!acquired_) try_acquire();
        if (acquired_) emit(out);
    }

    void finish(PortPackets& out) override {
        if (!acquired_) try_acquire();
        if (!acquired_) throw std::runtime_error(fmt::format("no PSS detected above threshold {}", threshold_));
        emit(out);
    }

private:
    void try_acquire() {
        const auto frame = static_cast<std::size_t>(num_.frame_samples());
        const auto pss_off = static_cast<std::size_t>(num_.pss_offset_in_frame());
        const auto n_fft = static_cast<std::size_t>(num_.n_fft);
        auto detections = correlate_detect(buf_, num_, threshold_);
        for (const auto& d : detections) {
            const auto abs_offset = base_ + d.offset;
            if (abs_offset < pss_off || d.offset + n_fft + 1 >= buf_.size()) continue;
            auto start = abs_offset - pss_off;
            while (start >= base_ + frame) start -= frame;
            acquired_ = true;
            next_ = start;
            nid2_ = d.nid2;
            seq_ = start / frame * static_cast<std::uint64_t>(num_.subframes_per_frame);
            if (use_cfo_) {
                const auto rel = start - base_;
                const auto len = std::min<std::size_t>(buf_.size() - rel, frame);
                cfo_ = cfo_estimate_cp(std::span<const cf64>(buf_).subspan(rel, len - len % num_.subframe_samples()),
                                       num_);
            }
            return;
        }
        if (buf_.size() > 3 * frame) {
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(frame));
            base_ += frame;
        }
    }

    void emit(PortPackets& out) {
        const auto sub = static_cast<std::size_t>(num_.subframe_samples());
        while (next_ + sub <= base_ + buf_.size()) {
            const auto rel = next_ - base_;
            ComplexVec samples(buf_.begin() + static_cast<std::ptrdiff_t>(rel),
                               buf_.begin() + static_cast<std::ptrdiff_t>(rel + sub));
            if (use_cfo_) samples = cfo_correct(samples, cfo_, num_.fs_baseband, next_);
            Packet p;
            p.type = PortType::baseband;
            p.seq = seq_;
            p.subframe = static_cast<int>(seq_ % static_cast<std::uint64_t>(num_.subframes_per_frame));
            p.nid2 = nid2_;
            p.data = std::move(samples);
            out["out"].push_back(std::move(p));
            ++seq_;
            next_ += sub;
        }
        const auto drop = next_ - base_;
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(drop));
        base_ = next_;
    }

    Numerology num_;
    double threshold_;
    bool use_cfo_;
    ComplexVec buf_;
    std::uint64_t base_ = 0;  // absolute index of buf_[0]
    bool acquired_ = false;
    std::uint64_t next_ = 0;
    std::uint64_t seq_ = 0;
    int nid2_ = 0;
    double cfo_ = 0.0;
};

class OfdmDemod : public Module {
public:
    explicit OfdmDemod(const ModuleSetup& s) : num_(s.context->numerology), gain_correct_(s.params.boolean("gain_correct")) {}
    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) {
            auto grid = std::move(ofdm_demodulate(p.complex(), num_, p.subframe).front());
            if (gain_correct_) {
                if (p.subframe == 0) {
                    const auto g = estimate_pss_gain(grid, num_, p.nid2);
                    if (std::abs(g) < 1e-9) throw std::runtime_error("no PSS energy");
                    gain_ = g;
                }
                if (gain_) grid = apply_gain(grid, *gain_);
            }
            out["out"].push_back(p.with(PortType::grid, std::move(grid)));
        }
    }

private:
    Numerology num_;
    bool gain_correct_;
    std::optional<cf64> gain_;
};

// Pairs received packets with reference packets of the same seq.
class RefMatcher {
public:
    template <typename F>
    void push(std::vector<Packet>& ins, std::vector<Packet>& refs, F on_pair) {
        for (auto& p : ins) ins_.push_back(std::move(p));
        for (auto& p : refs) refs_.push_back(std::move(p));
        while (!ins_.empty() && !refs_.empty()) {
            const auto a = ins_.front().seq;
            const auto b = refs_.front().seq;
            if (a == b) {
                on_pair(ins_.front(), refs_.front());
                ins_.pop_front();
                refs_.pop_front();
            } else if (b < a) {
                lost_.push_back(std::move(refs_.front()));
                refs_.pop_front();
            } else {
                ins_.pop_front();
            }
        }
    }
    /// References that will never be matched.
    std::vector<Packet> take_lost(bool final) {
        if (final) {
            for (auto& p : refs_) lost_.push_back(std::move(p));
            refs_.clear();
        }
        return std::exchange(lost_, {});
    }

private:
    std::deque<Packet> ins_;
    std::deque<Packet> refs_;
    std::vector<Packet> lost_;
};

template <bool Soft>
class Demod : public Module {
public:
    explicit Demod(const ModuleSetup& s)
        : ctx_(*s.context),
          order_(ctx_.mcs_table.at(static_cast<int>(s.params.integer("mcs"))).modulation_order),
          noise_variance_(Soft ? s.params.real("noise_variance") : 1.0),
          has_ref_(s.input_types.count("ref") != 0) {}

    void process(PortPackets& in, PortPackets& out) override {
        auto& ins = in["in"];
        for (auto& p : ins) {
            if constexpr (Soft) {
                out["out"].push_back(p.with(PortType::llrs, demod_soft(p.complex(), order_, noise_variance_)));
            } else {
                out["out"].push_back(p.with(PortType::bits, demod_hard(p.complex(), order_)));
            }
        }
        if (!has_ref_) return;
        matcher_.push(ins, in["ref"], [&](const Packet& rx, const Packet& ref) {
            ctx_.report = accumulate_evm(ctx_.report, ref.complex(), rx.complex());
        });
        matcher_.take_lost(false);
    }

private:
    RunContext& ctx_;
    int order_;
    double noise_variance_;
    bool has_ref_;
    RefMatcher matcher_;
};

class TurboDec : public Module {
public:
    explicit TurboDec(const ModuleSetup& s)
        : qpp_(s.context->qpp_table),
          iterations_(static_cast<int>(s.params.integer("iterations"))),
          scale_(s.params.real("extrinsic_scale")),
          early_stop_(s.params.boolean("crc_early_stop")),
          enabled_(s.params.boolean("enabled")) {}

    void process(PortPackets& in, PortPackets& out) override {
        for (auto& p : in["in"]) {
            const auto& llrs = p.reals();
            if (llrs.size() % 3 != 0 || llrs.size() < 3 * static_cast<std::size_t>(kTurboTailBits)) {
                throw std::invalid_argument(fmt::format("{} LLRs is not a turbo codeword length", llrs.size()));
            }
            const int K = static_cast<int>(llrs.size() / 3) - kTurboTailBits;
            const auto& params = qpp_.at(K);
            Bits bits;
            if (enabled_) {
                EarlyStop stop;
                if (early_stop_) stop = [](std::span<const Bit> b) { return crc24_ok(b); };
                bits = turbo_decode(params, llrs, iterations_, scale_, stop).bits;
            } else {
                bits = hard_decide(Llrs(llrs.begin(), llrs.begin() + K));
            }
            out["out"].push_back(p.with(PortType::bits, std::move(bits)));
        }
    }

private:
    const QppTable& qpp_;
    int iterations_;
    double scale_;
    bool early_stop_;
    bool enabled_;
};

class DataSink : public Module {
public:
    explicit DataSink(const ModuleSetup& s) : ctx_(*s.context), raw_(s.params.text("metric") == "raw") {}

    void process(PortPackets& in, PortPackets&) override {
        matcher_.push(in["in"], in["ref"], [&](const Packet& rx, const Packet& ref) {
            const Bits rx_bits = rx.type == PortType::llrs ? hard_decide(rx.reals()) : rx.bits();
            if (rx_bits.size() != ref.bits().size()) {
                throw std::runtime_error(fmt::format("subframe {}: received {} bits, reference has {}", rx.seq,
                                                     rx_bits.size(), ref.bits().size()));
            }
            const auto e = ber_count(ref.bits(), rx_bits);
            record(e.errors, e.total);
        });
        count_lost(matcher_.take_lost(false));
    }

    void finish(PortPackets&) override { count_lost(matcher_.take_lost(true)); }

private:
    void record(std::uint64_t errors, std::uint64_t total) {
        if (total == 0) return;
        ctx_.report = raw_ ? accumulate_raw_ber(ctx_.report, errors, total) : accumulate_ber(ctx_.report, errors, total);
    }
    void count_lost(const std::vector<Packet>& lost) {
        for (const auto& p : lost) {
            record(p.bits().size(), p.bits().size());
            ++ctx_.report.lost_subframes;
        }
    }

    RunContext& ctx_;
    bool raw_;
    RefMatcher matcher_;
};

Registry make_registry() {
    Registry r;
    auto port = [](std::string name, PortType t, bool optional = false) { return PortSpec{std::move(name), t, optional}; };
    auto add = [&](std::string type, std::string desc, std::vector<PortSpec> ins, std::vector<PortSpec> outs,
                   std::vector<ParamSpec> params, Firing firing,
                   std::function<std::unique_ptr<Module>(const ModuleSetup&)> factory) {
        r.add(ModuleInfo{std::move(type), std::move(desc), std::move(ins), std::move(outs), std::move(params), firing,
                         std::move(factory)});
    };
    const auto all = Firing::all_inputs;

    add("data_source", "PRBS payload, one block per subframe", {}, {port("out", PortType::bits)},
        {choice_param("payload", "tb", {"tb", "raw"}), mcs_param(), integer_param("seed", "0", 0)}, all,
        [](const ModuleSetup& s) { return std::make_unique<DataSource>(s); });

    add("crc_attach", "append CRC-24A", {port("in", PortType::bits)}, {port("out", PortType::bits)}, {}, all,
        [](const ModuleSetup&) {
            return map_module([](const Packet& p) { return p.with(PortType::bits, crc24_attach(p.bits())); });
        });

    add("turbo_enc", "rate-1/3 turbo encoder", {port("in", PortType::bits)}, {port("out", PortType::bits)}, {}, all,
        [](const ModuleSetup& s) {
            const QppTable* qpp = &s.context->qpp_table;
            return map_module([qpp](const Packet& p) {
                const auto& params = qpp->at(static_cast<int>(p.bits().size()));
                return p.with(PortType::bits, turbo_encode(params, p.bits()).concatenated());
            });
        });

    add("rate_match", "circular-buffer rate matching to the subframe capacity", {port("in", PortType::bits)},
        {port("out", PortType::bits)}, {mcs_param()}, all, [](const ModuleSetup& s) {
            const auto num = s.context->numerology;
            const auto mcs = s.context->mcs_table.at(static_cast<int>(s.params.integer("mcs")));
            return map_module([num, mcs](const Packet& p) {
                return p.with(PortType::bits, rate_match(p.bits(), coded_bits_per_subframe(num, mcs, p.subframe)));
            });
        });

    add("modulator", "Gray QAM mapper", {port("in", PortType::bits)}, {port("out", PortType::symbols)}, {mcs_param()},
        all, [](const ModuleSetup& s) {
            const int order = s.context->mcs_table.at(static_cast<int>(s.params.integer("mcs"))).modulation_order;
            return map_module([order](const Packet& p) { return p.with(PortType::symbols, modulate(p.bits(), order)); });
        });

    add("grid_map", "PDSCH and PSS resource mapping", {port("in", PortType::symbols)}, {port("out", PortType::grid)},
        {integer_param("nid2", "0", 0, 2)}, all, [](const ModuleSetup& s) {
            const auto num = s.context->numerology;
            const int nid2 = static_cast<int>(s.params.integer("nid2"));
            return map_module([num, nid2](const Packet& p) {
                auto out = p.with(PortType::grid, grid_map(p.complex(), num, p.subframe, nid2));
                out.nid2 = nid2;
                return out;
            });
        });

    add("ofdm_mod", "IFFT and cyclic prefix", {port("in", PortType::grid)}, {port("out", PortType::baseband)}, {}, all,
        [](const ModuleSetup& s) {
            const auto num = s.context->numerology;
            return map_module([num](const Packet& p) { return p.with(PortType::baseband, ofdm_modulate(p.grid(), num)); });
        });

    const auto filter_params = std::vector<ParamSpec>{integer_param("taps", std::to_string(kDefaultFilterTaps), 3, 1023),
                                                      real_param("cutoff_hz", fmt::format("{}", kDefaultFilterCutoff), 1.0)};
    add("duc", "interpolate and mix to the audio carrier", {port("in", PortType::baseband)},
        {port("out", PortType::audio)}, filter_params, all, [](const ModuleSetup& s) {
            return std::make_unique<Duc>(s.context->numerology, frontend_filter(s, "taps"));
        });

    auto ddc_params = filter_params;
    ddc_params.push_back(integer_param("tx_taps", "0", 0, 1023));
    add("ddc", "mix down and decimate to baseband", {port("in", PortType::audio)}, {port("out", PortType::baseband)},
        ddc_params, all, [](const ModuleSetup& s) {
            auto filter = frontend_filter(s, "taps");
            const auto tx_taps = s.params.integer("tx_taps");
            const int tx_delay = tx_taps > 0 ? static_cast<int>((tx_taps - 1) / 2) : filter.group_delay();
            return std::make_unique<Ddc>(s.context->numerology, std::move(filter), tx_delay);
        });

    add("channel_ideal", "identity channel", {port("in", PortType::signal)}, {port("out", PortType::signal)}, {}, all,
        [](const ModuleSetup&) { return map_module([](const Packet& p) { return p; }); });

    add("channel_awgn", "additive white Gaussian noise at a per-burst SNR", {port("in", PortType::signal)},
        {port("out", PortType::signal)}, {required(real_param("snr_db", "", -50.0, 100.0)), integer_param("seed", "0", 0)},
        all, [](const ModuleSetup& s) { return std::make_unique<ChannelAwgn>(s); });

    add("wav_out", "write 16-bit PCM and pass the quantised audio on", {port("in", PortType::audio)},
        {port("out", PortType::audio)}, {text_param("path"), real_param("gain", "0.25", 1e-6, 1e6)}, all,
        [](const ModuleSetup& s) { return std::make_unique<WavOut>(s); });

    add("wav_in", "read 16-bit PCM, one subframe of audio per tick", {}, {port("out", PortType::audio)},
        {text_param("path")}, all, [](const ModuleSetup& s) { return std::make_unique<WavIn>(s); });

    add("pss_sync", "PSS frame acquisition", {port("in", PortType::baseband)}, {port("out", PortType::baseband)},
        {real_param("threshold", "0.5", 0.0, 1.0), bool_param("cfo", "false")}, all,
        [](const ModuleSetup& s) { return std::make_unique<PssSync>(s); });

    add("ofdm_demod", "FFT, CP removal and PSS gain correction", {port("in", PortType::baseband)},
        {port("out", PortType::grid)}, {bool_param("gain_correct", "true")}, all,
        [](const ModuleSetup& s) { return std::make_unique<OfdmDemod>(s); });

    add("grid_demap", "extract PDSCH symbols", {port("in", PortType::grid)}, {port("out", PortType::symbols)}, {}, all,
        [](const ModuleSetup& s) {
            const auto num = s.context->numerology;
            return map_module(
                [num](const Packet& p) { return p.with(PortType::symbols, grid_demap(p.grid(), num, p.subframe)); });
        });

    add("demod_soft", "max-log LLR demapper", {port("in", PortType::symbols), port("ref", PortType::symbols, true)},
        {port("out", PortType::llrs)}, {mcs_param(), real_param("noise_variance", "1.0", 1e-12)}, Firing::any_input,
        [](const ModuleSetup& s) { return std::make_unique<Demod<true>>(s); });

    add("demod_hard", "nearest-point demapper", {port("in", PortType::symbols), port("ref", PortType::symbols, true)},
        {port("out", PortType::bits)}, {mcs_param()}, Firing::any_input,
        [](const ModuleSetup& s) { return std::make_unique<Demod<false>>(s); });

    add("rate_dematch", "undo rate matching, summing repeated LLRs", {port("in", PortType::llrs)},
        {port("out", PortType::llrs)}, {mcs_param()}, all, [](const ModuleSetup& s) {
            const auto num = s.context->numerology;
            const auto mcs = s.context->mcs_table.at(static_cast<int>(s.params.integer("mcs")));
            const QppTable* qpp = &s.context->qpp_table;
            return map_module([num, mcs, qpp](const Packet& p) {
                const int E = static_cast<int>(p.reals().size());
                const int expected = coded_bits_per_subframe(num, mcs, p.subframe);
                if (E != expected) {
                    throw std::invalid_argument(
                        fmt::format("subframe {} carries {} LLRs, expected {}", p.subframe, E, expected));
                }
                const int K = select_code_block(E, mcs.target_rate, *qpp);
                return p.with(PortType::llrs, rate_dematch(p.reals(), K));
            });
        });

    add("turbo_dec", "iterative max-log-MAP turbo decoder", {port("in", PortType::llrs)},
        {port("out", PortType::bits)},
        {integer_param("iterations", std::to_string(kDefaultTurboIterations), 1, 64),
         real_param("extrinsic_scale", "0.75", 0.0, 1.0), bool_param("crc_early_stop", "true"),
         bool_param("enabled", "true")},
        all, [](const ModuleSetup& s) { return std::make_unique<TurboDec>(s); });

    add("crc_check", "verify and strip CRC-24A, counting block errors", {port("in", PortType::bits)},
        {port("out", PortType::bits)}, {}, all, [](const ModuleSetup& s) {
            RunContext* ctx = s.context;
            return map_module([ctx](const Packet& p) {
                auto check = crc24_check(p.bits());
                ctx->report = accumulate_bler(ctx->report, check.pass, check.payload.size());
                return p.with(PortType::bits, std::move(check.payload));
            });
        });

    add("data_sink", "compare against the reference and count bit errors",
        {port("in", PortType::bits_or_llrs), port("ref", PortType::bits)}, {},
        {choice_param("metric", "payload", {"payload", "raw"})}, Firing::any_input,
        [](const ModuleSetup& s) { return std::make_unique<DataSink>(s); });

    return r;
}

}  // namespace

const Registry& builtin_registry() {
    static const Registry registry = make_registry();
    return registry;
}

}  // namespace lteaudio
