// Module type registry: port and parameter declarations plus factories,
// and static validation of a waveform graph against them.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lteaudio/metrics.hpp"
#include "lteaudio/numerology.hpp"
#include "lteaudio/qpp.hpp"
#include "lteaudio/resource_grid.hpp"
#include "lteaudio/types.hpp"
#include "lteaudio/waveform.hpp"

namespace lteaudio {

enum class PortType {
    bits,
    llrs,
    symbols,
    baseband,
    audio,
    grid,
    signal,        // symbols, baseband or audio; an output of this type mirrors the input
    bits_or_llrs,  // llrs are hard-decided on arrival
};

const char* to_string(PortType t);
/// Whether data of type `produced` may feed a port declared as `accepted`.
bool port_accepts(PortType accepted, PortType produced);

struct PortSpec {
    std::string name;
    PortType type = PortType::bits;
    bool optional = false;
};

enum class ParamKind { integer, real, boolean, text, choice };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::integer;
    std::string default_value;  // empty + !required means "unset"
    bool required = false;
    std::optional<double> min;
    std::optional<double> max;
    std::vector<std::string> choices;
};

/// One subframe of data moving along an edge.
struct Packet {
    PortType type = PortType::bits;
    std::uint64_t seq = 0;  // transmit subframe counter
    int subframe = 0;       // index within the frame
    int nid2 = 0;
    bool tail = false;      // filter flush, not a whole subframe
    std::variant<Bits, RealVec, ComplexVec, ResourceGrid> data;

    Bits& bits() { return std::get<Bits>(data); }
    const Bits& bits() const { return std::get<Bits>(data); }
    RealVec& reals() { return std::get<RealVec>(data); }
    const RealVec& reals() const { return std::get<RealVec>(data); }
    ComplexVec& complex() { return std::get<ComplexVec>(data); }
    const ComplexVec& complex() const { return std::get<ComplexVec>(data); }
    ResourceGrid& grid() { return std::get<ResourceGrid>(data); }
    const ResourceGrid& grid() const { return std::get<ResourceGrid>(data); }

    /// Same metadata, new payload.
    template <typename T>
    Packet with(PortType t, T payload) const {
        Packet p = *this;
        p.type = t;
        p.data = std::move(payload);
        return p;
    }
};

/// Shared, per-run state visible to every module instance.
struct RunContext {
    Numerology numerology;
    McsTable mcs_table;
    QppTable qpp_table;
    std::uint64_t seed = 0;
    long tick = 0;
    int n_subframes = 0;
    LinkReport report;
};

class ResolvedParams {
public:
    explicit ResolvedParams(ParamMap values = {}) : values_(std::move(values)) {}

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& text(const std::string& key) const;
    long long integer(const std::string& key) const;
    double real(const std::string& key) const;
    bool boolean(const std::string& key) const;
    const ParamMap& values() const { return values_; }

private:
    ParamMap values_;
};

using PortPackets = std::map<std::string, std::vector<Packet>>;

class Module {
public:
    virtual ~Module() = default;
    /// Sources are called once per tick with no inputs. Other modules get
    /// one packet per connected input, or (firing = any) every queued packet.
    virtual void process(PortPackets& inputs, PortPackets& outputs) = 0;
    /// End of run: flush internal state downstream.
    virtual void finish(PortPackets& /*outputs*/) {}
};

struct ModuleSetup {
    std::string name;
    ResolvedParams params;
    RunContext* context = nullptr;
    /// Resolved type of each connected input port.
    std::map<std::string, PortType> input_types;
    std::map<std::string, bool> connected_outputs;
};

enum class Firing { all_inputs, any_input };

struct ModuleInfo {
    std::string type;
    std::string description;
    std::vector<PortSpec> inputs;
    std::vector<PortSpec> outputs;
    std::vector<ParamSpec> params;
    Firing firing = Firing::all_inputs;
    std::function<std::unique_ptr<Module>(const ModuleSetup&)> factory;

    const PortSpec* input(const std::string& name) const;
    const PortSpec* output(const std::string& name) const;
    const ParamSpec* param(const std::string& name) const;
    bool is_source() const { return inputs.empty(); }
};

class Registry {
public:
    void add(ModuleInfo info);
    const ModuleInfo* find(const std::string& type) const;
    std::vector<std::string> types() const;

private:
    std::map<std::string, ModuleInfo> modules_;
};

/// data_source, crc_attach, turbo_enc, rate_match, modulator, grid_map,
/// ofdm_mod, duc, channel_ideal, channel_awgn, wav_out, wav_in, ddc,
/// pss_sync, ofdm_demod, grid_demap, demod_soft, demod_hard, rate_dematch,
/// turbo_dec, crc_check, data_sink.
const Registry& builtin_registry();

struct Diagnostic {
    int line = 0;
    std::string module;
    std::string message;
};

/// Parameters after applying overrides. Override keys are either `key`
/// (every module declaring that parameter) or `module.key`.
ParamMap resolve_params(const ModuleDecl& decl, const ModuleInfo& info, const ParamMap& overrides);

/// Empty result means the graph is runnable.
std::vector<Diagnostic> validate(const WaveformGraph& graph, const Registry& registry, const ParamMap& overrides = {});

/// Resolved producer type for every connected input port ("module.port").
std::map<std::string, PortType> resolve_port_types(const WaveformGraph& graph, const Registry& registry);

}  // namespace lteaudio
