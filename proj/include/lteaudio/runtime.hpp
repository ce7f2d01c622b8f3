// Deterministic single-threaded dataflow execution of a waveform graph.
// Each tick every source emits one subframe; downstream modules fire in
// topological order while their inputs are ready.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lteaudio/metrics.hpp"
#include "lteaudio/numerology.hpp"
#include "lteaudio/qpp.hpp"
#include "lteaudio/registry.hpp"
#include "lteaudio/waveform.hpp"

namespace lteaudio {

struct RunConfig {
    std::uint64_t seed = 1;
    int n_subframes = 10;
    std::optional<double> snr_db;  // applies to every channel_awgn
    ParamMap overrides;
    std::size_t queue_capacity = 64;
    /// Explicit module order; must be a topological order. Empty = default.
    std::vector<std::string> schedule;
    Numerology numerology = default_numerology();
    McsTable mcs_table = default_mcs_table();
    QppTable qpp_table = default_qpp_table();
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// A module threw while processing; carries where it happened.
class RuntimeError : public std::runtime_error {
public:
    RuntimeError(std::string module, long tick, const std::string& message);
    const std::string& module() const { return module_; }
    long tick() const { return tick_; }

private:
    std::string module_;
    long tick_;
};

/// Overrides implied by the config (snr_db) merged with config.overrides.
ParamMap effective_overrides(const RunConfig& config);

LinkReport run(const WaveformGraph& graph, const RunConfig& config, const Registry& registry);
LinkReport run(const WaveformGraph& graph, const RunConfig& config);

}  // namespace lteaudio
