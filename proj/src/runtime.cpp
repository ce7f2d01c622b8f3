#include "lteaudio/runtime.hpp"

#include <deque>
#include <map>
#include <set>

#include <fmt/format.h>

namespace lteaudio {

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
          std::string msg = "waveform validation failed:";
          for (const auto& d : diagnostics) {
              msg += fmt::format("\n  line {}: {}{}", d.line, d.module.empty() ? "" : d.module + ": ", d.message);
          }
          return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

RuntimeError::RuntimeError(std::string module, long tick, const std::string& message)
    : std::runtime_error(fmt::format("module '{}' failed at tick {}: {}", module, tick, message)),
      module_(std::move(module)),
      tick_(tick) {}

ParamMap effective_overrides(const RunConfig& config) {
    ParamMap out;
    if (config.snr_db) out["snr_db"] = fmt::format("{}", *config.snr_db);
    for (const auto& [k, v] : config.overrides) out[k] = v;
    return out;
}

namespace {

std::vector<std::string> checked_schedule(const WaveformGraph& graph, const std::vector<std::string>& schedule) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!graph.find(schedule[i])) throw std::invalid_argument("schedule names unknown module " + schedule[i]);
        if (!pos.emplace(schedule[i], i).second) {
            throw std::invalid_argument("schedule lists module twice: " + schedule[i]);
        }
    }
    if (pos.size() != graph.modules.size()) throw std::invalid_argument("schedule does not list every module");
    for (const auto& c : graph.connections) {
        if (pos[c.from.module] >= pos[c.to.module]) {
            throw std::invalid_argument(
                fmt::format("schedule runs {} before its producer {}", c.to.module, c.from.module));
        }
    }
    return schedule;
}

struct Node {
    std::string name;
    const ModuleInfo* info = nullptr;
    std::unique_ptr<Module> module;
    std::vector<std::string> connected_inputs;
};

}  // namespace

LinkReport run(const WaveformGraph& graph, const RunConfig& config, const Registry& registry) {
    if (config.n_subframes < 1) throw std::invalid_argument("n_subframes must be >= 1");
    const auto overrides = effective_overrides(config);
    auto diags = validate(graph, registry, overrides);
    if (!diags.empty()) throw ValidationError(std::move(diags));

    const auto order = config.schedule.empty() ? graph.topological_order() : checked_schedule(graph, config.schedule);
    const auto port_types = resolve_port_types(graph, registry);

    RunContext ctx{config.numerology, config.mcs_table, config.qpp_table, config.seed, 0, config.n_subframes, {}};
    ctx.report.duration_s = config.n_subframes * config.numerology.subframe_duration();

    std::map<std::string, std::vector<std::string>> fanout;  // output "m.p" -> input "m.p"
    std::map<std::string, std::deque<Packet>> queues;         // input "m.p"
    for (const auto& c : graph.connections) {
        fanout[c.from.str()].push_back(c.to.str());
        queues[c.to.str()];
    }

    std::vector<Node> nodes;
    for (const auto& name : order) {
        const auto* decl = graph.find(name);
        Node node;
        node.name = name;
        node.info = registry.find(decl->type);
        ModuleSetup setup;
        setup.name = name;
        setup.params = ResolvedParams(resolve_params(*decl, *node.info, overrides));
        setup.context = &ctx;
        for (const auto& in : node.info->inputs) {
            auto key = name + "." + in.name;
            if (auto it = port_types.find(key); it != port_types.end()) {
                setup.input_types[in.name] = it->second;
                node.connected_inputs.push_back(in.name);
            }
        }
        for (const auto& out : node.info->outputs) setup.connected_outputs[out.name] = fanout.count(name + "." + out.name);
        try {
            node.module = node.info->factory(setup);
        } catch (const std::exception& e) {
            throw RuntimeError(name, 0, e.what());
        }
        nodes.push_back(std::move(node));
    }

    auto route = [&](const Node& node, PortPackets& outputs) {
        for (auto& [port, packets] : outputs) {
            if (!node.info->output(port)) {
                throw RuntimeError(node.name, ctx.tick, fmt::format("emitted on undeclared port '{}'", port));
            }
            auto it = fanout.find(node.name + "." + port);
            if (it == fanout.end()) continue;
            for (const auto& dest : it->second) {
                auto& q = queues[dest];
                for (const auto& p : packets) q.push_back(p);
                if (q.size() > config.queue_capacity) {
                    throw RuntimeError(node.name, ctx.tick, fmt::format("queue into {} overflowed", dest));
                }
            }
        }
    };

    auto ready = [&](const Node& node) {
        if (node.connected_inputs.empty()) return false;
        std::size_t non_empty = 0;
        for (const auto& in : node.connected_inputs) non_empty += !queues[node.name + "." + in].empty();
        return node.info->firing == Firing::any_input ? non_empty > 0 : non_empty == node.connected_inputs.size();
    };

    auto fire = [&](Node& node) {
        PortPackets inputs;
        for (const auto& in : node.connected_inputs) {
            auto& q = queues[node.name + "." + in];
            auto& dst = inputs[in];
            if (node.info->firing == Firing::any_input) {
                dst.assign(std::make_move_iterator(q.begin()), std::make_move_iterator(q.end()));
                q.clear();
            } else {
                dst.push_back(std::move(q.front()));
                q.pop_front();
            }
        }
        PortPackets outputs;
        try {
            node.module->process(inputs, outputs);
        } catch (const RuntimeError&) {
            throw;
        } catch (const std::exception& e) {
            throw RuntimeError(node.name, ctx.tick, e.what());
        }
        route(node, outputs);
    };

    for (long tick = 0; tick < config.n_subframes; ++tick) {
        ctx.tick = tick;
        for (auto& node : nodes) {
            if (node.info->is_source()) {
                fire(node);
            } else {
                while (ready(node)) fire(node);
            }
        }
    }

    ctx.tick = config.n_subframes;
    for (auto& node : nodes) {
        while (ready(node)) fire(node);
        PortPackets outputs;
        try {
            node.module->finish(outputs);
        } catch (const RuntimeError&) {
            throw;
        } catch (const std::exception& e) {
            throw RuntimeError(node.name, ctx.tick, e.what());
        }
        route(node, outputs);
    }
    return ctx.report;
}

LinkReport run(const WaveformGraph& graph, const RunConfig& config) { return run(graph, config, builtin_registry()); }

}  // namespace lteaudio
