#include "lteaudio/registry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace lteaudio {

const char* to_string(PortType t) {
    switch (t) {
        case PortType::bits: return "bits";
        case PortType::llrs: return "llrs";
        case PortType::symbols: return "symbols";
        case PortType::baseband: return "baseband";
        case PortType::audio: return "audio";
        case PortType::grid: return "grid";
        case PortType::signal: return "signal";
        case PortType::bits_or_llrs: return "bits|llrs";
    }
    return "?";
}

bool port_accepts(PortType accepted, PortType produced) {
    if (accepted == produced) return true;
    switch (accepted) {
        case PortType::signal:
            return produced == PortType::symbols || produced == PortType::baseband || produced == PortType::audio;
        case PortType::bits_or_llrs:
            return produced == PortType::bits || produced == PortType::llrs;
        default:
            return false;
    }
}

namespace {

std::optional<long long> parse_integer(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    return std::nullopt;
}

}  // namespace

const std::string& ResolvedParams::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument(fmt::format("parameter '{}' is not set", key));
    return it->second;
}

long long ResolvedParams::integer(const std::string& key) const {
    auto v = parse_integer(text(key));
    if (!v) throw std::invalid_argument(fmt::format("parameter '{}' is not an integer", key));
    return *v;
}

double ResolvedParams::real(const std::string& key) const {
    auto v = parse_real(text(key));
    if (!v) throw std::invalid_argument(fmt::format("parameter '{}' is not a number", key));
    return *v;
}

bool ResolvedParams::boolean(const std::string& key) const {
    auto v = parse_bool(text(key));
    if (!v) throw std::invalid_argument(fmt::format("parameter '{}' is not a boolean", key));
    return *v;
}

const PortSpec* ModuleInfo::input(const std::string& name) const {
    for (const auto& p : inputs) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const PortSpec* ModuleInfo::output(const std::string& name) const {
    for (const auto& p : outputs) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const ParamSpec* ModuleInfo::param(const std::string& name) const {
    for (const auto& p : params) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

void Registry::add(ModuleInfo info) {
    auto type = info.type;
    if (!modules_.emplace(type, std::move(info)).second) {
        throw std::invalid_argument("module type registered twice: " + type);
    }
}

const ModuleInfo* Registry::find(const std::string& type) const {
    auto it = modules_.find(type);
    return it == modules_.end() ? nullptr : &it->second;
}

std::vector<std::string> Registry::types() const {
    std::vector<std::string> out;
    for (const auto& [name, info] : modules_) out.push_back(name);
    return out;
}

ParamMap resolve_params(const ModuleDecl& decl, const ModuleInfo& info, const ParamMap& overrides) {
    ParamMap out;
    for (const auto& p : info.params) {
        if (!p.default_value.empty()) out[p.name] = p.default_value;
    }
    for (const auto& [k, v] : decl.params) out[k] = v;
    for (const auto& [k, v] : overrides) {
        if (k.find('.') == std::string::npos && info.param(k)) out[k] = v;
    }
    const auto prefix = decl.name + ".";
    for (const auto& [k, v] : overrides) {
        if (k.rfind(prefix, 0) == 0) out[k.substr(prefix.size())] = v;
    }
    return out;
}

std::map<std::string, PortType> resolve_port_types(const WaveformGraph& graph, const Registry& registry) {
    std::map<std::string, PortType> result;
    std::vector<std::string> order;
    try {
        order = graph.topological_order();
    } catch (const std::exception&) {
        return result;
    }
    std::map<std::string, PortType> produced;  // "module.port" of outputs
    for (const auto& name : order) {
        const auto* decl = graph.find(name);
        const auto* info = registry.find(decl->type);
        if (!info) continue;
        std::optional<PortType> mirrored;
        for (const auto& c : graph.connections) {
            if (c.to.module != name) continue;
            auto it = produced.find(c.from.str());
            if (it == produced.end()) continue;
            result[c.to.str()] = it->second;
            if (c.to.port == "in") mirrored = it->second;
        }
        for (const auto& out : info->outputs) {
            if (out.type == PortType::signal) {
                if (mirrored) produced[name + "." + out.name] = *mirrored;
            } else {
                produced[name + "." + out.name] = out.type;
            }
        }
    }
    return result;
}

std::vector<Diagnostic> validate(const WaveformGraph& graph, const Registry& registry, const ParamMap& overrides) {
    std::vector<Diagnostic> diags;
    auto add = [&](int line, const std::string& module, std::string msg) {
        diags.push_back(Diagnostic{line, module, std::move(msg)});
    };

    std::set<std::string> names;
    for (const auto& m : graph.modules) {
        if (!names.insert(m.name).second) add(m.line, m.name, fmt::format("duplicate module name '{}'", m.name));
        if (!registry.find(m.type)) add(m.line, m.name, fmt::format("unknown module type '{}'", m.type));
    }
    for (const auto& [key, value] : overrides) {
        auto dot = key.find('.');
        if (dot == std::string::npos) continue;
        auto mod = key.substr(0, dot);
        auto param = key.substr(dot + 1);
        const auto* decl = graph.find(mod);
        if (!decl) {
            add(0, mod, fmt::format("override '{}' names an unknown module", key));
            continue;
        }
        const auto* info = registry.find(decl->type);
        if (info && !info->param(param)) {
            add(decl->line, mod, fmt::format("override '{}': type '{}' has no parameter '{}'", key, decl->type, param));
        }
    }

    bool has_source = false;
    for (const auto& m : graph.modules) {
        const auto* info = registry.find(m.type);
        if (!info) continue;
        if (info->is_source()) has_source = true;

        for (const auto& [k, v] : m.params) {
            if (!info->param(k)) add(m.line, m.name, fmt::format("unknown parameter '{}' for type '{}'", k, m.type));
        }
        auto resolved = resolve_params(m, *info, overrides);
        for (const auto& p : info->params) {
            auto it = resolved.find(p.name);
            if (it == resolved.end()) {
                if (p.required) add(m.line, m.name, fmt::format("missing required parameter '{}'", p.name));
                continue;
            }
            const auto& v = it->second;
            std::optional<double> numeric;
            switch (p.kind) {
                case ParamKind::integer:
                    if (auto x = parse_integer(v)) {
                        numeric = static_cast<double>(*x);
                    } else {
                        add(m.line, m.name, fmt::format("parameter '{}' must be an integer, got '{}'", p.name, v));
                    }
                    break;
                case ParamKind::real:
                    if (auto x = parse_real(v)) {
                        numeric = *x;
                    } else {
                        add(m.line, m.name, fmt::format("parameter '{}' must be a number, got '{}'", p.name, v));
                    }
                    break;
                case ParamKind::boolean:
                    if (!parse_bool(v)) {
                        add(m.line, m.name, fmt::format("parameter '{}' must be a boolean, got '{}'", p.name, v));
                    }
                    break;
                case ParamKind::choice:
                    if (std::find(p.choices.begin(), p.choices.end(), v) == p.choices.end()) {
                        add(m.line, m.name,
                            fmt::format("parameter '{}' must be one of {{{}}}, got '{}'", p.name,
                                        fmt::join(p.choices, ", "), v));
                    }
                    break;
                case ParamKind::text:
                    if (v.empty()) add(m.line, m.name, fmt::format("parameter '{}' is empty", p.name));
                    break;
            }
            if (numeric && ((p.min && *numeric < *p.min) || (p.max && *numeric > *p.max))) {
                add(m.line, m.name,
                    fmt::format("parameter '{}' = {} is outside [{}, {}]", p.name, v,
                                p.min ? fmt::format("{}", *p.min) : "-inf", p.max ? fmt::format("{}", *p.max) : "inf"));
            }
        }
    }
    if (!graph.modules.empty() && !has_source) add(0, "", "graph has no source module");

    std::map<std::string, std::vector<const Connection*>> into;
    for (const auto& c : graph.connections) {
        const auto* from = graph.find(c.from.module);
        const auto* to = graph.find(c.to.module);
        if (!from) add(c.line, c.from.module, fmt::format("connection from undeclared module '{}'", c.from.module));
        if (!to) add(c.line, c.to.module, fmt::format("connection to undeclared module '{}'", c.to.module));
        if (!from || !to) continue;
        const auto* fi = registry.find(from->type);
        const auto* ti = registry.find(to->type);
        if (fi && !fi->output(c.from.port)) {
            add(c.line, from->name, fmt::format("type '{}' has no output port '{}'", from->type, c.from.port));
        }
        if (ti && !ti->input(c.to.port)) {
            add(c.line, to->name, fmt::format("type '{}' has no input port '{}'", to->type, c.to.port));
        }
        into[c.to.str()].push_back(&c);
    }
    for (const auto& [port, conns] : into) {
        if (conns.size() > 1) {
            std::vector<std::string> producers;
            for (const auto* c : conns) producers.push_back(c->from.str());
            add(conns[1]->line, conns[0]->to.module,
                fmt::format("input port '{}' is connected more than once (from {})", port, fmt::join(producers, ", ")));
        }
    }
    for (const auto& m : graph.modules) {
        const auto* info = registry.find(m.type);
        if (!info) continue;
        for (const auto& in : info->inputs) {
            if (!in.optional && !into.count(m.name + "." + in.name)) {
                add(m.line, m.name, fmt::format("required input port '{}' is not connected", in.name));
            }
        }
    }

    auto cycle = graph.find_cycle();
    if (!cycle.empty()) {
        add(0, cycle.front(), fmt::format("cycle detected: {} -> {}", fmt::join(cycle, " -> "), cycle.front()));
    } else {
        auto types = resolve_port_types(graph, registry);
        for (const auto& c : graph.connections) {
            const auto* to = graph.find(c.to.module);
            if (!to) continue;
            const auto* ti = registry.find(to->type);
            if (!ti) continue;
            const auto* spec = ti->input(c.to.port);
            auto it = types.find(c.to.str());
            if (!spec || it == types.end()) continue;
            if (!port_accepts(spec->type, it->second)) {
                add(c.line, to->name,
                    fmt::format("type mismatch on {} -> {}: {} into {}", c.from.str(), c.to.str(),
                                to_string(it->second), to_string(spec->type)));
            }
        }
    }
    return diags;
}

}  // namespace lteaudio
