// Waveform description files: a declarative module graph.
//
//   # comment
//   [modules]
//   src: data_source { payload = tb, mcs = 0 }
//   out: wav_out { path = "tx.wav" }
//   [connections]
//   src.out -> crc.in
//
// Module lines are `name: type { key = value, ... }`; values are bare
// words/numbers or double-quoted strings. Whitespace is insignificant.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lteaudio {

class Registry;

using ParamMap = std::map<std::string, std::string>;

struct ModuleDecl {
    std::string name;
    std::string type;
    ParamMap params;
    int line = 0;
};

struct PortRef {
    std::string module;
    std::string port;

    std::string str() const { return module + "." + port; }
    auto operator<=>(const PortRef&) const = default;
};

struct Connection {
    PortRef from;
    PortRef to;
    int line = 0;
};

struct WaveformGraph {
    std::vector<ModuleDecl> modules;
    std::vector<Connection> connections;

    const ModuleDecl* find(std::string_view name) const;
    /// Kahn order with ties broken by declaration order. Throws on cycles.
    std::vector<std::string> topological_order() const;
    /// Module names forming a cycle, empty when the graph is acyclic.
    std::vector<std::string> find_cycle() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

/// Throws ParseError for syntax errors, unknown sections or module types,
/// duplicate names, connections to undeclared modules, and cycles.
WaveformGraph parse_waveform(std::string_view text, const Registry& registry);
WaveformGraph parse_waveform(std::string_view text);
WaveformGraph load_waveform(const std::string& path);

}  // namespace lteaudio
