#include "lteaudio/waveform.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "lteaudio/registry.hpp"

namespace lteaudio {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)),
      line_(line),
      column_(column),
      message_(message) {}

const ModuleDecl* WaveformGraph::find(std::string_view name) const {
    for (const auto& m : modules) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

namespace {

std::map<std::string, std::size_t> index_of(const WaveformGraph& g) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < g.modules.size(); ++i) idx[g.modules[i].name] = i;
    return idx;
}

// Successor lists by module index, skipping edges to unknown modules.
std::vector<std::vector<std::size_t>> adjacency(const WaveformGraph& g) {
    auto idx = index_of(g);
    std::vector<std::vector<std::size_t>> adj(g.modules.size());
    for (const auto& c : g.connections) {
        auto a = idx.find(c.from.module);
        auto b = idx.find(c.to.module);
        if (a == idx.end() || b == idx.end()) continue;
        adj[a->second].push_back(b->second);
    }
    return adj;
}

}  // namespace

std::vector<std::string> WaveformGraph::find_cycle() const {
    auto adj = adjacency(*this);
    std::vector<int> state(modules.size(), 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> stack;
    std::vector<std::string> cycle;

    std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
        state[u] = 1;
        stack.push_back(u);
        for (auto v : adj[u]) {
            if (state[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                for (; it != stack.end(); ++it) cycle.push_back(modules[*it].name);
                return true;
            }
            if (state[v] == 0 && dfs(v)) return true;
        }
        stack.pop_back();
        state[u] = 2;
        return false;
    };
    for (std::size_t i = 0; i < modules.size(); ++i) {
        if (state[i] == 0 && dfs(i)) break;
    }
    return cycle;
}

std::vector<std::string> WaveformGraph::topological_order() const {
    auto adj = adjacency(*this);
    std::vector<int> indegree(modules.size(), 0);
    for (const auto& succ : adj) {
        for (auto v : succ) ++indegree[v];
    }
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < modules.size(); ++i) {
        if (indegree[i] == 0) ready.insert(i);
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        auto u = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(modules[u].name);
        for (auto v : adj[u]) {
            if (--indegree[v] == 0) ready.insert(v);
        }
    }
    if (order.size() != modules.size()) {
        auto cycle = find_cycle();
        std::string names;
        for (const auto& n : cycle) names += (names.empty() ? "" : " -> ") + n;
        throw std::invalid_argument("cycle detected: " + names);
    }
    return order;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' || c == '+' ||
           c == '/' || c == ':';
}

class LineScanner {
public:
    LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    int column() const { return static_cast<int>(pos_) + 1; }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view token) {
        if (!accept(token)) fail(fmt::format("expected '{}'", token));
    }
    std::string identifier(std::string_view what) {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail(fmt::format("expected {}", what));
        auto begin = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(begin, pos_ - begin));
    }
    std::string value() {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '"') {
            int start_col = column();
            ++pos_;
            std::string out;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                out += text_[pos_++];
            }
            if (pos_ >= text_.size()) throw ParseError(line_, start_col, "unterminated string");
            ++pos_;
            return out;
        }
        auto begin = pos_;
        while (pos_ < text_.size() && bare_char(text_[pos_])) ++pos_;
        if (begin == pos_) fail("expected a value");
        return std::string(text_.substr(begin, pos_ - begin));
    }
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(line_, column(), message);
    }

private:
    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

// Drops a trailing '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted && c == '\\') {
            ++i;
        } else if (c == '"') {
            quoted = !quoted;
        } else if (c == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

PortRef port_ref(LineScanner& s) {
    PortRef ref;
    ref.module = s.identifier("module name");
    s.expect(".");
    ref.port = s.identifier("port name");
    return ref;
}

}  // namespace

WaveformGraph parse_waveform(std::string_view text, const Registry& registry) {
    enum class Section { none, modules, connections };
    WaveformGraph graph;
    Section section = Section::none;
    std::map<std::string, int> declared_at;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

        LineScanner s(strip_comment(raw), line_no);
        if (s.at_end()) {
            if (end == text.size()) break;
            continue;
        }

        if (s.accept("[")) {
            int col = s.column();
            auto name = s.identifier("section name");
            s.expect("]");
            if (!s.at_end()) s.fail("unexpected text after section header");
            if (name == "modules") {
                section = Section::modules;
            } else if (name == "connections") {
                section = Section::connections;
            } else {
                throw ParseError(line_no, col, fmt::format("unknown section '{}'", name));
            }
        } else if (section == Section::modules) {
            ModuleDecl decl;
            decl.line = line_no;
            s.skip_ws();
            int name_col = s.column();
            decl.name = s.identifier("module name");
            s.expect(":");
            s.skip_ws();
            int type_col = s.column();
            decl.type = s.identifier("module type");
            if (s.accept("{")) {
                if (!s.accept("}")) {
                    for (;;) {
                        s.skip_ws();
                        int key_col = s.column();
                        auto key = s.identifier("parameter name");
                        s.expect("=");
                        auto value = s.value();
                        if (!decl.params.emplace(key, value).second) {
                            throw ParseError(line_no, key_col, fmt::format("parameter '{}' given twice", key));
                        }
                        if (s.accept("}")) break;
                        s.expect(",");
                    }
                }
            }
            if (!s.at_end()) s.fail("unexpected text after module declaration");
            if (auto it = declared_at.find(decl.name); it != declared_at.end()) {
                throw ParseError(line_no, name_col,
                                 fmt::format("duplicate module name '{}' (first declared on line {})", decl.name,
                                             it->second));
            }
            if (!registry.find(decl.type)) {
                throw ParseError(line_no, type_col, fmt::format("unknown module type '{}'", decl.type));
            }
            declared_at[decl.name] = line_no;
            graph.modules.push_back(std::move(decl));
        } else if (section == Section::connections) {
            Connection c;
            c.line = line_no;
            c.from = port_ref(s);
            s.expect("->");
            c.to = port_ref(s);
            if (!s.at_end()) s.fail("unexpected text after connection");
            graph.connections.push_back(std::move(c));
        } else {
            s.fail("statement outside a section");
        }
        if (end == text.size()) break;
    }

    for (const auto& c : graph.connections) {
        for (const auto* ref : {&c.from, &c.to}) {
            if (!graph.find(ref->module)) {
                throw ParseError(c.line, 1,
                                 fmt::format("connection endpoint '{}' names an undeclared module", ref->str()));
            }
        }
    }
    auto cycle = graph.find_cycle();
    if (!cycle.empty()) {
        std::string names;
        for (const auto& n : cycle) names += (names.empty() ? "" : " -> ") + n;
        int line = 0;
        for (const auto& c : graph.connections) {
            if (c.to.module == cycle.front() && c.from.module == cycle.back()) line = c.line;
        }
        throw ParseError(line, 1, fmt::format("cycle detected: {} -> {}", names, cycle.front()));
    }
    return graph;
}

WaveformGraph parse_waveform(std::string_view text) { return parse_waveform(text, builtin_registry()); }

WaveformGraph load_waveform(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open waveform file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_waveform(ss.str());
}

}  // namespace lteaudio
