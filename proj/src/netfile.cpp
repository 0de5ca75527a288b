#include "netwave/netfile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace netwave {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ValidationError("network file, line " + std::to_string(line) + ": " + msg);
}

double parse_number(int line, const std::string& key, const std::string& value) {
    size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        fail(line, "field '" + key + "': '" + value + "' is not a number");
    }
    if (pos != value.size())
        fail(line, "field '" + key + "': trailing characters in '" + value + "'");
    if (!std::isfinite(x)) fail(line, "field '" + key + "' is not finite");
    return x;
}

std::unordered_map<std::string, std::string> parse_fields(int line, std::istringstream& iss) {
    std::unordered_map<std::string, std::string> fields;
    std::string token;
    while (iss >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == token.size())
            fail(line, "expected key=value, got '" + token + "'");
        if (!fields.emplace(token.substr(0, eq), token.substr(eq + 1)).second)
            fail(line, "duplicate field '" + token.substr(0, eq) + "'");
    }
    return fields;
}

std::string require(int line, const std::unordered_map<std::string, std::string>& fields,
                    const std::string& key) {
    auto it = fields.find(key);
    if (it == fields.end()) fail(line, "missing field '" + key + "'");
    return it->second;
}

}  // namespace

NetworkSpec parse_network_text(const std::string& text) {
    NetworkSpec spec;
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream iss(line);
        std::string kind;
        if (!(iss >> kind)) continue;

        if (kind == "alpha") {
            std::string value;
            if (!(iss >> value)) fail(lineno, "alpha requires a value");
            spec.alpha = parse_number(lineno, "alpha", value);
            if (!(spec.alpha > 0.0)) fail(lineno, "alpha must be positive");
        } else if (kind == "vertex") {
            auto fields = parse_fields(lineno, iss);
            spec.vertices.push_back(require(lineno, fields, "id"));
        } else if (kind == "edge") {
            auto fields = parse_fields(lineno, iss);
            EdgeSpec e;
            e.id = require(lineno, fields, "id");
            e.tail = require(lineno, fields, "tail");
            e.head = require(lineno, fields, "head");
            e.length = parse_number(lineno, "length", require(lineno, fields, "length"));
            e.a = parse_number(lineno, "a", require(lineno, fields, "a"));
            e.b = parse_number(lineno, "b", require(lineno, fields, "b"));
            e.c = parse_number(lineno, "c", require(lineno, fields, "c"));
            spec.edges.push_back(std::move(e));
        } else {
            fail(lineno, "unknown record '" + kind + "'");
        }
    }
    return spec;
}

NetworkSpec parse_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open network file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network_text(buf.str());
}

std::string serialize_network(const NetworkSpec& spec) {
    std::ostringstream out;
    out << "alpha " << format_number(spec.alpha) << "\n";
    for (const auto& v : spec.vertices) out << "vertex id=" << v << "\n";
    for (const auto& e : spec.edges)
        out << "edge id=" << e.id << " tail=" << e.tail << " head=" << e.head
            << " length=" << format_number(e.length) << " a=" << format_number(e.a)
            << " b=" << format_number(e.b) << " c=" << format_number(e.c) << "\n";
    return out.str();
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace netwave
