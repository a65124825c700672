#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cdd/pointcloud.hpp"

namespace cdd {

// File-format error carrying the offending path and 1-based line number
// (line 0 means the problem concerns the file as a whole).
struct ParseError : std::runtime_error {
    std::string path;
    std::size_t line;

    ParseError(std::string p, std::size_t l, const std::string& what)
        : std::runtime_error(l > 0 ? p + ":" + std::to_string(l) + ": " + what : p + ": " + what),
          path(std::move(p)),
          line(l) {}
};

// Shortest decimal string that round-trips back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Strict float token parse: the whole token must be consumed and the value
// must be finite (so "nan"/"inf" never sneak into a point cloud).
inline bool parse_double_token(std::string_view tok, double& out) {
    if (tok.empty()) return false;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return res.ec == std::errc{} && res.ptr == tok.data() + tok.size() && std::isfinite(out);
}

namespace detail {

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_char(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // all whitespace
}

}  // namespace detail

// XYZ: one point per line, three decimal floats separated by single spaces.
// The reader accepts arbitrary whitespace and skips blank lines and lines
// starting with '#'.
inline PointCloud read_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    PointCloud pc;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (detail::blank_or_comment(line)) continue;
        const auto toks = detail::split_ws(line);
        if (toks.size() != 3) {
            throw ParseError(path, lineno,
                             "expected 3 fields, got " + std::to_string(toks.size()));
        }
        Vec3 p;
        double* coords[3] = {&p.x, &p.y, &p.z};
        for (int i = 0; i < 3; ++i) {
            if (!parse_double_token(toks[i], *coords[i])) {
                throw ParseError(path, lineno, "invalid number '" + toks[i] + "'");
            }
        }
        pc.points.push_back(p);
    }
    if (pc.points.empty()) throw ParseError(path, 0, "file contains no points");
    return pc;
}

inline void write_xyz(const PointCloud& pc, const std::string& path) {
    validate(pc);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const Vec3& p : pc.points) {
        out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ASCII PLY, read-only: header "ply / format ascii 1.0 / element vertex N /
// property float x|y|z / end_header" followed by N vertex lines. Comments are
// allowed in the header; any other element or property is rejected.
inline PointCloud read_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        detail::strip_cr(line);
        return true;
    };

    if (!next_line() || line != "ply") throw ParseError(path, lineno ? lineno : 1, "missing 'ply' magic");

    bool have_format = false;
    bool in_vertex_element = false;
    std::size_t vertex_count = 0;
    std::vector<std::string> props;
    bool header_done = false;
    while (next_line()) {
        const auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "comment") continue;
        if (toks[0] == "format") {
            if (toks.size() != 3 || toks[1] != "ascii" || toks[2] != "1.0") {
                throw ParseError(path, lineno, "only 'format ascii 1.0' is supported");
            }
            have_format = true;
        } else if (toks[0] == "element") {
            if (toks.size() != 3 || toks[1] != "vertex") {
                throw ParseError(path, lineno, "unsupported element (only 'element vertex')");
            }
            if (in_vertex_element) throw ParseError(path, lineno, "duplicate vertex element");
            std::size_t n = 0;
            const auto& tok = toks[2];
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), n);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
                throw ParseError(path, lineno, "invalid vertex count '" + tok + "'");
            }
            vertex_count = n;
            in_vertex_element = true;
        } else if (toks[0] == "property") {
            if (!in_vertex_element) throw ParseError(path, lineno, "property outside vertex element");
            if (toks.size() != 3 || (toks[1] != "float" && toks[1] != "double")) {
                throw ParseError(path, lineno, "unsupported property type");
            }
            props.push_back(toks[2]);
        } else if (toks[0] == "end_header") {
            header_done = true;
            break;
        } else {
            throw ParseError(path, lineno, "unrecognized header line '" + toks[0] + "'");
        }
    }
    if (!header_done) throw ParseError(path, 0, "missing end_header");
    if (!have_format) throw ParseError(path, 0, "missing format line");
    if (!in_vertex_element) throw ParseError(path, 0, "missing vertex element");
    if (props != std::vector<std::string>{"x", "y", "z"}) {
        throw ParseError(path, 0, "vertex properties must be exactly x, y, z");
    }
    if (vertex_count == 0) throw ParseError(path, 0, "vertex element is empty");

    PointCloud pc;
    pc.points.reserve(vertex_count);
    while (pc.points.size() < vertex_count) {
        if (!next_line()) throw ParseError(path, lineno, "unexpected end of file in vertex data");
        const auto toks = detail::split_ws(line);
        if (toks.size() != 3) {
            throw ParseError(path, lineno,
                             "expected 3 fields, got " + std::to_string(toks.size()));
        }
        Vec3 p;
        double* coords[3] = {&p.x, &p.y, &p.z};
        for (int i = 0; i < 3; ++i) {
            if (!parse_double_token(toks[i], *coords[i])) {
                throw ParseError(path, lineno, "invalid number '" + toks[i] + "'");
            }
        }
        pc.points.push_back(p);
    }
    return pc;
}

}  // namespace cdd
