// io.hpp
// Deterministic serialization helpers: every number is written with 17
// significant digits so identical runs produce byte-identical files and
// downstream diffs are meaningful.

#pragma once

#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qst::io {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt(bool v) { return v ? "true" : "false"; }

inline std::string fmt(std::size_t v) { return std::to_string(v); }

// JSON [re, im] pair for one complex amplitude.
inline std::string fmt(std::complex<double> v) {
    return "[" + fmt(v.real()) + ", " + fmt(v.imag()) + "]";
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    try {
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return content;
    } catch (const std::ios_base::failure&) {
        // Opening a directory succeeds on POSIX; the failure surfaces on read.
        throw std::runtime_error("cannot read file: " + path);
    }
}

}  // namespace qst::io
