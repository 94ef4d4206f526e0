#pragma once

// Shared error types and small utilities used across the pipeline.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace setd {

// Bad input data or a violated validation rule. Maps to exit code 3 in the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A broken internal invariant, i.e. a bug. Maps to exit code 4 in the CLI.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// FNV-1a, 64 bit. Used for content hashes embedded in output metadata.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

// Splits on a single separator, keeping empty fields. "a\t\tb" -> {"a","","b"}.
inline std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// Renders pos/total rounded half-up to 3 decimals using integer arithmetic only,
// e.g. 138/225 -> "0.613".
inline std::string format_share(std::size_t pos, std::size_t total) {
    if (total == 0) return "0.000";
    std::uint64_t milli = (2000ull * pos + total) / (2ull * total);
    std::string frac = std::to_string(milli % 1000);
    frac.insert(0, 3 - frac.size(), '0');
    return std::to_string(milli / 1000) + "." + frac;
}

// True when two ascending index lists share an element.
inline bool sorted_intersects(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) ++i; else ++j;
    }
    return false;
}

} // namespace setd
