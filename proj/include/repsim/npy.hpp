#pragma once

// Reader/writer for the subset of the NumPy .npy format used by bundles:
// little-endian float32 or float64, C order, any rank.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "repsim/error.hpp"

namespace repsim::npy {

struct Array {
    std::vector<std::size_t> shape;
    std::vector<double> values;  // C order, widened to 64-bit

    std::size_t size() const {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    }
};

namespace detail {

inline constexpr char magic[] = "\x93NUMPY";
inline constexpr std::size_t magic_len = 6;

template <class T>
T load_le(const unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(p[i]) << (8 * i);
    return std::bit_cast<T>(u);
}

template <class T>
void store_le(T value, std::string& out) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U u = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

/// Value text following `'key':` in the header dict, up to the next top-level comma.
inline std::string dict_value(const std::string& header, const std::string& key, const std::string& where) {
    const std::string needle = "'" + key + "'";
    auto pos = header.find(needle);
    if (pos == std::string::npos) fail(ErrorKind::io, where + ": header has no " + needle);
    pos = header.find(':', pos + needle.size());
    if (pos == std::string::npos) fail(ErrorKind::io, where + ": malformed header");
    ++pos;
    while (pos < header.size() && std::isspace(static_cast<unsigned char>(header[pos]))) ++pos;
    std::size_t end = pos;
    int depth = 0;
    while (end < header.size()) {
        const char c = header[end];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == ',' || c == '}') && depth == 0) break;
        ++end;
    }
    std::string v = header.substr(pos, end - pos);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
    return v;
}

inline std::vector<std::size_t> parse_shape(const std::string& text, const std::string& where) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        fail(ErrorKind::io, where + ": malformed shape " + text);
    std::vector<std::size_t> shape;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            shape.push_back(static_cast<std::size_t>(v));
        } catch (...) {
            fail(ErrorKind::io, where + ": malformed shape entry '" + token + "'");
        }
        token.clear();
    };
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        const char c = text[i];
        if (c == ',') flush();
        else if (!std::isspace(static_cast<unsigned char>(c))) token.push_back(c);
    }
    flush();
    return shape;
}

} // namespace detail

/// Parse an in-memory .npy image. `where` names the source in error messages.
inline Array parse(const std::string& bytes, const std::string& where = "<npy>") {
    using namespace detail;
    if (bytes.size() < magic_len + 4 || bytes.compare(0, magic_len, magic, magic_len) != 0)
        fail(ErrorKind::io, where + ": not an NPY file");
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    const unsigned major = raw[6];
    std::size_t header_len = 0;
    std::size_t offset = 0;
    if (major == 1) {
        header_len = raw[8] | (raw[9] << 8);
        offset = 10;
    } else if (major == 2 || major == 3) {
        if (bytes.size() < 12) fail(ErrorKind::io, where + ": truncated header");
        header_len = load_le<std::uint32_t>(raw + 8);
        offset = 12;
    } else {
        fail(ErrorKind::io, where + ": unsupported NPY version " + std::to_string(major));
    }
    if (bytes.size() < offset + header_len) fail(ErrorKind::io, where + ": truncated header");
    const std::string header = bytes.substr(offset, header_len);

    const std::string descr = dict_value(header, "descr", where);
    std::size_t width = 0;
    if (descr == "'<f8'") width = 8;
    else if (descr == "'<f4'") width = 4;
    else fail(ErrorKind::io, where + ": unsupported dtype " + descr + " (expected '<f4' or '<f8')");

    if (dict_value(header, "fortran_order", where) != "False")
        fail(ErrorKind::io, where + ": Fortran-ordered arrays are not supported");

    Array out;
    out.shape = parse_shape(dict_value(header, "shape", where), where);
    const std::size_t n = out.size();
    const std::size_t data_offset = offset + header_len;
    if (bytes.size() - data_offset != n * width)
        fail(ErrorKind::io, where + ": payload holds " + std::to_string(bytes.size() - data_offset) +
                                " bytes, shape requires " + std::to_string(n * width));
    out.values.resize(n);
    const unsigned char* p = raw + data_offset;
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = width == 8 ? load_le<double>(p + 8 * i)
                                   : static_cast<double>(load_le<float>(p + 4 * i));
    }
    return out;
}

inline Array read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(ErrorKind::io, "read failure on " + path.string());
    return parse(bytes, path.string());
}

/// Serialize as version 1.0, '<f8', C order; header padded to a 64-byte boundary.
inline std::string serialize(const Array& array) {
    if (array.values.size() != array.size())
        fail(ErrorKind::validation, "npy: value count does not match shape");
    std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (";
    for (std::size_t i = 0; i < array.shape.size(); ++i) {
        dict += std::to_string(array.shape[i]);
        if (i + 1 < array.shape.size() || array.shape.size() == 1) dict += ",";
        if (i + 1 < array.shape.size()) dict += " ";
    }
    dict += "), }";
    const std::size_t unpadded = detail::magic_len + 4 + dict.size() + 1;
    const std::size_t padding = (64 - unpadded % 64) % 64;
    dict.append(padding, ' ');
    dict.push_back('\n');

    std::string out(detail::magic, detail::magic_len);
    out.push_back(1);
    out.push_back(0);
    out.push_back(static_cast<char>(dict.size() & 0xff));
    out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
    out += dict;
    out.reserve(out.size() + 8 * array.values.size());
    for (double v : array.values) detail::store_le(v, out);
    return out;
}

inline void write(const std::filesystem::path& path, const Array& array) {
    const std::string bytes = serialize(array);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot create " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, "write failure on " + path.string());
}

} // namespace repsim::npy
