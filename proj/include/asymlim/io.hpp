#pragma once

// Matrix JSON files: {"rows": n, "cols": n, "entries": [[re, im], ...]} in
// row-major order, doubles written with 17 significant digits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "asymlim/error.hpp"
#include "asymlim/linalg.hpp"

namespace asymlim {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string matrix_to_json(const ComplexMatrix& a) {
    require_finite(a, "matrix");
    std::string out = "{\"rows\": " + std::to_string(a.rows()) +
                      ", \"cols\": " + std::to_string(a.cols()) + ", \"entries\": [";
    bool first = true;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            if (!first) out += ", ";
            first = false;
            out += "[" + format_double(a(r, c).real()) + ", " + format_double(a(r, c).imag()) + "]";
        }
    out += "]}\n";
    return out;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& doc) {
    auto bad = [](const std::string& why) { return Error(ErrorKind::MalformedInput, why); };
    if (!doc.is_object()) throw bad("matrix document must be a JSON object");
    for (const char* key : {"rows", "cols", "entries"})
        if (!doc.contains(key)) throw bad(std::string("matrix document lacks \"") + key + "\"");
    if (!doc["rows"].is_number_unsigned() || !doc["cols"].is_number_unsigned())
        throw bad("\"rows\" and \"cols\" must be non-negative integers");
    const auto rows = doc["rows"].get<std::int64_t>();
    const auto cols = doc["cols"].get<std::int64_t>();
    const auto& entries = doc["entries"];
    if (!entries.is_array()) throw bad("\"entries\" must be an array");
    if (static_cast<std::int64_t>(entries.size()) != rows * cols)
        throw bad("rows*cols = " + std::to_string(rows * cols) + " but " +
                  std::to_string(entries.size()) + " entries given");
    ComplexMatrix a(rows, cols);
    std::size_t k = 0;
    for (std::int64_t r = 0; r < rows; ++r)
        for (std::int64_t c = 0; c < cols; ++c, ++k) {
            const auto& e = entries[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw bad("entry " + std::to_string(k) + " must be [re, im]");
            a(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    require_finite(a, "matrix");
    return a;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MalformedInput, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::MalformedInput, what + " is not valid JSON: " + e.what());
    }
}

inline ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
    return matrix_from_json(parse_json(read_text_file(path), path.string()));
}

/// Writes to a sibling temporary file, then renames over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::MalformedInput, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(ErrorKind::MalformedInput, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& a) {
    atomic_write(path, matrix_to_json(a));
}

}  // namespace asymlim
