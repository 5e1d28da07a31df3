#pragma once

#include "cspgemm/csr.hpp"
#include "cspgemm/permutation.hpp"
#include "cspgemm/types.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cspgemm {

namespace detail {

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] inline void parse_fail(const std::string& path, std::size_t line_no,
                                    const std::string& msg) {
    throw io_error(path + ":" + std::to_string(line_no) + ": " + msg);
}

inline bool blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace detail

/// Reads a Matrix Market coordinate file into COO form. Supports real,
/// integer and pattern fields with general or symmetric symmetry. Symmetric
/// files are expanded to both triangles (diagonal entries are not
/// duplicated); pattern entries get value 1.0. Indices are converted from
/// the file's 1-based convention to 0-based.
inline CooMatrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) detail::parse_fail(path, line_no, "empty file");
    // Strip a UTF-8 BOM and Windows line endings.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket")
        detail::parse_fail(path, line_no, "missing %%MatrixMarket banner");
    object = detail::lower(object);
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (object != "matrix") detail::parse_fail(path, line_no, "unsupported object '" + object + "'");
    if (format != "coordinate")
        detail::parse_fail(path, line_no, "unsupported format '" + format + "' (coordinate only)");
    const bool pattern = field == "pattern";
    if (field != "real" && field != "integer" && !pattern)
        detail::parse_fail(path, line_no, "unsupported field '" + field + "'");
    const bool symmetric = symmetry == "symmetric";
    if (symmetry != "general" && !symmetric)
        detail::parse_fail(path, line_no, "unsupported symmetry '" + symmetry + "'");

    // Skip comments and blank lines up to the size line.
    long long nrows = -1, ncols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '%') continue;
        if (detail::blank(line)) continue;
        std::istringstream sz(line);
        if (!(sz >> nrows >> ncols >> nnz) || nrows < 0 || ncols < 0 || nnz < 0)
            detail::parse_fail(path, line_no, "malformed size line '" + line + "'");
        break;
    }
    if (nrows < 0) detail::parse_fail(path, line_no, "missing size line");

    CooMatrix m;
    m.nrows = static_cast<index_t>(nrows);
    m.ncols = static_cast<index_t>(ncols);
    m.entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));

    long long seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line))
            detail::parse_fail(path, line_no + 1,
                               "unexpected end of file: expected " + std::to_string(nnz) +
                                   " entries, got " + std::to_string(seen));
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::blank(line) || line[0] == '%') continue;

        std::istringstream es(line);
        long long r = 0, c = 0;
        double v = 1.0;
        if (!(es >> r >> c)) detail::parse_fail(path, line_no, "malformed entry '" + line + "'");
        if (!pattern && !(es >> v))
            detail::parse_fail(path, line_no, "missing value in entry '" + line + "'");
        if (r < 1 || r > nrows)
            detail::parse_fail(path, line_no,
                               "row index " + std::to_string(r) + " out of bounds [1, " +
                                   std::to_string(nrows) + "]");
        if (c < 1 || c > ncols)
            detail::parse_fail(path, line_no,
                               "col index " + std::to_string(c) + " out of bounds [1, " +
                                   std::to_string(ncols) + "]");
        const index_t row = static_cast<index_t>(r - 1);
        const index_t col = static_cast<index_t>(c - 1);
        m.entries.push_back({row, col, v});
        if (symmetric && row != col) m.entries.push_back({col, row, v});
        ++seen;
    }
    return m;
}

/// Writes a CSR matrix as a general real coordinate Matrix Market file.
inline void write_matrix_market(const CsrMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.nrows << ' ' << a.ncols << ' ' << a.nnz() << '\n';
    char buf[64];
    for (index_t i = 0; i < a.nrows; ++i) {
        for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, a.col_idx[p] + 1, a.values[p]);
            out << buf;
        }
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

/// Reads a permutation file: one integer per line, line k holding
/// perm[k]. Validates length and bijectivity.
inline Permutation load_permutation(const std::string& path, index_t nrows) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::vector<index_t> perm;
    perm.reserve(static_cast<std::size_t>(nrows));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::blank(line)) continue;
        long long v = 0;
        std::istringstream is(line);
        if (!(is >> v)) detail::parse_fail(path, line_no, "not an integer: '" + line + "'");
        perm.push_back(static_cast<index_t>(v));
    }
    if (perm.size() != static_cast<std::size_t>(nrows))
        throw io_error(path + ": permutation length " + std::to_string(perm.size()) +
                       " does not match matrix rows " + std::to_string(nrows));
    try {
        return Permutation::from_perm(std::move(perm));
    } catch (const contract_error& e) {
        throw io_error(path + ": " + e.what());
    }
}

inline void write_permutation(const Permutation& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    for (index_t k = 0; k < p.size; ++k) out << p.perm[k] << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

} // namespace cspgemm
