#include "scholqr/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "scholqr/errors.hpp"

namespace scholqr {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
    T value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(line_no, "malformed number '" + std::string(token) + "'");
    }
    return value;
}

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // Next non-blank, non-comment line; false at EOF.
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '%') continue;
            return true;
        }
        return false;
    }
};

}  // namespace

DenseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(1, "empty input");
    }
    const auto header = split(line);
    if (header.size() != 5 || lowercase(std::string(header[0])) != "%%matrixmarket" ||
        lowercase(std::string(header[1])) != "matrix") {
        throw ParseError(1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'");
    }
    const std::string layout = lowercase(std::string(header[2]));
    const std::string field = lowercase(std::string(header[3]));
    const std::string symmetry = lowercase(std::string(header[4]));
    if (layout != "array" && layout != "coordinate") {
        throw ParseError(1, "unknown layout '" + layout + "'");
    }
    if (field == "complex" || field == "pattern") {
        throw UnsupportedField("Matrix Market field '" + field + "' is not supported");
    }
    if (field != "real" && field != "double" && field != "integer") {
        throw ParseError(1, "unknown field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw UnsupportedField("Matrix Market symmetry '" + symmetry + "' is not supported");
    }
    const bool symmetric = symmetry == "symmetric";

    LineReader reader{in, 1};
    if (!reader.next(line)) {
        throw ParseError(reader.line_no + 1, "missing size line");
    }
    const auto size_tokens = split(line);
    const std::size_t expected = layout == "array" ? 2 : 3;
    if (size_tokens.size() != expected) {
        throw ParseError(reader.line_no, "size line needs " + std::to_string(expected) + " fields");
    }
    const auto rows = parse_number<std::size_t>(size_tokens[0], reader.line_no);
    const auto cols = parse_number<std::size_t>(size_tokens[1], reader.line_no);
    if (symmetric && rows != cols) {
        throw ParseError(reader.line_no, "symmetric matrix must be square");
    }
    DenseMatrix x(rows, cols);

    if (layout == "array") {
        // Column-major; symmetric files list the lower triangle only.
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
                if (!reader.next(line)) {
                    throw ParseError(reader.line_no + 1, "unexpected end of array data");
                }
                const auto tok = split(line);
                if (tok.size() != 1) {
                    throw ParseError(reader.line_no, "array entry needs exactly one value");
                }
                const double v = parse_number<double>(tok[0], reader.line_no);
                x(i, j) = v;
                if (symmetric) x(j, i) = v;
            }
        }
    } else {
        const auto nnz = parse_number<std::size_t>(size_tokens[2], reader.line_no);
        for (std::size_t e = 0; e < nnz; ++e) {
            if (!reader.next(line)) {
                throw ParseError(reader.line_no + 1, "expected " + std::to_string(nnz) +
                                                         " entries, found " + std::to_string(e));
            }
            const auto tok = split(line);
            if (tok.size() != 3) {
                throw ParseError(reader.line_no, "coordinate entry needs 'row col value'");
            }
            const auto i = parse_number<std::size_t>(tok[0], reader.line_no);
            const auto j = parse_number<std::size_t>(tok[1], reader.line_no);
            const double v = parse_number<double>(tok[2], reader.line_no);
            if (i < 1 || i > rows || j < 1 || j > cols) {
                throw ParseError(reader.line_no, "index out of range");
            }
            x(i - 1, j - 1) += v;
            if (symmetric && i != j) x(j - 1, i - 1) += v;
        }
    }
    if (reader.next(line)) {
        throw ParseError(reader.line_no, "trailing data after the last entry");
    }
    if (!x.all_finite()) {
        throw ParseError(reader.line_no, "non-finite value in matrix data");
    }
    return x;
}

DenseMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return read_matrix_market(in);
}

void write_matrix_market(const DenseMatrix& x, std::ostream& out, MmLayout layout) {
    if (layout == MmLayout::Array) {
        out << "%%MatrixMarket matrix array real general\n";
        out << x.rows() << ' ' << x.cols() << '\n';
        for (double v : x.data()) {
            out << fmt::format("{:.17g}\n", v);
        }
    } else {
        std::size_t nnz = 0;
        for (double v : x.data()) nnz += v != 0.0;
        out << "%%MatrixMarket matrix coordinate real general\n";
        out << x.rows() << ' ' << x.cols() << ' ' << nnz << '\n';
        for (std::size_t j = 0; j < x.cols(); ++j) {
            for (std::size_t i = 0; i < x.rows(); ++i) {
                if (x(i, j) != 0.0) {
                    out << fmt::format("{} {} {:.17g}\n", i + 1, j + 1, x(i, j));
                }
            }
        }
    }
}

void write_matrix_market(const DenseMatrix& x, const std::filesystem::path& path,
                         MmLayout layout) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_matrix_market(x, out, layout);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

}  // namespace scholqr
