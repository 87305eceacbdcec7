#include "heterosolve/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "heterosolve/errors.hpp"

namespace heterosolve::io {

namespace {

class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    // Next whitespace-delimited token; empty at end of input.
    std::string_view next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::size_t parse_count(std::string_view tok, const char* what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::Parse, std::string("bad ") + what + " in header: '" + std::string(tok) + "'");
    }
    return value;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_matrix(const DenseMatrix& m) {
    std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ' ';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

DenseMatrix parse_matrix(std::string_view text) {
    Tokenizer tok(text);
    const std::size_t rows = parse_count(tok.next(), "row count");
    const std::size_t cols = parse_count(tok.next(), "column count");
    if (rows == 0 || cols == 0) throw Error(ErrorCode::Parse, "matrix dimensions must be positive");

    std::vector<double> entries(rows * cols);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string_view t = tok.next();
        if (t.empty()) {
            throw Error(ErrorCode::Parse, "expected " + std::to_string(entries.size()) + " entries, found " +
                                              std::to_string(k));
        }
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), entries[k]);
        if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(entries[k])) {
            throw Error(ErrorCode::Parse, "line " + std::to_string(tok.line()) + ": bad entry '" + std::string(t) +
                                              "' at row " + std::to_string(k / cols) + ", column " +
                                              std::to_string(k % cols));
        }
    }
    if (!tok.next().empty()) throw Error(ErrorCode::Parse, "trailing data after " + std::to_string(rows * cols) + " entries");
    return DenseMatrix(rows, cols, std::move(entries));
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
    try {
        return parse_matrix(slurp(path));
    } catch (const Error& e) {
        // Re-prefix with the file name; drop the code tag Error already added.
        const std::string what = e.what();
        const std::size_t cut = what.find(": ");
        throw Error(e.code(), path.string() + ": " + (cut == std::string::npos ? what : what.substr(cut + 2)));
    }
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << format_matrix(m);
}

Vector read_vector(const std::filesystem::path& path) {
    const DenseMatrix m = read_matrix(path);
    if (m.cols() != 1 && m.rows() != 1) {
        throw Error(ErrorCode::Parse, path.string() + ": expected a vector, got " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
    }
    return Vector(m.entries().begin(), m.entries().end());
}

void write_vector(const std::filesystem::path& path, std::span<const double> v) {
    write_matrix(path, DenseMatrix::column(v));
}

}  // namespace heterosolve::io
