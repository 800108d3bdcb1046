#include "jtri/io.hpp"

#include "jtri/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace jtri {

namespace {

std::vector<std::string> tokenize(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            tokens.push_back(tok);
        }
    }
    return tokens;
}

double to_double(const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) {
        throw ParseError("not a finite number: '" + tok + "'");
    }
    return v;
}

std::size_t to_dim(const std::string& tok) {
    const double v = to_double(tok);
    if (v < 1.0 || v != std::floor(v) || v > 1e6) {
        throw ParseError("invalid matrix dimension '" + tok + "'");
    }
    return static_cast<std::size_t>(v);
}

} // namespace

std::vector<ComplexMatrix> read_matrices(std::istream& in) {
    const auto tokens = tokenize(in);
    std::vector<ComplexMatrix> out;
    std::size_t pos = 0;
    while (pos < tokens.size()) {
        if (pos + 2 > tokens.size()) {
            throw ParseError("truncated matrix header");
        }
        const std::size_t rows = to_dim(tokens[pos]);
        const std::size_t cols = to_dim(tokens[pos + 1]);
        pos += 2;
        const std::size_t needed = 2 * rows * cols;
        if (tokens.size() - pos < needed) {
            throw ParseError("matrix " + std::to_string(out.size() + 1) + " expects " + std::to_string(needed) +
                             " numbers, found " + std::to_string(tokens.size() - pos));
        }
        std::vector<Complex> entries(rows * cols);
        for (auto& e : entries) {
            e = Complex(to_double(tokens[pos]), to_double(tokens[pos + 1]));
            pos += 2;
        }
        out.emplace_back(rows, cols, std::move(entries));
    }
    return out;
}

std::vector<ComplexMatrix> read_matrices_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_matrices(in);
}

std::vector<ComplexMatrix> read_matrices_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open input file '" + path + "'");
    }
    return read_matrices(in);
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out << (j == 0 ? "" : "  ") << m(i, j).real() << ' ' << m(i, j).imag();
        }
        out << '\n';
    }
}

} // namespace jtri
