#include "tsfcde/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "tsfcde/errors.hpp"

namespace tsfcde::csv {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) {
        throw std::runtime_error("failed to format floating-point value");
    }
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell)
{
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || cell.empty()) {
        throw std::invalid_argument("not a number: '" + cell + "'");
    }
    return v;
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

namespace {

void write_row(std::ostream& os, std::span<const double> values)
{
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k > 0) {
            os << ',';
        }
        os << format_double(values[k]);
    }
    os << '\n';
}

std::string optional_cell(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

std::optional<double> parse_optional(const std::string& cell)
{
    if (cell.empty()) {
        return std::nullopt;
    }
    return parse_double(cell);
}

void write_levels(std::ostream& os, const SolutionHistory& hist, const Grid& g, std::size_t first)
{
    const std::size_t n = g.interior();
    for (std::size_t j = first; j < hist.levels.size(); ++j) {
        if (hist.levels[j].size() != n) {
            throw DimensionError("solution level does not match the grid");
        }
    }
    std::vector<double> row;
    for (int i = 0; i <= g.N; ++i) {
        row.clear();
        row.push_back(g.x(i));
        for (std::size_t j = first; j < hist.levels.size(); ++j) {
            const bool boundary = i == 0 || i == g.N;
            row.push_back(boundary ? 0.0 : hist.levels[j][static_cast<std::size_t>(i - 1)]);
        }
        write_row(os, row);
    }
}

}  // namespace

void write_history(std::ostream& os, const SolutionHistory& hist, const Grid& g)
{
    os << 'x';
    for (std::size_t j = 0; j < hist.levels.size(); ++j) {
        os << ",u" << j;
    }
    os << '\n';
    write_levels(os, hist, g, 0);
}

void write_solution(std::ostream& os, const SolutionHistory& hist, const Grid& g)
{
    if (hist.levels.empty()) {
        throw DimensionError("no solution levels to write");
    }
    os << "x,u\n";
    write_levels(os, hist, g, hist.levels.size() - 1);
}

ParsedHistory read_history(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error("empty solution file");
    }
    const auto header = split_line(line);
    if (header.size() < 2 || header[0] != "x") {
        throw std::runtime_error("solution file header must start with 'x'");
    }
    const std::size_t levels = header.size() - 1;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("solution row has the wrong number of cells");
        }
        std::vector<double> vals;
        vals.reserve(cells.size());
        for (const auto& c : cells) {
            vals.push_back(parse_double(c));
        }
        rows.push_back(std::move(vals));
    }
    if (rows.size() < 3) {
        throw std::runtime_error("solution file needs at least three rows");
    }
    ParsedHistory out;
    out.hist.levels.assign(levels, std::vector<double>(rows.size() - 2));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.x.push_back(rows[r][0]);
        if (r == 0 || r + 1 == rows.size()) {
            continue;
        }
        for (std::size_t j = 0; j < levels; ++j) {
            out.hist.levels[j][r - 1] = rows[r][j + 1];
        }
    }
    return out;
}

void write_matrix(std::ostream& os, const DenseMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        write_row(os, m.row(i));
    }
}

DenseMatrix read_matrix(std::istream& is)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> vals;
        for (const auto& c : split_line(line)) {
            vals.push_back(parse_double(c));
        }
        if (!rows.empty() && vals.size() != rows.front().size()) {
            throw std::runtime_error("ragged matrix file");
        }
        rows.push_back(std::move(vals));
    }
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    DenseMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

void write_residuals(std::ostream& os, const SolveReport& rep)
{
    os << "iteration,relative_residual\n";
    for (std::size_t k = 0; k < rep.residual_history.size(); ++k) {
        os << k << ',' << format_double(rep.residual_history[k]) << '\n';
    }
}

void write_weights(std::ostream& os, const SpatialWeights& sw, const TimeWeights& tw, std::size_t K)
{
    os << kWeightsHeader << '\n';
    for (std::size_t k = 0; k <= K; ++k) {
        os << k << ',' << format_double(sw.g.at(k)) << ',' << format_double(sw.omega.at(k)) << ',';
        if (k < tw.a.size()) {
            os << format_double(tw.a[k]);
        }
        os << ',';
        if (k < tw.b.size()) {
            os << format_double(tw.b[k]);
        }
        os << '\n';
    }
}

void write_convergence(std::ostream& os, const std::vector<ConvergenceRow>& rows)
{
    os << kConvergenceHeader << '\n';
    for (const auto& r : rows) {
        os << format_double(r.alpha) << ',' << format_double(r.beta) << ',' << format_double(r.h) << ','
           << format_double(r.tau) << ',' << format_double(r.l2_error) << ',' << optional_cell(r.l2_order) << ','
           << format_double(r.max_error) << ',' << optional_cell(r.max_order) << '\n';
    }
}

std::vector<ConvergenceRow> read_convergence(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != kConvergenceHeader) {
        throw std::runtime_error("convergence file header mismatch");
    }
    std::vector<ConvergenceRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto c = split_line(line);
        if (c.size() != 8) {
            throw std::runtime_error("convergence row must have 8 cells");
        }
        ConvergenceRow r;
        r.alpha = parse_double(c[0]);
        r.beta = parse_double(c[1]);
        r.h = parse_double(c[2]);
        r.tau = parse_double(c[3]);
        r.l2_error = parse_double(c[4]);
        r.l2_order = parse_optional(c[5]);
        r.max_error = parse_double(c[6]);
        r.max_order = parse_optional(c[7]);
        rows.push_back(r);
    }
    return rows;
}

void write_bench(std::ostream& os, const std::vector<BenchmarkRecord>& rows)
{
    os << kBenchHeader << '\n';
    for (const auto& r : rows) {
        os << r.N << ',' << r.M << ',' << format_double(r.time_dense_s) << ',' << format_double(r.time_fast_s)
           << ',' << format_double(r.speedup) << ',' << format_double(r.iterations.mean) << ','
           << r.iterations.max << '\n';
    }
}

void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& emit)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
            }
            emit(out);
            out.flush();
            if (!out) {
                throw std::runtime_error("write to '" + tmp.string() + "' failed");
            }
        }
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

}  // namespace tsfcde::csv
