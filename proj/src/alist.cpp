#include "genldpc/alist.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace genldpc {

namespace {

struct LineReader {
    std::istringstream stream;
    int line_no = 0;
    std::string current;

    explicit LineReader(const std::string& text) : stream(text) {}

    // next non-empty line, split into integer tokens
    std::vector<long long> next_ints(const char* what) {
        while (std::getline(stream, current)) {
            ++line_no;
            std::vector<long long> out;
            const char* p = current.data();
            const char* end = p + current.size();
            while (p < end) {
                while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
                if (p >= end) break;
                long long value = 0;
                auto [next, ec] = std::from_chars(p, end, value);
                if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t' && *next != '\r'))
                    throw AlistError(std::string("expected integer in ") + what, line_no);
                out.push_back(value);
                p = next;
            }
            if (!out.empty()) return out;
        }
        throw AlistError(std::string("unexpected end of file, missing ") + what, line_no);
    }
};

// one index line: exactly `weight` distinct 1-based entries in [1, limit],
// optionally padded with zeros up to max_weight
std::vector<int> parse_index_line(const std::vector<long long>& tokens, int weight,
                                  int max_weight, int limit, const char* what, int line_no) {
    if (static_cast<int>(tokens.size()) > max_weight)
        throw AlistError(std::string(what) + " lists more entries than the declared maximum",
                         line_no);
    std::vector<int> indices;
    bool in_padding = false;
    for (long long t : tokens) {
        if (t == 0) {
            in_padding = true;
            continue;
        }
        if (in_padding)
            throw AlistError(std::string(what) + " has a nonzero entry after zero padding",
                             line_no);
        if (t < 1 || t > limit)
            throw AlistError(std::string(what) + " index " + std::to_string(t) +
                                 " out of range [1, " + std::to_string(limit) + "]",
                             line_no);
        indices.push_back(static_cast<int>(t) - 1);
    }
    if (static_cast<int>(indices.size()) != weight)
        throw AlistError(std::string(what) + " lists " + std::to_string(indices.size()) +
                             " entries but declares weight " + std::to_string(weight),
                         line_no);
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw AlistError(std::string(what) + " contains a duplicate index", line_no);
    return indices;
}

} // namespace

ParityCheckMatrix parse_alist(const std::string& text) {
    LineReader reader(text);

    const auto header = reader.next_ints("header \"n m\"");
    if (header.size() != 2) throw AlistError("header must be exactly \"n m\"", reader.line_no);
    const long long n = header[0], m = header[1];
    if (n <= 0 || m <= 0) throw AlistError("n and m must be positive", reader.line_no);
    if (n > 1000000 || m > 1000000) throw AlistError("implausibly large dimensions", reader.line_no);

    const auto maxima = reader.next_ints("maximum weights");
    if (maxima.size() != 2) throw AlistError("expected \"max_col_weight max_row_weight\"", reader.line_no);
    const long long max_col = maxima[0], max_row = maxima[1];
    if (max_col < 0 || max_col > m || max_row < 0 || max_row > n)
        throw AlistError("maximum weights out of range", reader.line_no);

    const auto col_weights = reader.next_ints("column weights");
    if (static_cast<long long>(col_weights.size()) != n)
        throw AlistError("expected " + std::to_string(n) + " column weights", reader.line_no);
    const auto row_weights = reader.next_ints("row weights");
    if (static_cast<long long>(row_weights.size()) != m)
        throw AlistError("expected " + std::to_string(m) + " row weights", reader.line_no);

    long long col_edge_total = 0, row_edge_total = 0;
    for (long long w : col_weights) {
        if (w < 0 || w > max_col)
            throw AlistError("column weight outside [0, max_col_weight]", reader.line_no);
        col_edge_total += w;
    }
    for (long long w : row_weights) {
        if (w < 0 || w > max_row)
            throw AlistError("row weight outside [0, max_row_weight]", reader.line_no);
        row_edge_total += w;
    }
    if (col_edge_total != row_edge_total)
        throw AlistError("column and row weights disagree on the edge count", reader.line_no);

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(col_edge_total));
    for (long long i = 0; i < n; ++i) {
        const auto tokens = reader.next_ints("column index line");
        const auto rows = parse_index_line(tokens, static_cast<int>(col_weights[i]),
                                           static_cast<int>(max_col), static_cast<int>(m),
                                           "column entry list", reader.line_no);
        for (int j : rows) edges.emplace_back(j, static_cast<int>(i));
    }

    std::vector<Edge> row_edges;
    row_edges.reserve(static_cast<std::size_t>(row_edge_total));
    for (long long j = 0; j < m; ++j) {
        const auto tokens = reader.next_ints("row index line");
        const auto cols = parse_index_line(tokens, static_cast<int>(row_weights[j]),
                                           static_cast<int>(max_row), static_cast<int>(n),
                                           "row entry list", reader.line_no);
        for (int i : cols) row_edges.emplace_back(static_cast<int>(j), i);
    }

    std::sort(edges.begin(), edges.end());
    std::sort(row_edges.begin(), row_edges.end());
    if (edges != row_edges)
        throw AlistError("column and row sections describe different matrices", reader.line_no);

    return ParityCheckMatrix(static_cast<int>(m), static_cast<int>(n), std::move(edges));
}

std::string format_alist(const ParityCheckMatrix& H) {
    const int n = H.cols(), m = H.rows();
    int max_col = 1, max_row = 1;  // at least one token per index line
    for (int i = 0; i < n; ++i) max_col = std::max(max_col, static_cast<int>(H.col_support(i).size()));
    for (int j = 0; j < m; ++j) max_row = std::max(max_row, static_cast<int>(H.row_support(j).size()));

    std::ostringstream out;
    out << n << " " << m << "\n" << max_col << " " << max_row << "\n";
    for (int i = 0; i < n; ++i) out << H.col_support(i).size() << (i + 1 < n ? " " : "\n");
    for (int j = 0; j < m; ++j) out << H.row_support(j).size() << (j + 1 < m ? " " : "\n");
    for (int i = 0; i < n; ++i) {
        const auto& rows = H.col_support(i);
        for (int d = 0; d < max_col; ++d)
            out << (d < static_cast<int>(rows.size()) ? rows[d] + 1 : 0) << (d + 1 < max_col ? " " : "\n");
    }
    for (int j = 0; j < m; ++j) {
        const auto& cols = H.row_support(j);
        for (int d = 0; d < max_row; ++d)
            out << (d < static_cast<int>(cols.size()) ? cols[d] + 1 : 0) << (d + 1 < max_row ? " " : "\n");
    }
    return out.str();
}

ParityCheckMatrix read_alist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw AlistError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_alist(buffer.str());
}

void write_alist(const ParityCheckMatrix& H, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_alist(H);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace genldpc
