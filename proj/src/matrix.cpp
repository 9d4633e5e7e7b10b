#include "genldpc/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "genldpc/rng.hpp"

namespace genldpc {

TemplateKind template_kind_from_string(const std::string& name) {
    if (name == "none" || name == "unstructured") return TemplateKind::Unstructured;
    if (name == "ira") return TemplateKind::Ira;
    if (name == "tbira") return TemplateKind::TbIra;
    if (name == "ptbira") return TemplateKind::PtbIra;
    throw std::invalid_argument("unknown template kind: " + name);
}

std::string to_string(TemplateKind kind) {
    switch (kind) {
        case TemplateKind::Unstructured: return "none";
        case TemplateKind::Ira: return "ira";
        case TemplateKind::TbIra: return "tbira";
        case TemplateKind::PtbIra: return "ptbira";
    }
    return "none";
}

std::vector<Edge> StructureTemplate::right_block_edges(int m) const {
    std::vector<Edge> edges;
    switch (kind) {
        case TemplateKind::Unstructured:
            break;
        case TemplateKind::Ira:
        case TemplateKind::TbIra:
            for (int j = 0; j < m; ++j) {
                edges.emplace_back(j, j);
                if (j + 1 < m) edges.emplace_back(j + 1, j);
            }
            if (kind == TemplateKind::TbIra) edges.emplace_back(0, m - 1);
            break;
        case TemplateKind::PtbIra: {
            if (m < 3) throw std::invalid_argument("ptbira template needs m >= 3");
            // first column weight three: top, middle, bottom rows
            edges.emplace_back(0, 0);
            edges.emplace_back((m + 1) / 2 - 1, 0);
            edges.emplace_back(m - 1, 0);
            // shifted dual diagonal over columns 1..m-1
            for (int c = 1; c < m; ++c) {
                edges.emplace_back(c - 1, c);
                edges.emplace_back(c, c);
            }
            break;
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

ParityCheckMatrix::ParityCheckMatrix(int m, int n, std::vector<Edge> edges,
                                     StructureTemplate tmpl)
    : m_(m), n_(n), tmpl_(tmpl), row_cols_(m), col_rows_(n) {
    if (m <= 0 || n <= 0) throw std::invalid_argument("matrix dimensions must be positive");
    if (tmpl_.fixes_right_block() && n_ <= m_)
        throw std::invalid_argument("structured template needs n > m");

    std::sort(edges.begin(), edges.end());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [j, i] = edges[e];
        if (j < 0 || j >= m || i < 0 || i >= n)
            throw std::out_of_range("edge index outside matrix");
        if (e > 0 && edges[e] == edges[e - 1])
            throw std::invalid_argument("duplicate edge in parity-check matrix");
        row_cols_[j].push_back(i);
        col_rows_[i].push_back(j);
    }
    edge_count_ = static_cast<long long>(edges.size());

    if (tmpl_.fixes_right_block()) {
        // the right m x m block must match the template bit-exactly
        std::vector<Edge> actual;
        const int off = left_cols();
        for (const auto& [j, i] : edges)
            if (i >= off) actual.emplace_back(j, i - off);
        if (actual != tmpl_.right_block_edges(m_))
            throw std::invalid_argument("right block does not match structure template");
    }

    rank_ = gf2_rank_packed(
        [&] {
            std::vector<std::vector<std::uint64_t>> rows(m_);
            for (int j = 0; j < m_; ++j) rows[j] = packed_row(j);
            return rows;
        }(),
        n_);
}

bool ParityCheckMatrix::has_edge(int j, int i) const {
    const auto& cols = row_cols_[j];
    return std::binary_search(cols.begin(), cols.end(), i);
}

bool ParityCheckMatrix::connected() const {
    for (const auto& r : row_cols_)
        if (r.empty()) return false;
    for (const auto& c : col_rows_)
        if (c.empty()) return false;
    return true;
}

std::vector<Edge> ParityCheckMatrix::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int j = 0; j < m_; ++j)
        for (int i : row_cols_[j]) out.emplace_back(j, i);
    return out;
}

ParityCheckMatrix ParityCheckMatrix::with_edge(int j, int i) const {
    if (has_edge(j, i)) throw std::invalid_argument("edge already present");
    auto e = edges();
    e.emplace_back(j, i);
    return ParityCheckMatrix(m_, n_, std::move(e), tmpl_);
}

ParityCheckMatrix ParityCheckMatrix::without_edge(int j, int i) const {
    if (!has_edge(j, i)) throw std::invalid_argument("edge not present");
    auto e = edges();
    e.erase(std::find(e.begin(), e.end(), Edge{j, i}));
    return ParityCheckMatrix(m_, n_, std::move(e), tmpl_);
}

std::vector<std::uint64_t> ParityCheckMatrix::packed_row(int j) const {
    std::vector<std::uint64_t> words(words_per_row(), 0);
    for (int i : row_cols_[j]) words[i >> 6] |= std::uint64_t{1} << (i & 63);
    return words;
}

int gf2_rank_packed(std::vector<std::vector<std::uint64_t>> rows, int n) {
    const int m = static_cast<int>(rows.size());
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        const int word = col >> 6;
        const std::uint64_t bit = std::uint64_t{1} << (col & 63);
        int pivot = -1;
        for (int r = rank; r < m; ++r) {
            if (rows[r][word] & bit) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = rank + 1; r < m; ++r) {
            if (rows[r][word] & bit) {
                for (std::size_t w = word; w < rows[r].size(); ++w)
                    rows[r][w] ^= rows[rank][w];
            }
        }
        ++rank;
    }
    return rank;
}

int gf2_rank(const ParityCheckMatrix& H) { return H.rank(); }

CodeProfile profile(const ParityCheckMatrix& H) {
    CodeProfile p;
    p.n = H.cols();
    p.m = H.rows();
    p.rank = H.rank();
    p.k = p.n - p.rank;
    p.actual_rate = static_cast<double>(p.k) / p.n;
    p.design_rate = static_cast<double>(p.n - p.m) / p.n;
    p.edge_count = H.edge_count();
    for (int i = 0; i < p.n; ++i) p.vn_degree_hist[static_cast<int>(H.col_support(i).size())]++;
    for (int j = 0; j < p.m; ++j) p.cn_degree_hist[static_cast<int>(H.row_support(j).size())]++;
    return p;
}

ParityCheckMatrix random_regular(int n, int vn_degree, int cn_degree, std::uint64_t seed) {
    if (n <= 0 || vn_degree <= 0 || cn_degree <= 0)
        throw std::invalid_argument("degrees and length must be positive");
    const long long sockets = static_cast<long long>(n) * vn_degree;
    if (sockets % cn_degree != 0)
        throw std::invalid_argument("n * vn_degree must be divisible by cn_degree");
    const int m = static_cast<int>(sockets / cn_degree);
    if (cn_degree > n || vn_degree > m)
        throw std::invalid_argument("infeasible degree pair");

    SplitRng rng(seed, 0x7265677265ULL);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        // check-side sockets in random order, paired with variable sockets
        std::vector<int> cn_sockets(static_cast<std::size_t>(sockets));
        for (std::size_t s = 0; s < cn_sockets.size(); ++s)
            cn_sockets[s] = static_cast<int>(s / cn_degree);
        for (std::size_t s = cn_sockets.size(); s > 1; --s)
            std::swap(cn_sockets[s - 1], cn_sockets[rng.below(s)]);

        std::vector<std::vector<char>> used(m, std::vector<char>(n, 0));
        std::vector<Edge> edges;
        edges.reserve(cn_sockets.size());
        bool failed = false;
        std::size_t next = 0;
        for (int i = 0; i < n && !failed; ++i) {
            for (int d = 0; d < vn_degree; ++d) {
                int row = cn_sockets[next];
                if (used[row][i]) {
                    // collision: swap in a non-colliding socket from the tail
                    bool fixed = false;
                    const std::size_t tail = cn_sockets.size() - next - 1;
                    for (int retry = 0; retry < 200 && tail > 0; ++retry) {
                        const std::size_t alt = next + 1 + rng.below(tail);
                        if (!used[cn_sockets[alt]][i]) {
                            std::swap(cn_sockets[next], cn_sockets[alt]);
                            row = cn_sockets[next];
                            fixed = true;
                            break;
                        }
                    }
                    if (!fixed) {
                        failed = true;
                        break;
                    }
                }
                used[row][i] = 1;
                edges.emplace_back(row, i);
                ++next;
            }
        }
        if (!failed) return ParityCheckMatrix(m, n, std::move(edges));
    }
    throw std::runtime_error("random_regular: could not resolve socket collisions");
}

ParityCheckMatrix apply_template(int m, int left_cols, const std::vector<Edge>& left_edges,
                                 const StructureTemplate& t) {
    if (!t.fixes_right_block())
        throw std::invalid_argument("apply_template requires a structured template");
    if (m <= 0 || left_cols <= 0) throw std::invalid_argument("bad dimensions");
    std::vector<Edge> edges;
    edges.reserve(left_edges.size() + 2 * static_cast<std::size_t>(m) + 1);
    for (const auto& [j, i] : left_edges) {
        if (j < 0 || j >= m || i < 0 || i >= left_cols)
            throw std::out_of_range("left edge outside H_L");
        edges.emplace_back(j, i);
    }
    for (const auto& [j, i] : t.right_block_edges(m)) edges.emplace_back(j, i + left_cols);
    return ParityCheckMatrix(m, left_cols + m, std::move(edges), t);
}

namespace {

// Shortest cycle through a given edge (check j, var i): remove the edge and
// BFS from the variable to the check; cycle length = path length + 1.
int cycle_through_edge(const ParityCheckMatrix& H, int j, int i) {
    const int n = H.cols();
    const int total = n + H.rows();  // vars 0..n-1, checks n..n+m-1
    std::vector<int> dist(total, -1);
    std::queue<int> queue;
    dist[i] = 0;
    queue.push(i);
    const int target = n + j;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop();
        if (u == target) return dist[u] + 1;
        if (u < n) {
            for (int c : H.col_support(u)) {
                if (u == i && c == j) continue;  // removed edge
                if (dist[n + c] < 0) {
                    dist[n + c] = dist[u] + 1;
                    queue.push(n + c);
                }
            }
        } else {
            const int c = u - n;
            for (int v : H.row_support(c)) {
                if (v == i && c == j) continue;
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue.push(v);
                }
            }
        }
    }
    return kNoCycle;
}

} // namespace

CycleReport girth_and_cycles(const ParityCheckMatrix& H) {
    CycleReport report;
    report.vn_shortest_cycle.assign(H.cols(), kNoCycle);
    for (int i = 0; i < H.cols(); ++i) {
        for (int j : H.col_support(i)) {
            const int len = cycle_through_edge(H, j, i);
            report.vn_shortest_cycle[i] = std::min(report.vn_shortest_cycle[i], len);
        }
        report.girth = std::min(report.girth, report.vn_shortest_cycle[i]);
    }
    // 4-cycles: column pairs shared by row pairs
    for (int a = 0; a < H.rows(); ++a) {
        for (int b = a + 1; b < H.rows(); ++b) {
            const auto& ra = H.row_support(a);
            const auto& rb = H.row_support(b);
            std::size_t ia = 0, ib = 0;
            long long shared = 0;
            while (ia < ra.size() && ib < rb.size()) {
                if (ra[ia] == rb[ib]) ++shared, ++ia, ++ib;
                else if (ra[ia] < rb[ib]) ++ia;
                else ++ib;
            }
            report.four_cycles += shared * (shared - 1) / 2;
        }
    }
    return report;
}

} // namespace genldpc
