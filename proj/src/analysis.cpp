#include "genldpc/analysis.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "genldpc/decoder.hpp"

namespace genldpc {

namespace {

int weight_of(const std::vector<std::uint64_t>& words) {
    int w = 0;
    for (std::uint64_t word : words) w += std::popcount(word);
    return w;
}

bool get_bit(const std::vector<std::uint64_t>& words, int i) {
    return (words[i >> 6] >> (i & 63)) & 1u;
}

void set_bit(std::vector<std::uint64_t>& words, int i) {
    words[i >> 6] |= std::uint64_t{1} << (i & 63);
}

struct Rref {
    std::vector<std::vector<std::uint64_t>> rows;  // reduced rows, rank of them
    std::vector<int> pivot_cols;                   // per reduced row
    std::vector<int> free_cols;
};

Rref reduce(const ParityCheckMatrix& H) {
    const int n = H.cols();
    std::vector<std::vector<std::uint64_t>> rows(H.rows());
    for (int j = 0; j < H.rows(); ++j) rows[j] = H.packed_row(j);

    Rref out;
    int rank = 0;
    std::vector<char> is_pivot(n, 0);
    for (int col = 0; col < n && rank < H.rows(); ++col) {
        int pivot = -1;
        for (int r = rank; r < H.rows(); ++r) {
            if (get_bit(rows[r], col)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < H.rows(); ++r) {
            if (r != rank && get_bit(rows[r], col)) {
                for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
            }
        }
        out.pivot_cols.push_back(col);
        is_pivot[col] = 1;
        ++rank;
    }
    rows.resize(rank);
    out.rows = std::move(rows);
    for (int col = 0; col < n; ++col)
        if (!is_pivot[col]) out.free_cols.push_back(col);
    return out;
}

} // namespace

GeneratorMatrix::GeneratorMatrix(int n, std::vector<int> info_cols,
                                 std::vector<std::vector<std::uint64_t>> packed_rows)
    : n_(n), info_cols_(std::move(info_cols)), rows_(std::move(packed_rows)) {}

std::vector<std::uint8_t> GeneratorMatrix::row_bits(int t) const {
    std::vector<std::uint8_t> bits(n_, 0);
    for (int i = 0; i < n_; ++i) bits[i] = get_bit(rows_[t], i) ? 1 : 0;
    return bits;
}

std::vector<std::uint8_t> GeneratorMatrix::encode(const std::vector<std::uint8_t>& message) const {
    if (static_cast<int>(message.size()) != k())
        throw std::invalid_argument("encode: message length must equal k");
    std::vector<std::uint64_t> acc((n_ + 63) / 64, 0);
    for (int t = 0; t < k(); ++t) {
        if (message[t] & 1u) {
            for (std::size_t w = 0; w < acc.size(); ++w) acc[w] ^= rows_[t][w];
        }
    }
    std::vector<std::uint8_t> bits(n_, 0);
    for (int i = 0; i < n_; ++i) bits[i] = get_bit(acc, i) ? 1 : 0;
    return bits;
}

GeneratorMatrix encoder_from(const ParityCheckMatrix& H) {
    const Rref rref = reduce(H);
    const int n = H.cols();
    const int words = (n + 63) / 64;

    std::vector<std::vector<std::uint64_t>> g_rows;
    g_rows.reserve(rref.free_cols.size());
    for (int f : rref.free_cols) {
        std::vector<std::uint64_t> row(words, 0);
        set_bit(row, f);
        // pivot value of each reduced row is that row's coefficient at f
        for (std::size_t r = 0; r < rref.rows.size(); ++r)
            if (get_bit(rref.rows[r], f)) set_bit(row, rref.pivot_cols[r]);
        g_rows.push_back(std::move(row));
    }
    return GeneratorMatrix(n, rref.free_cols, std::move(g_rows));
}

DminResult dmin_exact(const ParityCheckMatrix& H, int k_limit) {
    const GeneratorMatrix G = encoder_from(H);
    const int k = G.k();
    if (k <= 0) throw std::invalid_argument("dmin: code has no nonzero codewords");
    if (k > k_limit)
        throw std::invalid_argument("dmin_exact: k = " + std::to_string(k) +
                                    " exceeds limit " + std::to_string(k_limit) +
                                    "; use dmin_bound");

    const int words = (H.cols() + 63) / 64;
    std::vector<std::uint64_t> current(words, 0);
    int best = H.cols() + 1;
    std::uint64_t best_index = 0;

    const std::uint64_t count = (std::uint64_t{1} << k) - 1;
    for (std::uint64_t step = 1; step <= count; ++step) {
        const int flip = std::countr_zero(step);
        const auto& row = G.packed_row(flip);
        for (int w = 0; w < words; ++w) current[w] ^= row[w];
        const int weight = weight_of(current);
        if (weight < best) {
            best = weight;
            best_index = step;
        }
    }

    // rebuild the witness from the Gray code of the best step
    const std::uint64_t gray = best_index ^ (best_index >> 1);
    std::vector<std::uint8_t> message(k, 0);
    for (int t = 0; t < k; ++t) message[t] = (gray >> t) & 1u;
    DminResult result;
    result.value = best;
    result.certified = true;
    result.witness = G.encode(message);
    return result;
}

namespace {

// DFS state for the integer-program search.
struct BoundSearch {
    int k = 0;
    std::vector<std::vector<int>> rows_with_free;  // free index -> reduced rows touched
    std::vector<int> determined_at;                // reduced row -> last free depth in it
    std::vector<std::vector<int>> rows_closing_at; // depth -> rows determined there
    std::vector<char> parity;                      // per reduced row
    std::vector<char> assignment;                  // per free depth
    long long budget = 0;
    long long nodes = 0;
    bool aborted = false;
    int best = 0;
    std::vector<char> best_assignment;

    void dfs(int depth, int weight) {
        if (aborted) return;
        if (++nodes > budget) {
            aborted = true;
            return;
        }
        if (weight >= best) return;
        if (depth == k) {
            if (weight >= 1) {
                best = weight;
                best_assignment = assignment;
            }
            return;
        }
        for (char value : {char{0}, char{1}}) {
            assignment[depth] = value;
            if (value)
                for (int r : rows_with_free[depth]) parity[r] ^= 1;
            int forced = 0;
            for (int r : rows_closing_at[depth]) forced += parity[r];
            dfs(depth + 1, weight + value + forced);
            if (value)
                for (int r : rows_with_free[depth]) parity[r] ^= 1;
            if (aborted) return;
        }
    }
};

} // namespace

DminResult dmin_bound(const ParityCheckMatrix& H, const DminEffort& effort) {
    const Rref rref = reduce(H);
    const int k = static_cast<int>(rref.free_cols.size());
    if (k <= 0) throw std::invalid_argument("dmin: code has no nonzero codewords");
    const GeneratorMatrix G = encoder_from(H);

    // incumbent from light enumeration: single generator rows and pairs
    int best = H.cols();
    std::vector<std::uint8_t> best_message(k, 0);
    for (int t = 0; t < k; ++t) {
        const int w = weight_of(G.packed_row(t));
        if (w < best) {
            best = w;
            std::fill(best_message.begin(), best_message.end(), 0);
            best_message[t] = 1;
        }
    }
    if (k <= 128) {
        std::vector<std::uint64_t> acc;
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) {
                acc = G.packed_row(a);
                const auto& rb = G.packed_row(b);
                for (std::size_t w = 0; w < acc.size(); ++w) acc[w] ^= rb[w];
                const int weight = weight_of(acc);
                if (weight < best && weight >= 1) {
                    best = weight;
                    std::fill(best_message.begin(), best_message.end(), 0);
                    best_message[a] = best_message[b] = 1;
                }
            }
        }
    }

    // branch on free columns, highest reduced-row coverage first
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> coverage(k, 0);
    for (int f = 0; f < k; ++f)
        for (const auto& row : rref.rows)
            if (get_bit(row, rref.free_cols[f])) ++coverage[f];
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return coverage[a] > coverage[b]; });

    BoundSearch search;
    search.k = k;
    search.budget = effort.node_budget;
    search.best = best;  // prune at the incumbent; completion certifies it
    search.parity.assign(rref.rows.size(), 0);
    search.assignment.assign(k, 0);
    search.rows_with_free.resize(k);
    search.determined_at.assign(rref.rows.size(), -1);
    for (int depth = 0; depth < k; ++depth) {
        const int col = rref.free_cols[order[depth]];
        for (std::size_t r = 0; r < rref.rows.size(); ++r) {
            if (get_bit(rref.rows[r], col)) {
                search.rows_with_free[depth].push_back(static_cast<int>(r));
                search.determined_at[r] = depth;
            }
        }
    }
    search.rows_closing_at.resize(k);
    for (std::size_t r = 0; r < rref.rows.size(); ++r)
        if (search.determined_at[r] >= 0)
            search.rows_closing_at[search.determined_at[r]].push_back(static_cast<int>(r));
    search.dfs(0, 0);

    DminResult result;
    if (search.best < best) {
        // search improved on the incumbent; map the assignment back through
        // the branching order
        std::vector<std::uint8_t> message(k, 0);
        for (int depth = 0; depth < k; ++depth)
            message[order[depth]] = static_cast<std::uint8_t>(search.best_assignment[depth]);
        result.value = search.best;
        result.witness = G.encode(message);
    } else {
        result.value = best;
        result.witness = G.encode(best_message);
    }
    result.certified = !search.aborted;

    // the witness must check out against H regardless of search state
    const auto s = syndrome(H, result.witness);
    if (std::any_of(s.begin(), s.end(), [](std::uint8_t b) { return b != 0; }))
        throw std::logic_error("dmin_bound: witness fails the parity checks");
    int w = 0;
    for (std::uint8_t b : result.witness) w += b;
    if (w != result.value) throw std::logic_error("dmin_bound: witness weight mismatch");
    return result;
}

std::string dmin_to_json(const DminResult& result) {
    // witness hex-packed LSB-first within each byte
    std::string hex;
    for (std::size_t base = 0; base < result.witness.size(); base += 8) {
        unsigned byte = 0;
        for (std::size_t b = 0; b < 8 && base + b < result.witness.size(); ++b)
            byte |= static_cast<unsigned>(result.witness[base + b] & 1u) << b;
        static const char* digits = "0123456789abcdef";
        hex.push_back(digits[byte >> 4]);
        hex.push_back(digits[byte & 15]);
    }
    std::ostringstream out;
    out << "{\"value\": " << result.value << ", \"certified\": "
        << (result.certified ? "true" : "false") << ", \"witness\": \"" << hex << "\"}";
    return out.str();
}

StructureReport structure_report(const ParityCheckMatrix& H, int short_cycle_bound) {
    StructureReport report;
    report.short_cycle_bound = short_cycle_bound;

    std::vector<int> degree1_per_cn(H.rows(), 0);
    for (int i = 0; i < H.cols(); ++i) {
        const auto& rows = H.col_support(i);
        report.vn_degree_hist[static_cast<int>(rows.size())]++;
        if (rows.size() == 1) {
            report.degree1_vns++;
            degree1_per_cn[rows[0]]++;
        }
    }
    for (int j = 0; j < H.rows(); ++j)
        report.cn_degree_hist[static_cast<int>(H.row_support(j).size())]++;
    report.max_degree1_sharing_cn =
        H.rows() ? *std::max_element(degree1_per_cn.begin(), degree1_per_cn.end()) : 0;

    const CycleReport cycles = girth_and_cycles(H);
    report.girth = cycles.girth;
    for (int i = 0; i < H.cols(); ++i) {
        if (H.col_support(i).size() != 2) continue;
        if (cycles.vn_shortest_cycle[i] <= 4) report.degree2_vns_on_4cycles.push_back(i);
        if (cycles.vn_shortest_cycle[i] <= short_cycle_bound)
            report.degree2_vns_on_short_cycles.push_back(i);
    }
    return report;
}

std::string structure_to_json(const StructureReport& r) {
    std::ostringstream out;
    const auto int_list = [](const std::vector<int>& v) {
        std::ostringstream s;
        s << "[";
        for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
        s << "]";
        return s.str();
    };
    const auto hist = [](const std::map<int, long long>& h) {
        std::ostringstream s;
        s << "{";
        bool first = true;
        for (const auto& [deg, count] : h) {
            s << (first ? "" : ", ") << "\"" << deg << "\": " << count;
            first = false;
        }
        s << "}";
        return s.str();
    };
    out << "{\"degree1_vns\": " << r.degree1_vns
        << ", \"max_degree1_sharing_cn\": " << r.max_degree1_sharing_cn
        << ", \"degree2_vns_on_4cycles\": " << int_list(r.degree2_vns_on_4cycles)
        << ", \"degree2_vns_on_short_cycles\": " << int_list(r.degree2_vns_on_short_cycles)
        << ", \"short_cycle_bound\": " << r.short_cycle_bound << ", \"girth\": ";
    if (r.girth == kNoCycle) out << "null";
    else out << r.girth;
    out << ", \"vn_degree_hist\": " << hist(r.vn_degree_hist)
        << ", \"cn_degree_hist\": " << hist(r.cn_degree_hist) << "}";
    return out.str();
}

} // namespace genldpc
