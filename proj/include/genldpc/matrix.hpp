#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace genldpc {

// Edge of the Tanner graph: (check row j, variable column i), 0-based.
using Edge = std::pair<int, int>;

enum class TemplateKind { Unstructured, Ira, TbIra, PtbIra };

TemplateKind template_kind_from_string(const std::string& name);
std::string to_string(TemplateKind kind);

// Accumulator-style code templates. A structured template freezes the
// rightmost m x m block of H to a prescribed pattern; the optimizer only
// ever touches the left part.
struct StructureTemplate {
    TemplateKind kind = TemplateKind::Unstructured;

    static StructureTemplate unstructured() { return {TemplateKind::Unstructured}; }
    static StructureTemplate ira() { return {TemplateKind::Ira}; }
    static StructureTemplate tb_ira() { return {TemplateKind::TbIra}; }
    static StructureTemplate ptb_ira() { return {TemplateKind::PtbIra}; }

    bool fixes_right_block() const { return kind != TemplateKind::Unstructured; }

    // Prescribed edges of the right m x m block, columns numbered 0..m-1.
    // Ira: main diagonal plus first subdiagonal. TbIra: Ira plus the
    // upper-right corner. PtbIra: weight-three first column (rows 0,
    // ceil(m/2)-1, m-1) and a shifted dual diagonal in columns 1..m-1.
    std::vector<Edge> right_block_edges(int m) const;

    bool operator==(const StructureTemplate&) const = default;
};

struct CodeProfile {
    int n = 0;
    int m = 0;
    int rank = 0;
    int k = 0;                 // n - rank
    double actual_rate = 0.0;  // R_c = k/n
    double design_rate = 0.0;  // r_d = (n-m)/n
    long long edge_count = 0;
    std::map<int, long long> vn_degree_hist;
    std::map<int, long long> cn_degree_hist;
};

// Binary m x n parity-check matrix held as dual adjacency (per-row and
// per-column sorted supports). Immutable after construction; mutations
// produce new instances, so instances are safe to share across threads.
// GF(2) rank is computed eagerly and cached.
class ParityCheckMatrix {
  public:
    ParityCheckMatrix(int m, int n, std::vector<Edge> edges,
                      StructureTemplate tmpl = StructureTemplate::unstructured());

    int rows() const { return m_; }
    int cols() const { return n_; }
    long long edge_count() const { return edge_count_; }
    int rank() const { return rank_; }

    const std::vector<int>& row_support(int j) const { return row_cols_[j]; }
    const std::vector<int>& col_support(int i) const { return col_rows_[i]; }
    bool has_edge(int j, int i) const;

    const StructureTemplate& structure() const { return tmpl_; }
    // Columns 0..left_cols()-1 are mutable; a structured template freezes
    // the rest.
    int left_cols() const { return tmpl_.fixes_right_block() ? n_ - m_ : n_; }
    bool in_structure_mask(int j, int i) const {
        (void)j;
        return i >= left_cols();
    }

    bool connected() const;  // no empty row or column

    std::vector<Edge> edges() const;  // sorted (row, col)

    ParityCheckMatrix with_edge(int j, int i) const;
    ParityCheckMatrix without_edge(int j, int i) const;

    // Row j as bit-packed 64-bit words, LSB-first within a word.
    std::vector<std::uint64_t> packed_row(int j) const;
    int words_per_row() const { return (n_ + 63) / 64; }

    bool operator==(const ParityCheckMatrix& rhs) const {
        return m_ == rhs.m_ && n_ == rhs.n_ && row_cols_ == rhs.row_cols_;
    }

  private:
    int m_;
    int n_;
    long long edge_count_ = 0;
    int rank_ = 0;
    StructureTemplate tmpl_;
    std::vector<std::vector<int>> row_cols_;
    std::vector<std::vector<int>> col_rows_;
};

int gf2_rank(const ParityCheckMatrix& H);
// Rank of explicit packed rows (n columns); shared by rank and encoder code.
int gf2_rank_packed(std::vector<std::vector<std::uint64_t>> rows, int n);

CodeProfile profile(const ParityCheckMatrix& H);

// Random column/row-regular matrix via socket matching with collision
// resampling; restarts the matching if a collision cannot be resolved.
// Requires n * vn_degree divisible by cn_degree.
ParityCheckMatrix random_regular(int n, int vn_degree, int cn_degree, std::uint64_t seed);

// Attach a template's right block to an optimized left part. left_edges use
// columns 0..left_cols-1; the result has n = left_cols + m columns.
ParityCheckMatrix apply_template(int m, int left_cols, const std::vector<Edge>& left_edges,
                                 const StructureTemplate& t);

constexpr int kNoCycle = std::numeric_limits<int>::max();

struct CycleReport {
    int girth = kNoCycle;                 // kNoCycle when the graph is a forest
    long long four_cycles = 0;            // count of distinct 4-cycles
    std::vector<int> vn_shortest_cycle;   // per column; kNoCycle if none
};

CycleReport girth_and_cycles(const ParityCheckMatrix& H);

} // namespace genldpc
