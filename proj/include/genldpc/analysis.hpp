#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genldpc/matrix.hpp"

namespace genldpc {

struct DminResult {
    int value = 0;
    bool certified = false;
    std::vector<std::uint8_t> witness;  // a nonzero codeword of weight == value
};

// Systematic generator for the code of H: k rows, G * H^T = 0, one info
// (free) column per row. Used by the all-zero-transmission validity test and
// the minimum-distance searches.
class GeneratorMatrix {
  public:
    GeneratorMatrix(int n, std::vector<int> info_cols,
                    std::vector<std::vector<std::uint64_t>> packed_rows);

    int n() const { return n_; }
    int k() const { return static_cast<int>(info_cols_.size()); }
    const std::vector<int>& info_cols() const { return info_cols_; }
    const std::vector<std::uint64_t>& packed_row(int t) const { return rows_[t]; }
    std::vector<std::uint8_t> row_bits(int t) const;

    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& message) const;

  private:
    int n_;
    std::vector<int> info_cols_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

GeneratorMatrix encoder_from(const ParityCheckMatrix& H);

// Exhaustive minimum distance: walks all 2^k - 1 nonzero codewords with a
// Gray-code update (one row XOR per step). Refuses k above the limit.
DminResult dmin_exact(const ParityCheckMatrix& H, int k_limit = 28);

struct DminEffort {
    long long node_budget = 20'000'000;
};

// Depth-first branch and bound on the weight-minimization integer program
// (min sum x, H x even, sum x >= 1): branches on the information positions,
// parity positions follow by GF(2) propagation, subtrees are cut once the
// forced weight reaches the incumbent. Certified when the search finishes
// inside the node budget, otherwise the incumbent is an upper bound.
DminResult dmin_bound(const ParityCheckMatrix& H, const DminEffort& effort = {});

std::string dmin_to_json(const DminResult& result);

struct StructureReport {
    int degree1_vns = 0;
    int max_degree1_sharing_cn = 0;             // degree-1 VNs on the busiest CN
    std::vector<int> degree2_vns_on_4cycles;
    std::vector<int> degree2_vns_on_short_cycles;
    int short_cycle_bound = 4;
    int girth = kNoCycle;
    std::map<int, long long> vn_degree_hist;
    std::map<int, long long> cn_degree_hist;
};

StructureReport structure_report(const ParityCheckMatrix& H, int short_cycle_bound = 4);
std::string structure_to_json(const StructureReport& report);

} // namespace genldpc
