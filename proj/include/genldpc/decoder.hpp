#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "genldpc/channel.hpp"
#include "genldpc/matrix.hpp"

namespace genldpc {

struct DecoderConfig {
    int max_iterations = 20;
    double llr_clamp = 30.0;    // message magnitude cap
    double tanh_guard = 1e-12;  // keeps |tanh| <= 1 - guard
    bool early_stop = true;     // syndrome check each iteration (and on channel signs)
};

struct DecodeOutcome {
    std::vector<std::uint8_t> hard_bits;
    int iterations_used = 0;
    bool syndrome_ok = false;
    std::optional<int> converged_at;  // 0 when the channel signs already satisfy H
    std::vector<double> total_llr;
};

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& H,
                                   const std::vector<std::uint8_t>& bits);

// Flooding sum-product decoder over the Tanner graph of one fixed H. Holds
// flat edge arrays and scratch buffers, so construct once per (H, config)
// and reuse across frames; decode() itself is not thread-safe, clone the
// decoder per worker instead.
class BpDecoder {
  public:
    BpDecoder(const ParityCheckMatrix& H, DecoderConfig cfg);

    DecodeOutcome decode(const LlrFrame& frame);

    const DecoderConfig& config() const { return cfg_; }
    int block_length() const { return n_; }

  private:
    DecoderConfig cfg_;
    int m_;
    int n_;
    // CSR-style layout: per check, the edge ids and variable indices; per
    // variable, the edge ids
    std::vector<int> check_edge_begin_;
    std::vector<int> check_edge_var_;
    std::vector<int> var_edge_begin_;
    std::vector<int> var_edge_id_;
    // scratch
    std::vector<double> v2c_;
    std::vector<double> c2v_;
    std::vector<double> tanh_buf_;
    std::vector<double> prefix_buf_;
    std::vector<std::uint8_t> hard_;

    bool syndrome_ok(const std::vector<std::uint8_t>& bits) const;
};

DecodeOutcome decode(const ParityCheckMatrix& H, const LlrFrame& frame,
                     const DecoderConfig& cfg);

} // namespace genldpc
