#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genldpc/channel.hpp"
#include "genldpc/decoder.hpp"
#include "genldpc/matrix.hpp"

namespace genldpc {

// Both limits bound the run, whichever is reached first. Stopping decisions
// happen at fixed batch boundaries so results do not depend on worker count.
struct StoppingRule {
    long long min_block_errors = 100;
    long long max_frames = 100000;
};

struct EvalReport {
    double ebno_db = 0.0;
    long long frames_sent = 0;
    long long block_errors = 0;
    long long bit_errors = 0;
    double bler = 0.0;
    double ber = 0.0;
    long long iterations_total = 0;
    double n_it_avg = 0.0;
    double eta = 0.0;  // n_it_avg * E / k
    std::uint64_t seed = 0;
    std::string wall_clock_note;
};

// Monte-Carlo BLER/BER at one operating point. Transmits the all-zero
// codeword; a block error is any hard-decision mismatch against the truth
// (undetected errors included). The spec's rate field is replaced by the
// code's actual R_c. n_it_avg averages iterations_used over all frames.
// Identical (H, spec, cfg, rule, seed) give bit-identical reports at any
// worker count.
EvalReport evaluate(const ParityCheckMatrix& H, const ChannelSpec& spec,
                    const DecoderConfig& cfg, const StoppingRule& rule, std::uint64_t seed,
                    int workers = 1);

// One report per spec, independent seeds derived per point.
std::vector<EvalReport> sweep(const ParityCheckMatrix& H, const std::vector<ChannelSpec>& specs,
                              const DecoderConfig& cfg, const StoppingRule& rule,
                              std::uint64_t seed, int workers = 1);

std::string eval_csv_header();
std::string eval_csv_row(const EvalReport& report);

// GA fitness: BLER at the design point, ties broken by fewer edges, then by
// lower average iteration count. Candidates compared within one epoch share
// the seed, so they see common random numbers.
struct FitnessValue {
    double bler = 1.0;
    long long edges = 0;
    double n_it_avg = 0.0;
    long long frames = 0;

    friend bool operator<(const FitnessValue& a, const FitnessValue& b) {
        if (a.bler != b.bler) return a.bler < b.bler;
        if (a.edges != b.edges) return a.edges < b.edges;
        return a.n_it_avg < b.n_it_avg;
    }
};

FitnessValue fitness(const ParityCheckMatrix& H, const ChannelSpec& design_spec,
                     const DecoderConfig& cfg, const StoppingRule& budget, std::uint64_t seed,
                     int workers = 1);

} // namespace genldpc
