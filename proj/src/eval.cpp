#include "genldpc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace genldpc {

namespace {

constexpr long long kBatchFrames = 1024;  // stopping-rule granularity, fixed

struct Tally {
    long long frames = 0;
    long long block_errors = 0;
    long long bit_errors = 0;
    long long iterations = 0;

    void merge(const Tally& other) {
        frames += other.frames;
        block_errors += other.block_errors;
        bit_errors += other.bit_errors;
        iterations += other.iterations;
    }
};

// frames [first, last) of the all-zero-codeword stream
Tally run_frames(BpDecoder& decoder, const ChannelSpec& spec, long long first, long long last,
                 std::uint64_t seed) {
    const std::vector<std::uint8_t> zero(static_cast<std::size_t>(decoder.block_length()), 0);
    Tally tally;
    for (long long f = first; f < last; ++f) {
        SplitRng rng(seed, 0xF7A3E5ULL, static_cast<std::uint64_t>(f));
        const LlrFrame frame = transmit(zero, spec, rng);
        const DecodeOutcome outcome = decoder.decode(frame);
        long long wrong = 0;
        for (std::uint8_t b : outcome.hard_bits) wrong += b;
        tally.frames++;
        tally.bit_errors += wrong;
        tally.block_errors += wrong > 0 ? 1 : 0;
        tally.iterations += outcome.iterations_used;
    }
    return tally;
}

} // namespace

EvalReport evaluate(const ParityCheckMatrix& H, const ChannelSpec& spec,
                    const DecoderConfig& cfg, const StoppingRule& rule, std::uint64_t seed,
                    int workers) {
    if (rule.min_block_errors < 1 || rule.max_frames < 1)
        throw std::invalid_argument("stopping rule limits must be >= 1");
    if (!H.connected())
        throw std::invalid_argument("evaluate: matrix has an empty row or column");
    const CodeProfile prof = profile(H);
    if (prof.k <= 0) throw std::invalid_argument("evaluate: code has no information bits");
    const ChannelSpec working = spec.with_rate(prof.actual_rate);
    noise_variance(working);  // validates the operating point
    workers = std::max(1, workers);

    const auto started = std::chrono::steady_clock::now();
    std::vector<BpDecoder> decoders;
    decoders.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) decoders.emplace_back(H, cfg);

    Tally total;
    long long next_frame = 0;
    while (total.frames < rule.max_frames && total.block_errors < rule.min_block_errors) {
        const long long batch_end = std::min(rule.max_frames, next_frame + kBatchFrames);
        const long long batch = batch_end - next_frame;
        if (workers == 1 || batch < 2 * workers) {
            total.merge(run_frames(decoders[0], working, next_frame, batch_end, seed));
        } else {
            // contiguous chunks; integer tallies merge order-independently
            std::vector<Tally> parts(static_cast<std::size_t>(workers));
            std::vector<std::thread> threads;
            threads.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                const long long lo = next_frame + batch * w / workers;
                const long long hi = next_frame + batch * (w + 1) / workers;
                threads.emplace_back([&, w, lo, hi] {
                    parts[static_cast<std::size_t>(w)] =
                        run_frames(decoders[static_cast<std::size_t>(w)], working, lo, hi, seed);
                });
            }
            for (auto& t : threads) t.join();
            for (const auto& part : parts) total.merge(part);
        }
        next_frame = batch_end;
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    EvalReport report;
    report.ebno_db = working.ebno_db;
    report.frames_sent = total.frames;
    report.block_errors = total.block_errors;
    report.bit_errors = total.bit_errors;
    report.bler = static_cast<double>(total.block_errors) / static_cast<double>(total.frames);
    report.ber = static_cast<double>(total.bit_errors) /
                 (static_cast<double>(total.frames) * static_cast<double>(prof.n));
    report.iterations_total = total.iterations;
    report.n_it_avg = static_cast<double>(total.iterations) / static_cast<double>(total.frames);
    report.eta = report.n_it_avg * static_cast<double>(prof.edge_count) /
                 static_cast<double>(prof.k);
    report.seed = seed;
    report.wall_clock_note = std::to_string(elapsed) + " ms";
    return report;
}

std::vector<EvalReport> sweep(const ParityCheckMatrix& H, const std::vector<ChannelSpec>& specs,
                              const DecoderConfig& cfg, const StoppingRule& rule,
                              std::uint64_t seed, int workers) {
    std::vector<EvalReport> reports;
    reports.reserve(specs.size());
    for (std::size_t p = 0; p < specs.size(); ++p)
        reports.push_back(evaluate(H, specs[p], cfg, rule, mix64(seed, p), workers));
    return reports;
}

std::string eval_csv_header() {
    return "ebno_db,frames,block_errors,bler,ber,n_it_avg,eta,seed";
}

std::string eval_csv_row(const EvalReport& r) {
    std::ostringstream out;
    out.precision(12);
    out << r.ebno_db << "," << r.frames_sent << "," << r.block_errors << "," << r.bler << ","
        << r.ber << "," << r.n_it_avg << "," << r.eta << "," << r.seed;
    return out.str();
}

FitnessValue fitness(const ParityCheckMatrix& H, const ChannelSpec& design_spec,
                     const DecoderConfig& cfg, const StoppingRule& budget, std::uint64_t seed,
                     int workers) {
    const EvalReport report = evaluate(H, design_spec, cfg, budget, seed, workers);
    FitnessValue value;
    value.bler = report.bler;
    value.edges = H.edge_count();
    value.n_it_avg = report.n_it_avg;
    value.frames = report.frames_sent;
    return value;
}

} // namespace genldpc
