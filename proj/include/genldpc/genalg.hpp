#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genldpc/channel.hpp"
#include "genldpc/decoder.hpp"
#include "genldpc/eval.hpp"
#include "genldpc/matrix.hpp"
#include "genldpc/rng.hpp"

namespace genldpc {

struct Candidate {
    ParityCheckMatrix matrix;
    std::optional<FitnessValue> fitness;
    std::uint64_t eval_seed = 0;  // epoch seed the fitness was measured under
    std::string lineage;          // operator tag and parent slots
};

using Population = std::vector<Candidate>;

struct GaConfig {
    int n = 128;
    int m = 64;
    StructureTemplate tmpl = StructureTemplate::unstructured();
    int elite_count = 20;  // T
    int mutations_per_elite = 3;
    ChannelKind channel = ChannelKind::BiAwgn;
    double design_ebno_db = 5.0;
    DecoderConfig decoder;
    StoppingRule budget{100, 100000};
    int max_epochs = 100;
    double target_bler = 0.0;  // <= 0 disables the target stop
    std::uint64_t master_seed = 1;
    int init_vn_degree = 3;  // initial random ensemble (column degree)
    int init_cn_degree = 6;  // unstructured mode only
    int workers = 1;

    // T + T*mutations_per_elite + 2*C(T,2) = T * (T + mutations_per_elite)
    int population_size() const { return elite_count * (elite_count + mutations_per_elite); }
    void validate() const;
};

enum class MutationKind { Add, Remove, Both };
enum class CrossoverAxis { Vertical, Horizontal };

// Every zero-weight row/column gains one edge at a uniformly random
// permitted position; valid matrices pass through unchanged.
ParityCheckMatrix repair(const ParityCheckMatrix& H, SplitRng& rng);

// Add: one uniformly chosen zero entry outside the structure mask becomes an
// edge. Remove: one uniformly chosen maskable edge is deleted. Both: one
// remove then one add at an independent position (never undoing the remove).
// The offspring is connectivity-repaired.
Candidate mutate(const Candidate& parent, MutationKind kind, SplitRng& rng);

// Symmetric 2D crossover: vertical swaps column halves (split at n/2, or at
// (n-m)/2 inside H_L for structured modes), horizontal swaps row halves at
// m/2. Returns both offspring, connectivity-repaired.
std::pair<Candidate, Candidate> crossover(const Candidate& p1, const Candidate& p2,
                                          CrossoverAxis axis, SplitRng& rng);

// Full-size population of random codes: column/row-regular matrices in
// unstructured mode, random column-regular H_L with the template's H_R
// otherwise. Deterministic in the master seed.
Population init_population(const GaConfig& cfg);

// Next population: T elites with cached fitness, mutated offspring (kinds
// cycling add/remove/both), and two crossover offspring per unordered elite
// pair with alternating axis. Duplicates share one evaluation. Sorted by
// fitness on return.
Population step_epoch(const Population& pop, int epoch_index, const GaConfig& cfg);

struct EpochLog {
    int epoch = 0;
    double best_bler = 1.0;
    double median_bler = 1.0;
    long long best_edges = 0;
    long long frames_spent = 0;
};

struct RunResult {
    Candidate best;
    std::vector<EpochLog> log;
};

struct RunOptions {
    std::filesystem::path checkpoint_dir;  // empty disables checkpointing
    std::function<void(int, const Population&)> observer;  // after each epoch
    std::ostream* progress = nullptr;
};

RunResult run(const GaConfig& cfg, const RunOptions& opts = {});

// Continue a checkpointed run; reproduces the uninterrupted run bit-exactly
// because all per-epoch randomness derives from (master_seed, epoch).
RunResult resume(const GaConfig& cfg, const RunOptions& opts);

std::string epoch_csv_header();
std::string epoch_csv_row(const EpochLog& row);

} // namespace genldpc
