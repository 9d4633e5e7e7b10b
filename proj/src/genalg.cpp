#include "genldpc/genalg.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "genldpc/alist.hpp"

namespace genldpc {

namespace {

// stream-id tags for the per-purpose rng derivations
constexpr std::uint64_t kInitTag = 0x696e6974ULL;
constexpr std::uint64_t kMutateTag = 0x6d757461ULL;
constexpr std::uint64_t kCrossTag = 0x63726f73ULL;
constexpr std::uint64_t kEvalTag = 0x6576616cULL;

std::uint64_t epoch_eval_seed(std::uint64_t master, int epoch) {
    return mix64(master, kEvalTag, static_cast<std::uint64_t>(epoch));
}

} // namespace

void GaConfig::validate() const {
    if (elite_count < 2) throw std::invalid_argument("elite count T must be >= 2");
    if (mutations_per_elite < 1)
        throw std::invalid_argument("mutations_per_elite must be >= 1");
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
    if (n <= 0 || m <= 0 || m >= n) throw std::invalid_argument("need 0 < m < n");
    if (budget.min_block_errors < 1 || budget.max_frames < 1)
        throw std::invalid_argument("stopping rule limits must be >= 1");
    if (tmpl.fixes_right_block()) {
        tmpl.right_block_edges(m);  // throws when infeasible
    } else {
        const long long sockets = static_cast<long long>(n) * init_vn_degree;
        if (init_vn_degree < 1 || init_cn_degree < 1 || sockets % init_cn_degree != 0 ||
            sockets / init_cn_degree != m)
            throw std::invalid_argument(
                "unstructured init needs n * init_vn_degree == m * init_cn_degree");
    }
}

ParityCheckMatrix repair(const ParityCheckMatrix& H, SplitRng& rng) {
    const int left = H.left_cols();
    std::vector<Edge> added;

    std::vector<char> row_nonempty(H.rows(), 0);
    for (int j = 0; j < H.rows(); ++j) row_nonempty[j] = !H.row_support(j).empty();

    // empty columns first; the new edge may fix an empty row on the way
    for (int i = 0; i < left; ++i) {
        if (H.col_support(i).empty()) {
            const int j = static_cast<int>(rng.below(static_cast<std::size_t>(H.rows())));
            added.emplace_back(j, i);
            row_nonempty[j] = 1;
        }
    }
    for (int j = 0; j < H.rows(); ++j) {
        if (!row_nonempty[j]) {
            const int i = static_cast<int>(rng.below(static_cast<std::size_t>(left)));
            if (std::find(added.begin(), added.end(), Edge{j, i}) == added.end())
                added.emplace_back(j, i);
        }
    }
    if (added.empty()) return H;

    auto edges = H.edges();
    for (const auto& e : added)
        if (!H.has_edge(e.first, e.second)) edges.push_back(e);
    return ParityCheckMatrix(H.rows(), H.cols(), std::move(edges), H.structure());
}

namespace {

// uniformly chosen zero entry in the mutable region, optionally excluding
// one position
Edge pick_zero_entry(const ParityCheckMatrix& H, SplitRng& rng,
                     std::optional<Edge> excluded = std::nullopt) {
    const int left = H.left_cols();
    long long mutable_edges = 0;
    for (int j = 0; j < H.rows(); ++j)
        for (int i : H.row_support(j))
            if (i < left) ++mutable_edges;
    long long zeros = static_cast<long long>(H.rows()) * left - mutable_edges;
    if (excluded && !H.has_edge(excluded->first, excluded->second)) --zeros;
    if (zeros <= 0) throw std::runtime_error("mutate: no zero entry available to add");

    for (int attempt = 0; attempt < 10000; ++attempt) {
        const int j = static_cast<int>(rng.below(static_cast<std::size_t>(H.rows())));
        const int i = static_cast<int>(rng.below(static_cast<std::size_t>(left)));
        if (H.has_edge(j, i)) continue;
        if (excluded && Edge{j, i} == *excluded) continue;
        return {j, i};
    }
    // dense corner case: enumerate
    const long long target = static_cast<long long>(rng.below(static_cast<std::size_t>(zeros)));
    long long seen = 0;
    for (int j = 0; j < H.rows(); ++j) {
        for (int i = 0; i < left; ++i) {
            if (H.has_edge(j, i)) continue;
            if (excluded && Edge{j, i} == *excluded) continue;
            if (seen++ == target) return {j, i};
        }
    }
    throw std::logic_error("pick_zero_entry: enumeration exhausted");
}

Edge pick_existing_edge(const ParityCheckMatrix& H, SplitRng& rng) {
    const int left = H.left_cols();
    std::vector<Edge> mutable_edges;
    mutable_edges.reserve(static_cast<std::size_t>(H.edge_count()));
    for (int j = 0; j < H.rows(); ++j)
        for (int i : H.row_support(j))
            if (i < left) mutable_edges.emplace_back(j, i);
    if (mutable_edges.empty()) throw std::runtime_error("mutate: no removable edge");
    return mutable_edges[rng.below(mutable_edges.size())];
}

} // namespace

Candidate mutate(const Candidate& parent, MutationKind kind, SplitRng& rng) {
    const ParityCheckMatrix& H = parent.matrix;
    ParityCheckMatrix mutated = [&] {
        switch (kind) {
            case MutationKind::Add: {
                const Edge e = pick_zero_entry(H, rng);
                return H.with_edge(e.first, e.second);
            }
            case MutationKind::Remove: {
                const Edge e = pick_existing_edge(H, rng);
                return H.without_edge(e.first, e.second);
            }
            case MutationKind::Both: {
                const Edge removed = pick_existing_edge(H, rng);
                ParityCheckMatrix tmp = H.without_edge(removed.first, removed.second);
                const Edge e = pick_zero_entry(tmp, rng, removed);
                return tmp.with_edge(e.first, e.second);
            }
        }
        throw std::logic_error("unknown mutation kind");
    }();

    Candidate child{repair(mutated, rng), std::nullopt, 0, ""};
    switch (kind) {
        case MutationKind::Add: child.lineage = "mutate:add"; break;
        case MutationKind::Remove: child.lineage = "mutate:remove"; break;
        case MutationKind::Both: child.lineage = "mutate:both"; break;
    }
    return child;
}

std::pair<Candidate, Candidate> crossover(const Candidate& p1, const Candidate& p2,
                                          CrossoverAxis axis, SplitRng& rng) {
    const ParityCheckMatrix& a = p1.matrix;
    const ParityCheckMatrix& b = p2.matrix;
    if (a.rows() != b.rows() || a.cols() != b.cols() || !(a.structure() == b.structure()))
        throw std::invalid_argument("crossover: dimension or template mismatch");

    std::vector<Edge> child1, child2;
    if (axis == CrossoverAxis::Vertical) {
        // structured modes split inside H_L; the shared right block stays put
        const int split = a.structure().fixes_right_block() ? (a.cols() - a.rows()) / 2
                                                            : a.cols() / 2;
        for (const auto& [j, i] : a.edges()) (i < split ? child1 : child2).emplace_back(j, i);
        for (const auto& [j, i] : b.edges()) (i < split ? child2 : child1).emplace_back(j, i);
    } else {
        const int split = a.rows() / 2;
        for (const auto& [j, i] : a.edges()) (j < split ? child1 : child2).emplace_back(j, i);
        for (const auto& [j, i] : b.edges()) (j < split ? child2 : child1).emplace_back(j, i);
    }

    const std::string tag = axis == CrossoverAxis::Vertical ? "cross:v" : "cross:h";
    Candidate c1{repair(ParityCheckMatrix(a.rows(), a.cols(), std::move(child1), a.structure()),
                        rng),
                 std::nullopt, 0, tag};
    Candidate c2{repair(ParityCheckMatrix(a.rows(), a.cols(), std::move(child2), a.structure()),
                        rng),
                 std::nullopt, 0, tag};
    return {std::move(c1), std::move(c2)};
}

Population init_population(const GaConfig& cfg) {
    cfg.validate();
    Population pop;
    const int size = cfg.population_size();
    pop.reserve(static_cast<std::size_t>(size));
    for (int c = 0; c < size; ++c) {
        const std::uint64_t seed = mix64(cfg.master_seed, kInitTag, static_cast<std::uint64_t>(c));
        if (cfg.tmpl.fixes_right_block()) {
            // random column-regular H_L; every row is covered by the template
            SplitRng rng(seed);
            const int left = cfg.n - cfg.m;
            std::vector<Edge> edges;
            std::vector<int> rows(static_cast<std::size_t>(cfg.m));
            for (int i = 0; i < left; ++i) {
                std::iota(rows.begin(), rows.end(), 0);
                for (int d = 0; d < std::min(cfg.init_vn_degree, cfg.m); ++d) {
                    const std::size_t pick = d + rng.below(rows.size() - d);
                    std::swap(rows[d], rows[pick]);
                    edges.emplace_back(rows[d], i);
                }
            }
            pop.push_back(Candidate{apply_template(cfg.m, left, edges, cfg.tmpl), std::nullopt, 0,
                                    "init:" + std::to_string(c)});
        } else {
            pop.push_back(Candidate{
                random_regular(cfg.n, cfg.init_vn_degree, cfg.init_cn_degree, seed), std::nullopt,
                0, "init:" + std::to_string(c)});
        }
    }
    return pop;
}

namespace {

// Evaluate every candidate without a cached fitness under the epoch seed.
// Identical matrices share one evaluation. Returns total frames simulated.
long long evaluate_population(Population& pop, int epoch_index, const GaConfig& cfg) {
    const std::uint64_t seed = epoch_eval_seed(cfg.master_seed, epoch_index);
    const ChannelSpec design{cfg.channel, cfg.design_ebno_db, 1.0};

    // group duplicates; an already-evaluated twin donates its fitness
    std::vector<int> group_of(pop.size(), -1);
    std::vector<int> group_leader;
    for (std::size_t c = 0; c < pop.size(); ++c) {
        for (std::size_t g = 0; g < group_leader.size(); ++g) {
            const auto& lead = pop[static_cast<std::size_t>(group_leader[g])].matrix;
            if (lead.edge_count() == pop[c].matrix.edge_count() && lead == pop[c].matrix) {
                group_of[c] = static_cast<int>(g);
                break;
            }
        }
        if (group_of[c] < 0) {
            group_of[c] = static_cast<int>(group_leader.size());
            group_leader.push_back(static_cast<int>(c));
        }
    }

    // a group is satisfied by any member with cached fitness
    std::vector<int> fitness_source(group_leader.size(), -1);
    for (std::size_t c = 0; c < pop.size(); ++c)
        if (pop[c].fitness && fitness_source[static_cast<std::size_t>(group_of[c])] < 0)
            fitness_source[static_cast<std::size_t>(group_of[c])] = static_cast<int>(c);

    std::vector<int> to_evaluate;
    for (std::size_t g = 0; g < group_leader.size(); ++g)
        if (fitness_source[g] < 0) to_evaluate.push_back(static_cast<int>(g));

    std::vector<FitnessValue> results(to_evaluate.size());
    const int workers = std::max(1, cfg.workers);
    std::atomic<std::size_t> cursor{0};
    const auto worker_loop = [&] {
        for (;;) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= to_evaluate.size()) break;
            const auto& H =
                pop[static_cast<std::size_t>(group_leader[static_cast<std::size_t>(
                       to_evaluate[idx])])].matrix;
            results[idx] = fitness(H, design, cfg.decoder, cfg.budget, seed, 1);
        }
    };
    if (workers == 1 || to_evaluate.size() <= 1) {
        worker_loop();
    } else {
        const std::size_t nthreads =
            std::min(static_cast<std::size_t>(workers), to_evaluate.size());
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < nthreads; ++w) threads.emplace_back(worker_loop);
        for (auto& t : threads) t.join();
    }

    long long frames = 0;
    std::vector<std::optional<FitnessValue>> group_fitness(group_leader.size());
    std::vector<std::uint64_t> group_seed(group_leader.size(), seed);
    for (std::size_t idx = 0; idx < to_evaluate.size(); ++idx) {
        group_fitness[static_cast<std::size_t>(to_evaluate[idx])] = results[idx];
        frames += results[idx].frames;
    }
    for (std::size_t g = 0; g < group_leader.size(); ++g) {
        if (fitness_source[g] >= 0) {
            group_fitness[g] = pop[static_cast<std::size_t>(fitness_source[g])].fitness;
            group_seed[g] = pop[static_cast<std::size_t>(fitness_source[g])].eval_seed;
        }
    }
    for (std::size_t c = 0; c < pop.size(); ++c) {
        if (!pop[c].fitness) {
            pop[c].fitness = group_fitness[static_cast<std::size_t>(group_of[c])];
            pop[c].eval_seed = group_seed[static_cast<std::size_t>(group_of[c])];
        }
    }
    return frames;
}

void sort_by_fitness(Population& pop) {
    std::stable_sort(pop.begin(), pop.end(), [](const Candidate& a, const Candidate& b) {
        return *a.fitness < *b.fitness;
    });
}

} // namespace

Population step_epoch(const Population& pop, int epoch_index, const GaConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(pop.size()) < cfg.elite_count)
        throw std::invalid_argument("population smaller than elite count");
    for (const auto& c : pop)
        if (!c.fitness) throw std::invalid_argument("step_epoch: population not evaluated");

    Population sorted = pop;
    sort_by_fitness(sorted);

    Population next;
    next.reserve(static_cast<std::size_t>(cfg.population_size()));
    for (int t = 0; t < cfg.elite_count; ++t) next.push_back(sorted[static_cast<std::size_t>(t)]);

    static constexpr MutationKind kKinds[] = {MutationKind::Add, MutationKind::Remove,
                                              MutationKind::Both};
    for (int t = 0; t < cfg.elite_count; ++t) {
        for (int q = 0; q < cfg.mutations_per_elite; ++q) {
            SplitRng rng(cfg.master_seed,
                         mix64(kMutateTag, static_cast<std::uint64_t>(epoch_index)),
                         static_cast<std::uint64_t>(t) * cfg.mutations_per_elite + q);
            Candidate child = mutate(next[static_cast<std::size_t>(t)], kKinds[q % 3], rng);
            child.lineage += ":elite=" + std::to_string(t) + ":epoch=" + std::to_string(epoch_index);
            next.push_back(std::move(child));
        }
    }

    int pair_index = 0;
    for (int a = 0; a < cfg.elite_count; ++a) {
        for (int b = a + 1; b < cfg.elite_count; ++b, ++pair_index) {
            const CrossoverAxis axis =
                pair_index % 2 == 0 ? CrossoverAxis::Vertical : CrossoverAxis::Horizontal;
            SplitRng rng(cfg.master_seed,
                         mix64(kCrossTag, static_cast<std::uint64_t>(epoch_index)),
                         static_cast<std::uint64_t>(pair_index));
            auto [c1, c2] = crossover(next[static_cast<std::size_t>(a)],
                                      next[static_cast<std::size_t>(b)], axis, rng);
            c1.lineage += ":parents=" + std::to_string(a) + "," + std::to_string(b);
            c2.lineage += ":parents=" + std::to_string(a) + "," + std::to_string(b);
            next.push_back(std::move(c1));
            next.push_back(std::move(c2));
        }
    }

    evaluate_population(next, epoch_index, cfg);
    sort_by_fitness(next);
    return next;
}

namespace {

EpochLog make_log(int epoch, const Population& sorted_pop, long long frames) {
    EpochLog row;
    row.epoch = epoch;
    row.best_bler = sorted_pop.front().fitness->bler;
    row.median_bler = sorted_pop[(sorted_pop.size() - 1) / 2].fitness->bler;
    row.best_edges = sorted_pop.front().matrix.edge_count();
    row.frames_spent = frames;
    return row;
}

void write_checkpoint(const std::filesystem::path& dir, const GaConfig& cfg, int epoch,
                      const Population& pop) {
    nlohmann::json j;
    j["master_seed"] = cfg.master_seed;
    j["epoch"] = epoch;
    j["n"] = cfg.n;
    j["m"] = cfg.m;
    j["template"] = to_string(cfg.tmpl.kind);
    j["elite_count"] = cfg.elite_count;
    j["mutations_per_elite"] = cfg.mutations_per_elite;
    nlohmann::json members = nlohmann::json::array();
    for (const auto& c : pop) {
        nlohmann::json member;
        member["alist"] = format_alist(c.matrix);
        member["bler"] = c.fitness->bler;
        member["edges"] = c.fitness->edges;
        member["n_it_avg"] = c.fitness->n_it_avg;
        member["frames"] = c.fitness->frames;
        member["eval_seed"] = c.eval_seed;
        member["lineage"] = c.lineage;
        members.push_back(std::move(member));
    }
    j["population"] = std::move(members);
    std::ofstream out(dir / "checkpoint.json");
    if (!out) throw std::runtime_error("cannot write checkpoint.json");
    out << j.dump(1) << "\n";
}

void checkpoint_epoch(const RunOptions& opts, const GaConfig& cfg, int epoch,
                      const Population& pop, const EpochLog& row) {
    if (opts.checkpoint_dir.empty()) return;
    std::filesystem::create_directories(opts.checkpoint_dir);
    write_alist(pop.front().matrix,
                opts.checkpoint_dir / ("epoch_" + std::to_string(epoch) + "_best.alist"));
    const auto log_path = opts.checkpoint_dir / "log.csv";
    const bool fresh = !std::filesystem::exists(log_path);
    std::ofstream log(log_path, std::ios::app);
    if (!log) throw std::runtime_error("cannot write log.csv");
    if (fresh) log << epoch_csv_header() << "\n";
    log << epoch_csv_row(row) << "\n";
    write_checkpoint(opts.checkpoint_dir, cfg, epoch, pop);
}

// frames simulated under this epoch's seed, counting duplicates once
long long frames_for_epoch(const Population& pop, std::uint64_t seed) {
    long long frames = 0;
    std::vector<const ParityCheckMatrix*> counted;
    for (const auto& c : pop) {
        if (c.eval_seed != seed || !c.fitness) continue;
        bool seen = false;
        for (const auto* h : counted) {
            if (h->edge_count() == c.matrix.edge_count() && *h == c.matrix) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            counted.push_back(&c.matrix);
            frames += c.fitness->frames;
        }
    }
    return frames;
}

RunResult run_epochs(const GaConfig& cfg, const RunOptions& opts, Population pop,
                     int first_epoch, bool evaluate_first) {
    std::vector<EpochLog> log;
    for (int epoch = first_epoch; epoch <= cfg.max_epochs; ++epoch) {
        if (epoch == first_epoch && evaluate_first) {
            evaluate_population(pop, epoch, cfg);
            sort_by_fitness(pop);
        } else {
            pop = step_epoch(pop, epoch, cfg);
        }
        const EpochLog row =
            make_log(epoch, pop, frames_for_epoch(pop, epoch_eval_seed(cfg.master_seed, epoch)));
        log.push_back(row);
        checkpoint_epoch(opts, cfg, epoch, pop, row);
        if (opts.observer) opts.observer(epoch, pop);
        if (opts.progress)
            (*opts.progress) << "epoch " << epoch << ": best_bler=" << row.best_bler
                             << " median=" << row.median_bler << " E=" << row.best_edges
                             << " frames=" << row.frames_spent << std::endl;
        if (cfg.target_bler > 0.0 && row.best_bler <= cfg.target_bler) break;
    }
    return RunResult{pop.front(), std::move(log)};
}

} // namespace

RunResult run(const GaConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    Population pop = init_population(cfg);
    return run_epochs(cfg, opts, std::move(pop), 1, true);
}

RunResult resume(const GaConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    if (opts.checkpoint_dir.empty()) throw std::invalid_argument("resume needs a checkpoint dir");
    std::ifstream in(opts.checkpoint_dir / "checkpoint.json");
    if (!in) throw std::runtime_error("no checkpoint.json in " + opts.checkpoint_dir.string());
    nlohmann::json j;
    in >> j;
    if (j.at("master_seed").get<std::uint64_t>() != cfg.master_seed ||
        j.at("n").get<int>() != cfg.n || j.at("m").get<int>() != cfg.m ||
        j.at("template").get<std::string>() != to_string(cfg.tmpl.kind) ||
        j.at("elite_count").get<int>() != cfg.elite_count ||
        j.at("mutations_per_elite").get<int>() != cfg.mutations_per_elite)
        throw std::runtime_error("checkpoint does not match the configuration");

    const int epoch = j.at("epoch").get<int>();
    Population pop;
    for (const auto& member : j.at("population")) {
        Candidate c{parse_alist(member.at("alist").get<std::string>()), FitnessValue{}, 0, ""};
        c.fitness->bler = member.at("bler").get<double>();
        c.fitness->edges = member.at("edges").get<long long>();
        c.fitness->n_it_avg = member.at("n_it_avg").get<double>();
        c.fitness->frames = member.at("frames").get<long long>();
        c.eval_seed = member.at("eval_seed").get<std::uint64_t>();
        c.lineage = member.at("lineage").get<std::string>();
        if (cfg.tmpl.fixes_right_block()) {
            // reattach the template so the mask survives the round trip
            ParityCheckMatrix h(c.matrix.rows(), c.matrix.cols(), c.matrix.edges(), cfg.tmpl);
            c.matrix = std::move(h);
        }
        pop.push_back(std::move(c));
    }
    // prior epochs' rows live in log.csv already
    return run_epochs(cfg, opts, std::move(pop), epoch + 1, false);
}

std::string epoch_csv_header() { return "epoch,best_bler,median_bler,E_best,frames_spent"; }

std::string epoch_csv_row(const EpochLog& row) {
    std::ostringstream out;
    out.precision(12);
    out << row.epoch << "," << row.best_bler << "," << row.median_bler << "," << row.best_edges
        << "," << row.frames_spent;
    return out.str();
}

} // namespace genldpc
