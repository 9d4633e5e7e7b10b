#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "genldpc/alist.hpp"
#include "genldpc/analysis.hpp"
#include "genldpc/channel.hpp"
#include "genldpc/eval.hpp"
#include "genldpc/exit_chart.hpp"
#include "genldpc/genalg.hpp"
#include "genldpc/matrix.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitIoFailure = 3;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_workers() {
    if (const char* env = std::getenv("GENLDPC_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write " + path.string());
    out << text;
    if (!out) throw IoFailure("write failed: " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create output directory " + dir.string());
}

json decoder_to_json(const genldpc::DecoderConfig& d) {
    return json{{"max_iterations", d.max_iterations},
                {"llr_clamp", d.llr_clamp},
                {"tanh_guard", d.tanh_guard},
                {"early_stop", d.early_stop}};
}

genldpc::DecoderConfig decoder_from_json(const json& j) {
    genldpc::DecoderConfig d;
    d.max_iterations = j.value("max_iterations", d.max_iterations);
    d.llr_clamp = j.value("llr_clamp", d.llr_clamp);
    d.tanh_guard = j.value("tanh_guard", d.tanh_guard);
    d.early_stop = j.value("early_stop", d.early_stop);
    return d;
}

genldpc::GaConfig ga_config_from_json(const json& j) {
    genldpc::GaConfig cfg;
    cfg.n = j.value("n", cfg.n);
    cfg.m = j.value("m", cfg.m);
    cfg.tmpl.kind = genldpc::template_kind_from_string(j.value("template", std::string("none")));
    cfg.elite_count = j.value("elite_count", cfg.elite_count);
    cfg.mutations_per_elite = j.value("mutations_per_elite", cfg.mutations_per_elite);
    cfg.channel = genldpc::channel_kind_from_string(j.value("channel", std::string("awgn")));
    cfg.design_ebno_db = j.value("design_ebno_db", cfg.design_ebno_db);
    if (j.contains("decoder")) cfg.decoder = decoder_from_json(j.at("decoder"));
    if (j.contains("budget")) {
        cfg.budget.min_block_errors =
            j.at("budget").value("min_block_errors", cfg.budget.min_block_errors);
        cfg.budget.max_frames = j.at("budget").value("max_frames", cfg.budget.max_frames);
    }
    cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
    cfg.target_bler = j.value("target_bler", cfg.target_bler);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.init_vn_degree = j.value("init_vn_degree", cfg.init_vn_degree);
    cfg.init_cn_degree = j.value("init_cn_degree", cfg.init_cn_degree);
    cfg.workers = j.value("workers", cfg.workers);
    return cfg;
}

json ga_config_to_json(const genldpc::GaConfig& cfg) {
    return json{{"n", cfg.n},
                {"m", cfg.m},
                {"template", genldpc::to_string(cfg.tmpl.kind)},
                {"elite_count", cfg.elite_count},
                {"mutations_per_elite", cfg.mutations_per_elite},
                {"channel", genldpc::to_string(cfg.channel)},
                {"design_ebno_db", cfg.design_ebno_db},
                {"decoder", decoder_to_json(cfg.decoder)},
                {"budget",
                 json{{"min_block_errors", cfg.budget.min_block_errors},
                      {"max_frames", cfg.budget.max_frames}}},
                {"max_epochs", cfg.max_epochs},
                {"target_bler", cfg.target_bler},
                {"master_seed", cfg.master_seed},
                {"init_vn_degree", cfg.init_vn_degree},
                {"init_cn_degree", cfg.init_cn_degree},
                {"workers", cfg.workers}};
}

struct DesignArgs {
    std::string config_path;
    std::string out_dir = "design_out";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> channel;
    std::optional<double> ebno;
    std::optional<int> max_iter;
    std::optional<std::string> tmpl;
    bool resume = false;
};

int cmd_design(const DesignArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) {
        std::cerr << "error: cannot open config " << args.config_path << "\n";
        return kExitBadInput;
    }
    json raw;
    in >> raw;
    genldpc::GaConfig cfg = ga_config_from_json(raw);

    // flags win over the config file
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.workers) cfg.workers = *args.workers;
    if (args.channel) cfg.channel = genldpc::channel_kind_from_string(*args.channel);
    if (args.ebno) cfg.design_ebno_db = *args.ebno;
    if (args.max_iter) cfg.decoder.max_iterations = *args.max_iter;
    if (args.tmpl) cfg.tmpl.kind = genldpc::template_kind_from_string(*args.tmpl);
    cfg.validate();

    const std::filesystem::path out(args.out_dir);
    ensure_dir(out);
    write_text(out / "resolved_config.json", ga_config_to_json(cfg).dump(1) + "\n");

    genldpc::RunOptions opts;
    opts.checkpoint_dir = out;
    opts.progress = &std::cerr;
    const genldpc::RunResult result =
        args.resume ? genldpc::resume(cfg, opts) : genldpc::run(cfg, opts);

    genldpc::write_alist(result.best.matrix, out / "best.alist");
    json summary{{"best_bler", result.best.fitness->bler},
                 {"best_edges", result.best.fitness->edges},
                 {"best_n_it_avg", result.best.fitness->n_it_avg},
                 {"epochs_run", result.log.empty() ? 0 : result.log.back().epoch},
                 {"out_dir", out.string()}};
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

struct EvaluateArgs {
    std::string alist_path;
    std::vector<double> ebno;
    std::string channel = "awgn";
    int max_iter = 20;
    long long min_errors = 100;
    long long max_frames = 100000;
    std::uint64_t seed = 1;
    std::optional<int> workers;
    std::string out_dir = "eval_out";
};

int cmd_evaluate(const EvaluateArgs& args) {
    const genldpc::ParityCheckMatrix H = genldpc::read_alist(args.alist_path);
    genldpc::DecoderConfig decoder;
    decoder.max_iterations = args.max_iter;
    const genldpc::StoppingRule rule{args.min_errors, args.max_frames};
    const genldpc::ChannelKind kind = genldpc::channel_kind_from_string(args.channel);
    const int workers = args.workers ? *args.workers : default_workers();

    std::vector<genldpc::ChannelSpec> specs;
    specs.reserve(args.ebno.size());
    for (double point : args.ebno) specs.push_back({kind, point, 1.0});

    const auto reports = genldpc::sweep(H, specs, decoder, rule, args.seed, workers);

    std::string csv = genldpc::eval_csv_header() + "\n";
    for (const auto& r : reports) csv += genldpc::eval_csv_row(r) + "\n";

    const std::filesystem::path out(args.out_dir);
    ensure_dir(out);
    write_text(out / "sweep.csv", csv);
    const auto prof = genldpc::profile(H);
    write_text(out / "resolved_config.json",
               json{{"alist", args.alist_path},
                    {"ebno_db", args.ebno},
                    {"channel", args.channel},
                    {"max_iterations", args.max_iter},
                    {"min_block_errors", args.min_errors},
                    {"max_frames", args.max_frames},
                    {"seed", args.seed},
                    {"workers", workers},
                    {"code", json{{"n", prof.n}, {"m", prof.m}, {"k", prof.k},
                                  {"rate", prof.actual_rate}, {"edges", prof.edge_count}}}}
                       .dump(1) +
                   "\n");
    std::cout << csv;
    return kExitOk;
}

struct AnalyzeArgs {
    std::string alist_path;
    std::string which;
    std::string out_dir = "analysis_out";
    long long effort = 20'000'000;
    int k_limit = 28;
    double ebno = 1.1;
    int short_cycle_bound = 4;
    std::string j_config;
};

int cmd_analyze(const AnalyzeArgs& args) {
    const genldpc::ParityCheckMatrix H = genldpc::read_alist(args.alist_path);
    const std::filesystem::path out(args.out_dir);
    ensure_dir(out);
    write_text(out / "resolved_config.json",
               json{{"alist", args.alist_path},
                    {"which", args.which},
                    {"effort", args.effort},
                    {"k_limit", args.k_limit},
                    {"ebno_db", args.ebno},
                    {"short_cycle_bound", args.short_cycle_bound}}
                       .dump(1) +
                   "\n");

    if (args.which == "dmin") {
        const auto prof = genldpc::profile(H);
        genldpc::DminResult result;
        if (prof.k <= args.k_limit) {
            result = genldpc::dmin_exact(H, args.k_limit);
        } else {
            result = genldpc::dmin_bound(H, genldpc::DminEffort{args.effort});
            if (!result.certified)
                std::cerr << "warning: node budget exhausted, value is an upper bound\n";
        }
        const std::string text = genldpc::dmin_to_json(result);
        write_text(out / "dmin.json", text + "\n");
        std::cout << text << "\n";
        return kExitOk;
    }
    if (args.which == "exit") {
        const auto prof = genldpc::profile(H);
        const auto approx = args.j_config.empty()
                                ? genldpc::JApproximation::defaults()
                                : genldpc::JApproximation::from_json_file(args.j_config);
        const auto lambda = genldpc::edge_perspective(prof.vn_degree_hist);
        const auto rho = genldpc::edge_perspective(prof.cn_degree_hist);
        const auto grid = genldpc::uniform_grid(101);
        const double sigma_ch = genldpc::channel_llr_sigma(args.ebno, prof.actual_rate);
        const auto vnd = genldpc::exit_vnd(lambda, sigma_ch, grid, approx);
        const auto cnd = genldpc::exit_cnd(rho, grid, approx);
        write_text(out / "exit_vnd.csv", genldpc::exit_curve_csv(vnd));
        write_text(out / "exit_cnd.csv", genldpc::exit_curve_csv(cnd));
        json summary{{"ebno_db", args.ebno},
                     {"sigma_ch", sigma_ch},
                     {"tunnel_open",
                      genldpc::tunnel_open(lambda, rho, sigma_ch, 1001, approx)}};
        std::cout << summary.dump() << "\n";
        return kExitOk;
    }
    if (args.which == "structure") {
        const auto report = genldpc::structure_report(H, args.short_cycle_bound);
        const std::string text = genldpc::structure_to_json(report);
        write_text(out / "structure.json", text + "\n");
        std::cout << text << "\n";
        return kExitOk;
    }
    std::cerr << "error: --which must be one of dmin, exit, structure\n";
    return kExitBadInput;
}

struct ConvertArgs {
    std::string in_path;
    std::string out_path;
    std::string to = "dense";  // alist | dense
};

int cmd_convert(const ConvertArgs& args) {
    if (args.to == "dense") {
        const genldpc::ParityCheckMatrix H = genldpc::read_alist(args.in_path);
        std::string text;
        for (int j = 0; j < H.rows(); ++j) {
            std::string line(static_cast<std::size_t>(H.cols()), '0');
            for (int i : H.row_support(j)) line[static_cast<std::size_t>(i)] = '1';
            text += line + "\n";
        }
        write_text(args.out_path, text);
        return kExitOk;
    }
    if (args.to == "alist") {
        std::ifstream in(args.in_path);
        if (!in) throw genldpc::AlistError("cannot open " + args.in_path);
        std::vector<genldpc::Edge> edges;
        std::string line;
        int rows = 0, cols = -1;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty()) continue;
            if (cols < 0) cols = static_cast<int>(line.size());
            if (static_cast<int>(line.size()) != cols)
                throw genldpc::AlistError("dense rows have unequal lengths", rows + 1);
            for (int i = 0; i < cols; ++i) {
                if (line[static_cast<std::size_t>(i)] == '1') edges.emplace_back(rows, i);
                else if (line[static_cast<std::size_t>(i)] != '0')
                    throw genldpc::AlistError("dense text must be 0/1", rows + 1);
            }
            ++rows;
        }
        if (rows == 0 || cols <= 0) throw genldpc::AlistError("empty dense matrix");
        genldpc::write_alist(genldpc::ParityCheckMatrix(rows, cols, std::move(edges)),
                             args.out_path);
        return kExitOk;
    }
    std::cerr << "error: --to must be alist or dense\n";
    return kExitBadInput;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDPC code design by genetic optimization with the decoder in the loop"};
    app.require_subcommand(1);

    DesignArgs design;
    auto* design_cmd = app.add_subcommand("design", "run the genetic optimizer");
    design_cmd->add_option("--config", design.config_path, "JSON run configuration")->required();
    design_cmd->add_option("--out", design.out_dir, "output/checkpoint directory");
    design_cmd->add_option("--seed", design.seed, "master seed (overrides config)");
    design_cmd->add_option("--workers", design.workers, "worker threads (overrides config)");
    design_cmd->add_option("--channel", design.channel, "awgn | rayleigh");
    design_cmd->add_option("--ebno", design.ebno, "design Eb/N0 in dB");
    design_cmd->add_option("--max-iter", design.max_iter, "decoder iteration cap");
    design_cmd->add_option("--template", design.tmpl, "none | ira | tbira | ptbira");
    design_cmd->add_flag("--resume", design.resume, "continue from checkpoint.json in --out");

    EvaluateArgs evaluate;
    auto* eval_cmd = app.add_subcommand("evaluate", "Monte-Carlo BLER/BER sweep");
    eval_cmd->add_option("--alist", evaluate.alist_path, "parity-check matrix")->required();
    eval_cmd->add_option("--ebno", evaluate.ebno, "Eb/N0 grid points in dB")
        ->required()
        ->delimiter(',');
    eval_cmd->add_option("--channel", evaluate.channel, "awgn | rayleigh");
    eval_cmd->add_option("--max-iter", evaluate.max_iter, "decoder iteration cap");
    eval_cmd->add_option("--min-errors", evaluate.min_errors, "stop after this many block errors");
    eval_cmd->add_option("--max-frames", evaluate.max_frames, "frame cap per point");
    eval_cmd->add_option("--seed", evaluate.seed, "rng seed");
    eval_cmd->add_option("--workers", evaluate.workers, "worker threads");
    eval_cmd->add_option("--out", evaluate.out_dir, "output directory");

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "offline code analysis");
    analyze_cmd->add_option("--alist", analyze.alist_path, "parity-check matrix")->required();
    analyze_cmd->add_option("--which", analyze.which, "dmin | exit | structure")->required();
    analyze_cmd->add_option("--out", analyze.out_dir, "output directory");
    analyze_cmd->add_option("--effort", analyze.effort, "node budget for the distance search");
    analyze_cmd->add_option("--k-limit", analyze.k_limit, "dimension cap for exact enumeration");
    analyze_cmd->add_option("--ebno", analyze.ebno, "operating point for EXIT curves");
    analyze_cmd->add_option("--short-cycle-bound", analyze.short_cycle_bound,
                            "cycle length considered short");
    analyze_cmd->add_option("--j-config", analyze.j_config, "J approximation constants JSON");

    ConvertArgs convert;
    auto* convert_cmd = app.add_subcommand("convert", "alist <-> dense 0/1 text");
    convert_cmd->add_option("--in", convert.in_path, "input file")->required();
    convert_cmd->add_option("--out", convert.out_path, "output file")->required();
    convert_cmd->add_option("--to", convert.to, "target format: alist | dense");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*design_cmd) return cmd_design(design);
        if (*eval_cmd) return cmd_evaluate(evaluate);
        if (*analyze_cmd) return cmd_analyze(analyze);
        if (*convert_cmd) return cmd_convert(convert);
    } catch (const IoFailure& failure) {
        std::cerr << "error: " << failure.what() << "\n";
        return kExitIoFailure;
    } catch (const genldpc::AlistError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitBadInput;
    } catch (const nlohmann::json::exception& error) {
        std::cerr << "error: bad configuration: " << error.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitIoFailure;
    }
    return kExitBadInput;
}
