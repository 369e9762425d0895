// mapsim — discrete-time simulator and control stack for aerial mobile access
// points with wireless backhaul. Subcommands: train, eval, compare, trace, plot.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapsim/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--set", opts.overrides,
                    "config override key=value (repeatable, wins over --config)");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--out", opts.out_dir, "output directory");
}

mapsim::SimConfig resolve(const CommonOpts& opts) {
    mapsim::SimConfig cfg = mapsim::make_config(opts.config_path, opts.overrides);
    if (!opts.out_dir.empty()) cfg.harness.out_dir = opts.out_dir;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mapsim: aerial access-point network simulator"};
    app.require_subcommand(1);

    CommonOpts train_opts, eval_opts, cmp_opts, trace_opts;
    std::string train_regime = "federated";
    bool train_fresh = false;
    long train_steps = -1;

    auto* train = app.add_subcommand("train", "train placement policies for one regime");
    add_common(train, train_opts);
    train->add_option("--regime", train_regime, "codebook | curriculum | federated");
    train->add_flag("--fresh", train_fresh, "discard any existing checkpoint");
    train->add_option("--steps", train_steps, "environment-step budget");

    std::string eval_regime = "federated", eval_registry;
    int eval_episodes = -1;
    bool eval_dynamic = false;
    auto* eval = app.add_subcommand("eval", "run the generalization evaluation protocol");
    add_common(eval, eval_opts);
    eval->add_option("--registry", eval_registry, "policy registry directory")->required();
    eval->add_option("--regime", eval_regime, "registry regime");
    eval->add_option("--episodes", eval_episodes, "episode count");
    eval->add_flag("--dynamic", eval_dynamic, "manage the fleet with the trade-off controller");

    std::string cmp_codebook, cmp_federated;
    int cmp_seeds = -1;
    auto* cmp = app.add_subcommand("compare", "paired fixed-vs-dynamic fleet comparison");
    add_common(cmp, cmp_opts);
    cmp->add_option("--codebook", cmp_codebook, "codebook registry directory")->required();
    cmp->add_option("--federated", cmp_federated, "federated registry directory")->required();
    cmp->add_option("--seeds", cmp_seeds, "paired seed count");

    std::string trace_registry, trace_regime = "federated";
    bool trace_dynamic = false;
    auto* trace = app.add_subcommand("trace", "verbose single-episode run");
    add_common(trace, trace_opts);
    trace->add_option("--registry", trace_registry, "policy registry (omit for random actions)");
    trace->add_option("--regime", trace_regime, "registry regime");
    trace->add_flag("--dynamic", trace_dynamic, "enable trade-off fleet management");

    std::vector<std::string> plot_curves, plot_records;
    std::string plot_out = "out/plots";
    auto* plot = app.add_subcommand("plot", "render curves and per-M_s charts as SVG");
    plot->add_option("--curves", plot_curves, "training curve files (ndjson)");
    plot->add_option("--records", plot_records, "episode record files (ndjson)");
    plot->add_option("--out", plot_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            mapsim::ExperimentSpec spec;
            spec.cfg = resolve(train_opts);
            if (train_steps > 0) spec.cfg.harness.train_steps = train_steps;
            spec.regime = mapsim::regime_from_string(train_regime);
            spec.base_seed = train_opts.seed;
            spec.fresh = train_fresh;
            spec.name = "train_" + train_regime;
            mapsim::TrainOutput out = mapsim::run_training(spec);
            std::cout << "registry: " << out.registry_dir << "\n";
            for (const auto& c : out.curve_files) std::cout << "curves: " << c << "\n";
            std::cout << "env steps: " << out.total_env_steps << "\n";
        } else if (eval->parsed()) {
            mapsim::ExperimentSpec spec;
            spec.cfg = resolve(eval_opts);
            spec.regime = mapsim::regime_from_string(eval_regime);
            spec.base_seed = eval_opts.seed;
            spec.episodes = eval_episodes > 0 ? eval_episodes : spec.cfg.harness.eval_episodes;
            spec.dynamic_map_management = eval_dynamic;
            spec.name = "eval_" + eval_regime + (eval_dynamic ? "_dynamic" : "_fixed");
            mapsim::PolicyRegistry registry = mapsim::PolicyRegistry::load(eval_registry);
            mapsim::EvalSummary summary = mapsim::run_generalization_eval(registry, spec);
            std::cout << "records: " << summary.record_path << "\n"
                      << "E[R] = " << summary.mean_sum_rate_bps / 1e9 << " Gbps, E[eta] = "
                      << summary.mean_eta / 1e9 << " Gbps/policy\n";
            for (const auto& [ms, v] : summary.rate_by_ms)
                std::cout << "  M_s=" << ms << ": E[R]=" << v / 1e9 << " Gbps\n";
        } else if (cmp->parsed()) {
            mapsim::ExperimentSpec spec;
            spec.cfg = resolve(cmp_opts);
            if (cmp_seeds > 0) spec.cfg.harness.compare_seeds = cmp_seeds;
            spec.base_seed = cmp_opts.seed;
            spec.name = "compare";
            mapsim::PolicyRegistry codebook = mapsim::PolicyRegistry::load(cmp_codebook);
            mapsim::PolicyRegistry federated = mapsim::PolicyRegistry::load(cmp_federated);
            mapsim::ComparisonReport report =
                mapsim::run_dynamic_comparison(codebook, federated, spec);
            std::cout << report.text;
        } else if (trace->parsed()) {
            mapsim::ExperimentSpec spec;
            spec.cfg = resolve(trace_opts);
            spec.regime = mapsim::regime_from_string(trace_regime);
            spec.base_seed = trace_opts.seed;
            spec.dynamic_map_management = trace_dynamic;
            spec.name = "trace";
            mapsim::PolicyRegistry registry;
            bool have_registry = !trace_registry.empty();
            if (have_registry) registry = mapsim::PolicyRegistry::load(trace_registry);
            mapsim::EpisodeResult result =
                mapsim::run_trace(spec, have_registry ? &registry : nullptr);
            std::cout << "mean R = " << result.mean_sum_rate_bps / 1e9
                      << " Gbps over " << result.rows.size() << " slots, constraints "
                      << (result.constraints_ok ? "clean" : "VIOLATED") << "\n";
            if (!result.constraints_ok) return 2;
        } else if (plot->parsed()) {
            auto outputs = mapsim::emit_plots(plot_curves, plot_records, plot_out);
            for (const auto& p : outputs) std::cout << "plot: " << p << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
