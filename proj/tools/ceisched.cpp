// Command-line driver: generate instances, run policies, sweep parameter
// grids and cross-check policies against the exact oracle.

#include "ceisched/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace ceisched;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> settings;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("-c,--config", c.config_path, "key = value config file (W, n, m, K, C, lambda, rank, ...)");
    cmd->add_option("-s,--set", c.settings, "override a setting, e.g. --set C=2")->take_all();
    cmd->add_option("--seed", c.seed, "root random seed");
}

ExperimentConfig resolve(const Common& c)
{
    ExperimentConfig config;
    if (!c.config_path.empty())
        config = load_config(c.config_path);
    for (const auto& s : c.settings) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + s + "'");
        apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (c.seed)
        config.seed = *c.seed;
    return config;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

void print_summary(std::ostream& out, const ProfileSet& set)
{
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t c = 0; c < set.cei_count(); ++c)
        ++sizes[set.cei(static_cast<std::int32_t>(c)).size()];
    out << "profiles: " << set.profile_count() << '\n'
        << "ceis: " << set.cei_count() << '\n'
        << "eis: " << set.ei_count() << '\n'
        << "rank: " << set_rank(set) << '\n'
        << "rank histogram:";
    for (const auto& [size, count] : sizes)
        out << ' ' << size << ':' << count;
    out << '\n' << "P^[1]: " << (set.width_one() ? "true" : "false") << '\n';
}

// Loads updates from a trace when given; adjusts n and K to the trace.
Instance build_instance(ExperimentConfig& config, const std::string& trace_path, std::uint64_t seed)
{
    if (trace_path.empty())
        return make_instance(config.workload, seed);
    auto trace = load_trace(trace_path);
    if (trace.events.empty())
        return Instance{};
    config.workload.chronons = trace.chronons;
    config.workload.resources = trace.resources;
    Instance inst;
    inst.updates = std::move(trace.events);
    inst.profiles = gen_profiles(config.workload, inst.updates, derive_seed(seed, 0, 2));
    return inst;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Budget-constrained probe scheduling for complex user profiles"};
    app.require_subcommand(1);

    Common gen_opts;
    std::string gen_out = "instance";
    std::string gen_trace;
    auto* gen = app.add_subcommand("generate", "write an update stream and profile set, print a summary");
    add_common(gen, gen_opts);
    gen->add_option("-o,--out", gen_out, "output prefix (<prefix>.updates.csv, <prefix>.profiles.csv)");
    gen->add_option("--trace", gen_trace, "use update events from a trace file instead of the Poisson model");

    Common run_opts;
    std::string run_profiles, run_trace, run_schedule_out;
    auto* run_cmd = app.add_subcommand("run", "run policies on one instance, print per-run CSV rows");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--profiles", run_profiles, "replay a serialized profile set instead of generating one");
    run_cmd->add_option("--trace", run_trace, "update trace to generate profiles from");
    run_cmd->add_option("--schedule-out", run_schedule_out,
                        "write schedules to <path>.<policy>.csv");

    Common sweep_opts;
    std::string preset, sweep_out = "sweep.csv", agg_out;
    std::vector<std::string> axes;
    bool upper_bound = false, timing = false;
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid with repeats");
    add_common(sweep, sweep_opts);
    sweep->add_option("--preset", preset, "rank, budget, lambda, profiles, alpha, beta, preemption, scalability");
    sweep->add_option("--axis", axes, "axis as name=v1,v2,... (repeatable)");
    sweep->add_option("-o,--out", sweep_out, "raw per-run CSV");
    sweep->add_option("--aggregate", agg_out, "aggregate CSV (default: <out>.agg.csv)");
    sweep->add_flag("--upper-bound", upper_bound, "compute the single-EI upper bound per cell");
    sweep->add_flag("--timing", timing, "run cells sequentially for runtime measurements");

    std::int64_t count = 100;
    std::string family = "general", oracle_out;
    std::uint64_t oracle_seed = 1;
    auto* oracle = app.add_subcommand("oracle-check", "compare policies with the exact optimum on tiny instances");
    oracle->add_option("--count", count, "number of random instances")->check(CLI::NonNegativeNumber);
    oracle->add_option("--family", family, "prop1, prop3 or general");
    oracle->add_option("--seed", oracle_seed, "root random seed");
    oracle->add_option("-o,--out", oracle_out, "CSV output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto config = resolve(gen_opts);
            auto inst = build_instance(config, gen_trace, config.seed);
            save_updates(gen_out + ".updates.csv", config.workload.chronons, inst.updates);
            save_profiles(gen_out + ".profiles.csv", inst.profiles);
            print_summary(std::cout, inst.profiles);
        } else if (*run_cmd) {
            auto config = resolve(run_opts);
            ProfileSet set;
            if (!run_profiles.empty()) {
                set = load_profiles(run_profiles);
                config.workload.profiles = static_cast<std::int32_t>(set.profile_count());
                config.workload.resources = set.resource_count();
            } else {
                set = build_instance(config, run_trace, config.seed).profiles;
            }
            std::cout << run_record_header() << '\n';
            for (const auto& policy : config.policies) {
                auto [schedule, metrics] = run(set, config.sim_config(policy));
                std::cout << format_run_record(make_record(config, policy, config.seed, metrics)) << '\n';
                if (!run_schedule_out.empty())
                    save_schedule(run_schedule_out + "." + policy_label(policy) + ".csv", schedule);
            }
        } else if (*sweep) {
            SweepSpec spec{resolve(sweep_opts), {}, upper_bound, timing};
            if (!preset.empty()) {
                spec = sweep_preset(preset, spec.baseline);
                spec.upper_bound = spec.upper_bound || upper_bound;
                spec.timing = spec.timing || timing;
            }
            for (const auto& a : axes) {
                auto eq = a.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--axis expects name=v1,v2,...");
                SweepAxis axis{a.substr(0, eq), {}};
                std::stringstream values(a.substr(eq + 1));
                for (std::string v; std::getline(values, v, ',');)
                    axis.values.push_back(std::stod(v));
                spec.axes.push_back(std::move(axis));
            }
            auto result = run_sweep(spec);
            auto raw = open_out(sweep_out);
            write_raw_csv(raw, result);
            if (agg_out.empty()) {
                auto dot = sweep_out.rfind(".csv");
                agg_out = (dot == std::string::npos ? sweep_out : sweep_out.substr(0, dot)) + ".agg.csv";
            }
            auto agg = open_out(agg_out);
            write_aggregate_csv(agg, result);
            for (const auto& e : result.errors)
                std::cerr << "warning: " << e << '\n';
            std::cerr << result.cells.size() << " cells, " << result.aggregate.size() << " aggregate rows -> "
                      << sweep_out << ", " << agg_out << '\n';
        } else if (*oracle) {
            std::vector<std::string> errors;
            auto rows = run_oracle_check(count, parse_oracle_family(family), oracle_seed, &errors);
            if (oracle_out.empty()) {
                write_oracle_check_csv(std::cout, rows);
            } else {
                auto out = open_out(oracle_out);
                write_oracle_check_csv(out, rows);
            }
            for (const auto& e : errors)
                std::cerr << "warning: " << e << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
