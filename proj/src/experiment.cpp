#include "ceisched/experiment.hpp"

#include "text_util.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace ceisched {

SimConfig ExperimentConfig::sim_config(const PolicySpec& policy) const
{
    Epoch epoch(workload.chronons);
    SimConfig c{epoch, BudgetVector::uniform(epoch, budget), policy};
    c.seed = seed;
    c.repeats = repeats;
    return c;
}

namespace {

double to_double(std::string_view key, std::string_view value)
{
    double v = 0.0;
    if (!detail::parse_number(value, v))
        throw std::invalid_argument("setting '" + std::string(key) + "': not a number: '" + std::string(value) + "'");
    return v;
}

std::int32_t to_int(std::string_view key, std::string_view value)
{
    double v = to_double(key, value);
    if (v != std::floor(v) || std::abs(v) > std::numeric_limits<std::int32_t>::max())
        throw std::invalid_argument("setting '" + std::string(key) + "' needs an integer, got '" +
                                    std::string(value) + "'");
    return static_cast<std::int32_t>(v);
}

bool to_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw std::invalid_argument("setting '" + std::string(key) + "' needs a boolean");
}

} // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value)
{
    value = detail::trim(value);
    auto& w = config.workload;
    if (key == "W")
        w.window = to_int(key, value);
    else if (key == "n")
        w.resources = to_int(key, value);
    else if (key == "m")
        w.profiles = to_int(key, value);
    else if (key == "K")
        w.chronons = to_int(key, value);
    else if (key == "C")
        config.budget = to_int(key, value);
    else if (key == "lambda")
        w.lambda = to_double(key, value);
    else if (key == "rank")
        w.max_rank = to_int(key, value);
    else if (key == "alpha")
        w.alpha = to_double(key, value);
    else if (key == "beta")
        w.beta = to_double(key, value);
    else if (key == "life") {
        if (value == "overwrite")
            w.life = LifeMode::overwrite;
        else if (value == "window")
            w.life = LifeMode::window;
        else
            throw std::invalid_argument("life must be 'overwrite' or 'window'");
    } else if (key == "distinct")
        w.distinct_resources = to_bool(key, value);
    else if (key == "fixed_rank")
        w.fixed_rank = to_bool(key, value);
    else if (key == "seed") {
        std::uint64_t s = 0;
        if (!detail::parse_number(value, s))
            throw std::invalid_argument("seed must be an unsigned integer");
        config.seed = s;
    } else if (key == "repeats")
        config.repeats = to_int(key, value);
    else if (key == "policy") {
        config.policies.clear();
        if (value == "all") {
            config.policies = all_policies();
        } else {
            for (auto name : detail::split(value, ','))
                config.policies.push_back(parse_policy(name));
        }
        if (config.policies.empty())
            throw std::invalid_argument("policy list is empty");
    } else
        throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string uncommented = line.substr(0, line.find('#'));
        auto text = detail::trim(uncommented);
        if (text.empty())
            continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw detail::line_error(line_no, "expected 'key = value'");
        try {
            apply_setting(base, detail::trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw detail::line_error(line_no, e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path);
    return parse_config(in, std::move(base));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t cell, std::uint64_t repeat)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(root) ^ cell) ^ (repeat * 0x632be59bd9b4e019ULL));
}

Instance make_instance(const WorkloadParams& params, std::uint64_t seed)
{
    params.validate();
    Instance inst;
    inst.updates = gen_updates(params.resources, params.lambda, params.chronons, derive_seed(seed, 0, 1));
    inst.profiles = gen_profiles(params, inst.updates, derive_seed(seed, 0, 2));
    return inst;
}

std::string run_record_header()
{
    return "policy,preemption,seed,K,n,m,C,lambda,rank,alpha,beta,W,gc,runtime_per_ei_ns,captured_ceis,failed_ceis";
}

namespace {

void write_params(std::ostream& out, const WorkloadParams& w, std::int32_t budget)
{
    out << w.chronons << ',' << w.resources << ',' << w.profiles << ',' << budget << ','
        << detail::format_double(w.lambda) << ',' << w.max_rank << ',' << detail::format_double(w.alpha) << ','
        << detail::format_double(w.beta) << ',' << w.window;
}

} // namespace

std::string format_run_record(const RunRecord& r)
{
    std::ostringstream out;
    out << policy_name(r.policy.kind) << ',' << preemption_name(r.policy.preemption) << ',' << r.seed << ',';
    write_params(out, r.workload, r.budget);
    out << ',' << detail::format_double(r.metrics.gc) << ',' << detail::format_double(r.metrics.runtime_per_ei_ns)
        << ',' << r.metrics.captured_ceis << ',' << r.metrics.failed_ceis;
    return out.str();
}

RunRecord make_record(const ExperimentConfig& config, const PolicySpec& policy, std::uint64_t seed,
                      const MetricsReport& metrics)
{
    return RunRecord{policy, seed, config.workload, config.budget, metrics};
}

void SweepSpec::validate() const
{
    if (baseline.repeats < 1)
        throw std::invalid_argument("repeats must be >= 1");
    if (baseline.policies.empty())
        throw std::invalid_argument("no policies to run");
    struct Range {
        std::string_view name;
        double lo, hi;
    };
    static constexpr Range ranges[] = {{"W", 0, 20},      {"n", 100, 1000}, {"m", 100, 2500},
                                       {"K", 1000, 1000}, {"C", 1, 5},      {"lambda", 10, 50},
                                       {"rank", 1, 5},    {"alpha", 0, 2},  {"beta", 0, 2}};
    for (const auto& axis : axes) {
        const Range* range = nullptr;
        for (const auto& r : ranges)
            if (r.name == axis.name)
                range = &r;
        if (!range)
            throw std::invalid_argument("unknown sweep axis '" + axis.name + "'");
        if (axis.values.empty())
            throw std::invalid_argument("sweep axis '" + axis.name + "' has no values");
        for (double v : axis.values)
            if (v < range->lo || v > range->hi)
                throw std::invalid_argument("sweep axis '" + axis.name + "' value " + detail::format_double(v) +
                                            " outside [" + detail::format_double(range->lo) + ", " +
                                            detail::format_double(range->hi) + "]");
    }
}

std::vector<ExperimentConfig> SweepSpec::cells() const
{
    std::vector<ExperimentConfig> out{baseline};
    for (const auto& axis : axes) {
        std::vector<ExperimentConfig> next;
        for (const auto& partial : out)
            for (double v : axis.values) {
                auto cell = partial;
                apply_setting(cell, axis.name, detail::format_double(v));
                next.push_back(std::move(cell));
            }
        out = std::move(next);
    }
    return out;
}

SweepSpec sweep_preset(std::string_view name, const ExperimentConfig& baseline)
{
    SweepSpec spec{baseline, {}, false, false};
    auto& w = spec.baseline.workload;
    if (name == "rank") {
        w.window = 0;
        w.distinct_resources = true;
        w.fixed_rank = true;
        spec.baseline.budget = 1;
        spec.axes = {{"rank", {1, 2, 3, 4, 5}}};
        spec.upper_bound = true;
    } else if (name == "budget") {
        spec.axes = {{"C", {1, 2, 3, 4, 5}}};
    } else if (name == "lambda") {
        spec.axes = {{"lambda", {10, 20, 30, 40, 50}}};
    } else if (name == "profiles") {
        spec.axes = {{"m", {100, 500, 1000, 1500, 2000, 2500}}};
    } else if (name == "alpha") {
        spec.axes = {{"alpha", {0, 0.5, 1, 1.5, 2}}};
    } else if (name == "beta") {
        spec.axes = {{"beta", {0, 0.5, 1, 1.5, 2}}};
    } else if (name == "preemption") {
        w.max_rank = 3;
        spec.axes = {{"W", {10, 20}}, {"C", {1, 2, 3}}};
    } else if (name == "scalability") {
        w.lambda = 50;
        spec.axes = {{"m", {100, 500, 1000, 2500}}};
        spec.timing = true;
    } else {
        throw std::invalid_argument("unknown sweep preset '" + std::string(name) + "'");
    }
    return spec;
}

const AggregateRow& SweepResult::find(std::size_t cell, const PolicySpec& policy) const
{
    for (const auto& row : aggregate)
        if (row.cell == cell && row.mean.policy == policy)
            return row;
    throw std::out_of_range("no aggregate row for cell " + std::to_string(cell) + " policy " + policy_label(policy));
}

unsigned default_workers()
{
    if (const char* env = std::getenv("CEISCHED_WORKERS")) {
        unsigned n = 0;
        if (detail::parse_number(std::string_view(env), n) && n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers)
{
    spec.validate();
    SweepResult result;
    result.cells = spec.cells();
    const auto repeats = static_cast<std::size_t>(spec.baseline.repeats);
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    result.raw.assign(result.cells.size(), std::vector<std::vector<RunRecord>>(repeats));
    result.bounds.assign(result.cells.size(), std::vector<double>(repeats, nan));
    std::vector<std::string> job_errors(result.cells.size() * repeats);

    auto job = [&](std::size_t index) {
        auto cell = index / repeats;
        auto rep = index % repeats;
        const auto& config = result.cells[cell];
        auto seed = derive_seed(config.seed, cell, rep);
        try {
            auto inst = make_instance(config.workload, seed);
            std::vector<RunRecord> records;
            for (const auto& policy : config.policies) {
                auto metrics = run(inst.profiles, config.sim_config(policy)).second;
                records.push_back(make_record(config, policy, seed, metrics));
            }
            if (spec.upper_bound)
                result.bounds[cell][rep] = single_ei_upper_bound(
                    inst.profiles, config.sim_config(PolicySpec{PolicyKind::sedf, Preemption::preemptive}));
            result.raw[cell][rep] = std::move(records);
        } catch (const std::exception& e) {
            job_errors[index] = "cell " + std::to_string(cell) + " repeat " + std::to_string(rep) + ": " + e.what();
        }
    };

    const std::size_t jobs = result.cells.size() * repeats;
    if (spec.timing)
        workers = 1;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs; i = next++)
            job(i);
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    for (auto& e : job_errors)
        if (!e.empty())
            result.errors.push_back(std::move(e));

    for (std::size_t cell = 0; cell < result.cells.size(); ++cell) {
        const auto& config = result.cells[cell];
        for (std::size_t p = 0; p < config.policies.size(); ++p) {
            AggregateRow row;
            row.cell = cell;
            row.mean = make_record(config, config.policies[p], config.seed, MetricsReport{});
            double gc = 0.0, runtime = 0.0, captured = 0.0, failed = 0.0, bound = 0.0;
            for (std::size_t rep = 0; rep < repeats; ++rep) {
                const auto& runs = result.raw[cell][rep];
                if (runs.empty())
                    continue;
                const auto& m = runs[p].metrics;
                gc += m.gc;
                runtime += m.runtime_per_ei_ns;
                captured += static_cast<double>(m.captured_ceis);
                failed += static_cast<double>(m.failed_ceis);
                bound += result.bounds[cell][rep];
                ++row.runs;
            }
            if (row.runs > 0) {
                double n = row.runs;
                row.mean.metrics.gc = gc / n;
                row.mean.metrics.runtime_per_ei_ns = runtime / n;
                // counts are reported as rounded means
                row.mean.metrics.captured_ceis = std::llround(captured / n);
                row.mean.metrics.failed_ceis = std::llround(failed / n);
                if (spec.upper_bound)
                    row.upper_bound = bound / n;
            }
            result.aggregate.push_back(row);
        }
    }
    return result;
}

void write_raw_csv(std::ostream& out, const SweepResult& result)
{
    out << run_record_header() << '\n';
    for (const auto& cell : result.raw)
        for (const auto& rep : cell)
            for (const auto& record : rep)
                out << format_run_record(record) << '\n';
}

std::string aggregate_header()
{
    return "cell,policy,preemption,K,n,m,C,lambda,rank,alpha,beta,W,runs,gc,runtime_per_ei_ns,upper_bound";
}

void write_aggregate_csv(std::ostream& out, const SweepResult& result)
{
    out << aggregate_header() << '\n';
    for (const auto& row : result.aggregate) {
        out << row.cell << ',' << policy_name(row.mean.policy.kind) << ','
            << preemption_name(row.mean.policy.preemption) << ',';
        write_params(out, row.mean.workload, row.mean.budget);
        out << ',' << row.runs << ',';
        if (row.runs > 0)
            out << detail::format_double(row.mean.metrics.gc) << ','
                << detail::format_double(row.mean.metrics.runtime_per_ei_ns);
        else
            out << ',';
        out << ',';
        if (row.upper_bound)
            out << detail::format_double(*row.upper_bound);
        out << '\n';
    }
}

OracleFamily parse_oracle_family(std::string_view name)
{
    if (name == "prop1")
        return OracleFamily::single_no_overlap;
    if (name == "prop3")
        return OracleFamily::equal_width_one;
    if (name == "general")
        return OracleFamily::general;
    throw std::invalid_argument("unknown instance family '" + std::string(name) + "' (prop1, prop3, general)");
}

TinyInstanceParams oracle_family_params(OracleFamily family, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto pick = [&](std::int32_t lo, std::int32_t hi) { return std::uniform_int_distribution<std::int32_t>(lo, hi)(rng); };
    TinyInstanceParams p;
    switch (family) {
    case OracleFamily::single_no_overlap:
        p.resources = pick(1, 4);
        p.chronons = pick(2, 8);
        p.ceis = pick(1, 8);
        p.max_rank = 1;
        p.max_width = 1;
        p.budget = 1;
        p.no_intra_overlap = true;
        break;
    case OracleFamily::equal_width_one:
        p.resources = pick(2, 4);
        p.chronons = pick(3, 8);
        p.ceis = pick(2, 5);
        p.exact_rank = pick(2, 3);
        p.max_rank = p.exact_rank;
        p.max_width = 1;
        p.budget = 1;
        break;
    case OracleFamily::general:
        p.resources = pick(2, 3);
        p.chronons = pick(3, 6);
        p.ceis = pick(1, 4);
        p.max_rank = 3;
        p.max_width = 3;
        p.budget = pick(1, 2);
        p.no_intra_overlap = true;
        break;
    }
    return p;
}

std::vector<OracleCheckRow> run_oracle_check(std::int64_t count, OracleFamily family, std::uint64_t seed,
                                             std::vector<std::string>* errors)
{
    std::vector<OracleCheckRow> rows;
    for (std::int64_t id = 0; id < count; ++id) {
        auto inst_seed = derive_seed(seed, static_cast<std::uint64_t>(id), 0);
        auto instance = random_instance(oracle_family_params(family, inst_seed), inst_seed);
        const auto& set = instance.profiles;

        OracleResult best;
        try {
            best = optimal_gc(instance);
        } catch (const std::exception& e) {
            if (errors)
                errors->push_back("instance " + std::to_string(id) + ": " + e.what());
            continue;
        }

        const bool overlap = has_intra_resource_overlap(set);
        const auto rank = set_rank(set);
        bool equal_sizes = true;
        for (std::size_t c = 0; c < set.cei_count(); ++c)
            equal_sizes = equal_sizes && static_cast<std::int32_t>(set.cei(static_cast<std::int32_t>(c)).size()) == rank;
        const bool prop3_premise = set.width_one() && equal_sizes;
        const auto l = competitive_bound_l(set);

        std::vector<std::pair<PolicySpec, Schedule>> schedules;
        for (const auto& policy : all_policies()) {
            SimConfig config{instance.epoch, instance.budget, policy};
            auto [schedule, metrics] = run(set, config);
            OracleCheckRow row;
            row.instance_id = id;
            row.optimal_gc = best.gc;
            row.policy = policy;
            row.policy_gc = metrics.gc;
            row.gap = best.gc == 0.0 ? 1.0 : metrics.gc / best.gc;
            row.bound_l = l;
            if (policy.kind == PolicyKind::sedf && rank == 1 && !overlap)
                row.prop1 = metrics.gc == best.gc ? "pass" : "fail";
            if (policy.kind == PolicyKind::mrsf && !overlap)
                row.prop2 = row.gap * static_cast<double>(l) >= 1.0 - 1e-12 ? "pass" : "fail";
            schedules.emplace_back(policy, std::move(schedule));
            rows.push_back(row);
        }
        if (prop3_premise) {
            auto schedule_of = [&](PolicyKind kind, Preemption mode) -> const Schedule& {
                for (const auto& [p, s] : schedules)
                    if (p.kind == kind && p.preemption == mode)
                        return s;
                throw std::logic_error("missing schedule");
            };
            for (auto mode : {Preemption::preemptive, Preemption::non_preemptive}) {
                bool same = schedule_of(PolicyKind::mrsf, mode) == schedule_of(PolicyKind::medf, mode);
                for (auto it = rows.end() - static_cast<std::ptrdiff_t>(schedules.size()); it != rows.end(); ++it)
                    if ((it->policy.kind == PolicyKind::mrsf || it->policy.kind == PolicyKind::medf) &&
                        it->policy.preemption == mode)
                        it->prop3 = same ? "pass" : "fail";
            }
        }
    }
    return rows;
}

std::string oracle_check_header()
{
    return "instance_id,optimal_gc,policy,policy_gc,gap,l,prop1,prop2,prop3";
}

void write_oracle_check_csv(std::ostream& out, const std::vector<OracleCheckRow>& rows)
{
    out << oracle_check_header() << '\n';
    for (const auto& r : rows)
        out << r.instance_id << ',' << detail::format_double(r.optimal_gc) << ',' << policy_label(r.policy) << ','
            << detail::format_double(r.policy_gc) << ',' << detail::format_double(r.gap) << ',' << r.bound_l << ','
            << r.prop1 << ',' << r.prop2 << ',' << r.prop3 << '\n';
}

} // namespace ceisched
