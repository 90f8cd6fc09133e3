// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "ceisched/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace ceisched;

namespace {

// Tolerances and scales, fixed here and nowhere else.
constexpr std::int64_t oracle_instances_small = 100;
constexpr std::int64_t oracle_instances_bound = 1000;
constexpr double oracle_small_limit_s = 60.0;
constexpr double rank_sweep_limit_s = 600.0;
constexpr double dominance_share = 0.90;
constexpr double preference_inversion = 0.01;
constexpr int preference_inversions_allowed = 1;
constexpr double linear_r2 = 0.95;
constexpr double per_ei_spread = 3.0;
constexpr int scalability_repeats = 3;
constexpr int determinism_repeats = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::printf("%s  [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

ExperimentConfig desk()
{
    ExperimentConfig c;
    c.workload.resources = 200;
    c.workload.profiles = 100;
    c.workload.chronons = 1000;
    c.repeats = 10;
    return c;
}

OracleInstance family_instance(OracleFamily family, std::uint64_t root, std::int64_t id)
{
    auto seed = derive_seed(root, static_cast<std::uint64_t>(id), 0);
    return random_instance(oracle_family_params(family, seed), seed);
}

std::int64_t captured_count(double gc, std::int64_t total)
{
    return std::llround(gc * static_cast<double>(total));
}

// Mean GC series of one policy along a single-axis sweep.
std::vector<double> series(const SweepResult& r, const PolicySpec& policy)
{
    std::vector<double> out;
    for (std::size_t c = 0; c < r.cells.size(); ++c)
        out.push_back(r.find(c, policy).mean.metrics.gc);
    return out;
}

void check_prop1()
{
    auto start = Clock::now();
    auto rows = run_oracle_check(oracle_instances_small, OracleFamily::single_no_overlap, 1);
    int premise = 0, wrong = 0, instances = 0;
    std::int64_t last = -1;
    for (const auto& row : rows) {
        if (row.instance_id != last) {
            last = row.instance_id;
            ++instances;
            auto inst = family_instance(OracleFamily::single_no_overlap, 1, row.instance_id);
            const auto& set = inst.profiles;
            bool ok = set_rank(set) <= 1 && !has_intra_resource_overlap(set) && set.width_one() &&
                      set.resource_count() <= 4 && inst.epoch.chronons <= 8 &&
                      inst.budget.values() == BudgetVector::uniform(inst.epoch, 1).values();
            premise += ok ? 1 : 0;
        }
        if (row.policy.kind == PolicyKind::sedf && row.policy_gc != row.optimal_gc)
            ++wrong;
    }
    double secs = seconds_since(start);
    report(1, "S-EDF optimal on rank-1 width-1 instances without overlap",
           instances == oracle_instances_small && premise == instances && wrong == 0 && secs < oracle_small_limit_s,
           std::to_string(instances) + " instances, " + std::to_string(premise) + " meet the premise, " +
               std::to_string(wrong) + " S-EDF runs below optimum, " + fmt(secs, 2) + " s");
}

void check_prop3()
{
    int checked = 0, differ = 0;
    for (std::int64_t id = 0; checked < oracle_instances_small; ++id) {
        OracleInstance inst;
        try {
            inst = family_instance(OracleFamily::equal_width_one, 7, id);
        } catch (const std::invalid_argument&) {
            continue;
        }
        const auto& set = inst.profiles;
        const auto k = set_rank(set);
        bool premise = set.width_one() && (k == 2 || k == 3);
        for (std::size_t c = 0; c < set.cei_count(); ++c)
            premise = premise && static_cast<std::int32_t>(set.cei(static_cast<std::int32_t>(c)).size()) == k;
        if (!premise)
            continue;
        ++checked;
        auto mrsf = run(set, SimConfig{inst.epoch, inst.budget, PolicySpec{PolicyKind::mrsf}}).first;
        auto medf = run(set, SimConfig{inst.epoch, inst.budget, PolicySpec{PolicyKind::medf}}).first;
        if (mrsf.probes() != medf.probes())
            ++differ;
    }
    report(2, "MRSF-P and M-EDF-P schedules identical on equal-size width-1 instances", differ == 0,
           std::to_string(checked) + " instances, " + std::to_string(differ) + " differing probe sets");
}

void check_prop2()
{
    std::vector<std::string> errors;
    auto rows = run_oracle_check(oracle_instances_bound, OracleFamily::general, 1, &errors);
    int violations = 0, runs = 0;
    std::int64_t instances = 0, last = -1;
    double worst = 1.0;
    for (const auto& row : rows) {
        if (row.instance_id != last) {
            last = row.instance_id;
            ++instances;
        }
        if (row.policy.kind != PolicyKind::mrsf)
            continue;
        ++runs;
        // integer form of gap * l >= 1: captured_policy * l >= captured_opt
        auto inst = family_instance(OracleFamily::general, 1, row.instance_id);
        const auto total = static_cast<std::int64_t>(inst.profiles.cei_count());
        const auto l = competitive_bound_l(inst.profiles);
        const auto got = captured_count(row.policy_gc, total);
        const auto best = captured_count(row.optimal_gc, total);
        if (got * l < best)
            ++violations;
        if (best > 0)
            worst = std::min(worst, static_cast<double>(got * l) / static_cast<double>(best));
    }
    report(3, "MRSF gap at least 1/l", instances == oracle_instances_bound && errors.empty() && violations == 0,
           std::to_string(instances) + " solved instances, " + std::to_string(runs) + " MRSF runs, " +
               std::to_string(violations) + " violations, min gap*l " + fmt(worst, 3));
}

SweepResult check_rank()
{
    auto start = Clock::now();
    auto result = run_sweep(sweep_preset("rank", desk()));
    double secs = seconds_since(start);

    int increases = 0;
    std::string worst_rise;
    double rise = 0.0;
    for (const auto& policy : all_policies()) {
        auto s = series(result, policy);
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i] > s[i - 1]) {
                ++increases;
                if (s[i] - s[i - 1] > rise) {
                    rise = s[i] - s[i - 1];
                    worst_rise = policy_label(policy) + " at rank " + std::to_string(i + 1);
                }
            }
    }
    int comparisons = 0, dominated = 0;
    for (std::size_t c = 0; c < result.cells.size(); ++c)
        for (auto strong : {PolicyKind::mrsf, PolicyKind::medf})
            for (auto mode : {Preemption::preemptive, Preemption::non_preemptive}) {
                ++comparisons;
                double a = result.find(c, PolicySpec{strong, Preemption::preemptive}).mean.metrics.gc;
                double b = result.find(c, PolicySpec{PolicyKind::sedf, mode}).mean.metrics.gc;
                dominated += a >= b ? 1 : 0;
            }
    double share = static_cast<double>(dominated) / comparisons;
    std::string detail = std::to_string(increases) + " increases";
    if (increases > 0)
        detail += " (largest " + fmt(rise) + ", " + worst_rise + ")";
    detail += ", MRSF-P/M-EDF-P >= S-EDF in " + std::to_string(dominated) + "/" + std::to_string(comparisons) +
              ", " + fmt(secs, 1) + " s";
    report(4, "GC non-increasing in rank", result.errors.empty() && increases == 0 &&
                                              share >= dominance_share && secs < rank_sweep_limit_s,
           detail);
    return result;
}

void check_bound(const SweepResult& result)
{
    int violations = 0, rank_one_mismatch = 0, pairs = 0;
    for (std::size_t c = 0; c < result.cells.size(); ++c)
        for (std::size_t rep = 0; rep < result.raw[c].size(); ++rep) {
            double bound = result.bounds[c][rep];
            if (std::isnan(bound)) {
                ++violations;
                continue;
            }
            for (const auto& r : result.raw[c][rep]) {
                ++pairs;
                if (r.metrics.gc > bound)
                    ++violations;
                if (result.cells[c].workload.max_rank == 1 && r.policy == PolicySpec{PolicyKind::sedf} &&
                    r.metrics.gc != bound)
                    ++rank_one_mismatch;
            }
        }
    report(5, "single-EI upper bound dominates every policy", violations == 0 && rank_one_mismatch == 0 && pairs > 0,
           std::to_string(pairs) + " run/bound pairs, " + std::to_string(violations) + " violations, " +
               std::to_string(rank_one_mismatch) + " rank-1 mismatches with S-EDF-P");
}

void check_budget()
{
    auto result = run_sweep(sweep_preset("budget", desk()));
    int decreases = 0;
    for (const auto& policy : all_policies()) {
        auto s = series(result, policy);
        for (std::size_t i = 1; i < s.size(); ++i)
            decreases += s[i] < s[i - 1] ? 1 : 0;
    }
    auto mrsf = series(result, PolicySpec{PolicyKind::mrsf});
    report(6, "GC non-decreasing in budget", result.errors.empty() && decreases == 0 && mrsf.back() > mrsf.front(),
           std::to_string(decreases) + " decreases, MRSF-P " + fmt(mrsf.front()) + " at C=1, " + fmt(mrsf.back()) +
               " at C=5");
}

void check_preferences()
{
    std::string detail;
    bool pass = true;
    for (const char* axis : {"alpha", "beta"}) {
        auto result = run_sweep(SweepSpec{desk(), {{axis, {0, 1, 2}}}});
        pass = pass && result.errors.empty();
        for (auto kind : {PolicyKind::mrsf, PolicyKind::medf}) {
            PolicySpec policy{kind};
            auto s = series(result, policy);
            int inversions = 0;
            double depth = 0.0;
            for (std::size_t i = 1; i < s.size(); ++i)
                if (s[i] < s[i - 1]) {
                    ++inversions;
                    depth = std::max(depth, s[i - 1] - s[i]);
                }
            pass = pass && inversions <= preference_inversions_allowed && depth <= preference_inversion;
            detail += std::string(detail.empty() ? "" : "; ") + axis + " " + policy_label(policy) + " " + fmt(s[0], 3) +
                      "/" + fmt(s[1], 3) + "/" + fmt(s[2], 3);
        }
    }
    report(7, "GC non-decreasing in alpha and beta", pass, detail);
}

SweepResult check_preemption()
{
    auto result = run_sweep(sweep_preset("preemption", desk()));
    bool pass = result.errors.empty();
    std::string detail;
    for (auto kind : {PolicyKind::sedf, PolicyKind::mrsf, PolicyKind::medf}) {
        int wins = 0;
        double spread = 0.0;
        for (std::size_t c = 0; c < result.cells.size(); ++c) {
            double p = result.find(c, PolicySpec{kind, Preemption::preemptive}).mean.metrics.gc;
            double np = result.find(c, PolicySpec{kind, Preemption::non_preemptive}).mean.metrics.gc;
            wins += p > np ? 1 : 0;
            spread = std::max(spread, std::abs(p - np));
        }
        const auto cells = static_cast<int>(result.cells.size());
        if (kind != PolicyKind::sedf)
            pass = pass && 2 * wins > cells;
        detail += std::string(detail.empty() ? "" : "; ") + [](std::string s) { return s.substr(0, s.size() - 2); }(policy_label(PolicySpec{kind})) +
                  " P wins " + std::to_string(wins) + "/" + std::to_string(cells) + ", max |P-NP| " + fmt(spread);
    }
    report(8, "preemptive MRSF/M-EDF win the majority of cells", pass, detail);
    return result;
}

void check_scalability()
{
    auto base = desk();
    base.repeats = scalability_repeats;
    auto result = run_sweep(sweep_preset("scalability", base), 1);
    std::vector<double> m, total, per_ei;
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        double ns = 0.0, eis = 0.0;
        for (const auto& rep : result.raw[c])
            for (const auto& r : rep) {
                ns += r.metrics.runtime_per_ei_ns * static_cast<double>(r.metrics.total_eis);
                eis += static_cast<double>(r.metrics.total_eis);
            }
        m.push_back(result.cells[c].workload.profiles);
        total.push_back(ns / static_cast<double>(result.raw[c].size()));
        per_ei.push_back(ns / eis);
    }
    const auto n = static_cast<double>(m.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        mx += m[i] / n;
        my += total[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        sxy += (m[i] - mx) * (total[i] - my);
        sxx += (m[i] - mx) * (m[i] - mx);
        syy += (total[i] - my) * (total[i] - my);
    }
    double r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    auto [lo, hi] = std::minmax_element(per_ei.begin(), per_ei.end());
    double ratio = *hi / *lo;
    std::string detail = "R^2 " + fmt(r2) + ", per-EI ns";
    for (double v : per_ei)
        detail += " " + fmt(v, 0);
    detail += ", spread " + fmt(ratio, 2) + "x";
    report(9, "policy runtime linear in profile count",
           result.errors.empty() && r2 >= linear_r2 && ratio < per_ei_spread, detail);
}

void check_determinism(const SweepResult& rank, const SweepResult& preemption)
{
    std::int64_t schedules = 0, unstable = 0, infeasible = 0, mismatched = 0, rerun_diff = 0;
    auto verify = [&](const SweepResult& result) {
        for (std::size_t c = 0; c < result.cells.size(); ++c) {
            const auto& config = result.cells[c];
            for (std::size_t rep = 0; rep < result.raw[c].size(); ++rep) {
                auto inst = make_instance(config.workload, derive_seed(config.seed, c, rep));
                for (const auto& record : result.raw[c][rep]) {
                    auto sim = config.sim_config(record.policy);
                    auto [first, m1] = run(inst.profiles, sim);
                    auto [second, m2] = run(inst.profiles, sim);
                    ++schedules;
                    unstable += first == second && m1.gc == m2.gc ? 0 : 1;
                    infeasible += schedule_feasible(first, sim.budget) ? 0 : 1;
                    mismatched += gained_completeness(inst.profiles, first) == m1.gc && m1.gc == record.metrics.gc ? 0 : 1;
                }
            }
        }
    };
    verify(rank);
    verify(preemption);

    // a fresh sweep with fewer repeats and more workers reproduces the first repeats
    auto base = desk();
    base.repeats = determinism_repeats;
    auto again = run_sweep(sweep_preset("preemption", base), 2);
    for (std::size_t c = 0; c < again.cells.size(); ++c)
        for (std::size_t rep = 0; rep < again.raw[c].size(); ++rep)
            for (std::size_t p = 0; p < again.raw[c][rep].size(); ++p) {
                const auto& a = again.raw[c][rep][p].metrics;
                const auto& b = preemption.raw[c][rep][p].metrics;
                bool same = again.raw[c][rep][p].seed == preemption.raw[c][rep][p].seed && a.gc == b.gc &&
                            a.captured_ceis == b.captured_ceis && a.captured_eis == b.captured_eis &&
                            a.expired_eis == b.expired_eis && a.total_eis == b.total_eis;
                rerun_diff += same ? 0 : 1;
            }
    report(10, "deterministic, feasible schedules with exact GC replay",
           unstable == 0 && infeasible == 0 && mismatched == 0 && rerun_diff == 0,
           std::to_string(schedules) + " schedules, " + std::to_string(unstable) + " unstable, " +
               std::to_string(infeasible) + " infeasible, " + std::to_string(mismatched) + " GC mismatches, " +
               std::to_string(rerun_diff) + " rerun differences");
}

} // namespace

int main()
{
    check_prop1();
    check_prop3();
    check_prop2();
    auto rank = check_rank();
    check_bound(rank);
    check_budget();
    check_preferences();
    auto preemption = check_preemption();
    check_scalability();
    check_determinism(rank, preemption);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
