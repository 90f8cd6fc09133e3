#include "helpers.hpp"

#include "ceisched/oracle.hpp"
#include "ceisched/sim.hpp"

#include <doctest.h>

#include <random>

using namespace ceisched;
using testing::ei;
using testing::make_set;

namespace {

// Plain enumeration of every feasible schedule: per chronon, every subset of
// resources with at most C_j members.
double enumerate_best(const OracleInstance& inst)
{
    const int n = inst.profiles.resource_count();
    const int k = inst.epoch.chronons;
    std::vector<std::vector<unsigned>> options(static_cast<std::size_t>(k));
    for (int t = 1; t <= k; ++t)
        for (unsigned mask = 0; mask < (1U << n); ++mask)
            if (std::popcount(mask) <= inst.budget.at(t))
                options[static_cast<std::size_t>(t - 1)].push_back(mask);

    double best = 0.0;
    std::vector<unsigned> choice(static_cast<std::size_t>(k), 0);
    auto rec = [&](auto&& self, int t) -> void {
        if (t > k) {
            Schedule s;
            for (int j = 1; j <= k; ++j)
                for (int r = 0; r < n; ++r)
                    if (choice[static_cast<std::size_t>(j - 1)] >> r & 1U)
                        s.add(ResourceId{r + 1}, j);
            best = std::max(best, gained_completeness(inst.profiles, s));
            return;
        }
        for (auto mask : options[static_cast<std::size_t>(t - 1)]) {
            choice[static_cast<std::size_t>(t - 1)] = mask;
            self(self, t + 1);
        }
    };
    rec(rec, 1);
    return best;
}

OracleInstance instance_of(ProfileSet set, Chronon k, std::int32_t c)
{
    return OracleInstance{std::move(set), BudgetVector::uniform(Epoch{k}, c), Epoch{k}};
}

} // namespace

TEST_CASE("small closed-form cases")
{
    auto one = optimal_gc(instance_of(make_set({{{ei(1, 1, 1)}}}), 1, 1));
    CHECK(one.gc == 1.0);
    auto clash = optimal_gc(instance_of(make_set({{{ei(1, 2, 2)}}, {{ei(2, 2, 2)}}}), 3, 1));
    CHECK(clash.gc == 0.5);
    auto wide = optimal_gc(instance_of(make_set({{{ei(1, 1, 2)}}, {{ei(2, 2, 2)}}}), 3, 1));
    CHECK(wide.gc == 1.0);
    CHECK_THROWS_AS(optimal_gc(instance_of(ProfileSet{}, 3, 1)), UndefinedMetric);
}

TEST_CASE("pruned search equals plain enumeration")
{
    std::mt19937_64 rng(17);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        TinyInstanceParams p;
        p.resources = pick(1, 3);
        p.chronons = pick(1, 6);
        p.ceis = pick(1, 4);
        p.max_rank = pick(1, 3);
        p.max_width = pick(1, 3);
        p.budget = pick(1, 2);
        p.no_intra_overlap = pick(0, 1) == 1;
        OracleInstance inst;
        try {
            inst = random_instance(p, seed);
        } catch (const std::invalid_argument&) {
            continue;
        }
        auto best = optimal_gc(inst);
        CAPTURE(seed);
        CHECK(best.gc == enumerate_best(inst));
        CHECK(schedule_feasible(best.witness, inst.budget));
        CHECK(gained_completeness(inst.profiles, best.witness) == best.gc);
        for (const auto& policy : all_policies()) {
            auto gc = run(inst.profiles, SimConfig{inst.epoch, inst.budget, policy}).second.gc;
            CHECK(gc <= best.gc);
            auto gap = policy_gap(inst, policy);
            CHECK(gap >= 0.0);
            CHECK(gap <= 1.0);
        }
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("random instance families honour their parameters")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        TinyInstanceParams p;
        p.resources = 4;
        p.chronons = 8;
        p.ceis = 5;
        p.max_rank = 1;
        p.max_width = 1;
        p.no_intra_overlap = true;
        auto inst = random_instance(p, seed);
        CHECK(set_rank(inst.profiles) <= 1);
        CHECK(inst.profiles.width_one());
        CHECK_FALSE(has_intra_resource_overlap(inst.profiles));
        CHECK(inst.profiles.resource_count() <= 4);

        p.exact_rank = 3;
        p.max_rank = 3;
        p.no_intra_overlap = false;
        auto eq = random_instance(p, seed);
        for (std::size_t c = 0; c < eq.profiles.cei_count(); ++c)
            CHECK(eq.profiles.cei(static_cast<int>(c)).size() == 3);
    }
}

TEST_CASE("S-EDF reaches the optimum on rank-1 instances without overlap")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        TinyInstanceParams p;
        p.resources = 3;
        p.chronons = 6;
        p.ceis = 6;
        p.max_rank = 1;
        p.max_width = 3;
        p.budget = 1 + static_cast<int>(seed % 2);
        p.no_intra_overlap = true;
        auto inst = random_instance(p, seed);
        CHECK(policy_gap(inst, PolicySpec{PolicyKind::sedf}) == 1.0);
    }
}

TEST_CASE("size guard")
{
    ProfileSetBuilder b;
    auto p = b.add_profile();
    for (int r = 1; r <= 12; ++r)
        b.add_cei(p, {ei(r, 1, 40)});
    OracleInstance big{std::move(b).build(), BudgetVector::uniform(Epoch{40}, 3), Epoch{40}};
    CHECK(estimate_search_nodes(big) > 1e7);
    CHECK_THROWS_WITH_AS(optimal_gc(big), "instance too large for exact oracle", OracleSizeError);
    big.node_ceiling = 1e300;
    CHECK(estimate_search_nodes(big) <= big.node_ceiling);
}

TEST_CASE("policy gap is one when nothing can be captured")
{
    auto set = make_set({{{ei(1, 1, 1), ei(2, 1, 1)}}});
    auto inst = instance_of(set, 1, 1);
    CHECK(optimal_gc(inst).gc == 0.0);
    CHECK(policy_gap(inst, PolicySpec{}) == 1.0);
}
