#include "ceisched/oracle.hpp"

#include "ceisched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace ceisched {

namespace {

double choose(std::size_t n, std::size_t k)
{
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

std::vector<std::vector<std::int32_t>> open_resources(const ProfileSet& set, Epoch epoch)
{
    std::vector<std::set<std::int32_t>> open(static_cast<std::size_t>(epoch.chronons) + 1);
    for (std::size_t i = 0; i < set.ei_count(); ++i) {
        const auto& ei = set.ei(static_cast<std::int32_t>(i));
        for (Chronon t = std::max<Chronon>(ei.start, 1); t <= std::min(ei.finish, epoch.chronons); ++t)
            open[static_cast<std::size_t>(t)].insert(ei.resource.index);
    }
    std::vector<std::vector<std::int32_t>> out(open.size());
    for (std::size_t t = 0; t < open.size(); ++t)
        out[t].assign(open[t].begin(), open[t].end());
    return out;
}

class Search {
public:
    explicit Search(const OracleInstance& inst)
        : set_(inst.profiles), budget_(inst.budget), k_(inst.epoch.chronons), captured_(set_.ei_count(), 0),
          cei_hits_(set_.cei_count(), 0)
    {
        by_resource_.resize(static_cast<std::size_t>(set_.resource_count()) + 1);
        for (std::size_t i = 0; i < set_.ei_count(); ++i) {
            const auto& ei = set_.ei(static_cast<std::int32_t>(i));
            by_resource_[static_cast<std::size_t>(ei.resource.index)].push_back(ei.id);
        }
    }

    OracleResult solve()
    {
        descend(1);
        OracleResult r;
        r.gc = static_cast<double>(best_) / static_cast<double>(set_.cei_count());
        r.witness = best_schedule_;
        r.nodes = nodes_;
        return r;
    }

private:
    std::int64_t full_ceis() const
    {
        std::int64_t n = 0;
        for (std::size_t c = 0; c < cei_hits_.size(); ++c)
            n += cei_hits_[c] == static_cast<std::int32_t>(set_.cei(static_cast<std::int32_t>(c)).size());
        return n;
    }

    // Captured CEIs plus every CEI none of whose uncaptured EIs has closed before t.
    std::int64_t upper_bound(Chronon t) const
    {
        std::int64_t bound = 0;
        for (std::size_t c = 0; c < set_.cei_count(); ++c) {
            const auto& cei = set_.cei(static_cast<std::int32_t>(c));
            bool doomed = std::any_of(cei.eis.begin(), cei.eis.end(), [&](const ExecutionInterval& ei) {
                return !captured_[static_cast<std::size_t>(ei.id)] && ei.finish < t;
            });
            bound += doomed ? 0 : 1;
        }
        return bound;
    }

    // Resources worth probing at t: some uncaptured EI of a live CEI is open.
    std::vector<std::int32_t> useful_resources(Chronon t) const
    {
        std::vector<std::int32_t> out;
        for (std::size_t r = 1; r < by_resource_.size(); ++r) {
            bool useful = std::any_of(by_resource_[r].begin(), by_resource_[r].end(), [&](std::int32_t id) {
                const auto& ei = set_.ei(id);
                return !captured_[static_cast<std::size_t>(id)] && ei.active_at(t);
            });
            if (useful)
                out.push_back(static_cast<std::int32_t>(r));
        }
        return out;
    }

    void probe(std::int32_t resource, Chronon t, std::vector<std::int32_t>& undo)
    {
        for (auto id : by_resource_[static_cast<std::size_t>(resource)]) {
            const auto& ei = set_.ei(id);
            if (!captured_[static_cast<std::size_t>(id)] && ei.active_at(t)) {
                captured_[static_cast<std::size_t>(id)] = 1;
                ++cei_hits_[static_cast<std::size_t>(ei.cei)];
                undo.push_back(id);
            }
        }
        current_.add(ResourceId{resource}, t);
    }

    void revert(std::int32_t resource, Chronon t, const std::vector<std::int32_t>& undo)
    {
        for (auto id : undo) {
            captured_[static_cast<std::size_t>(id)] = 0;
            --cei_hits_[static_cast<std::size_t>(set_.ei(id).cei)];
        }
        current_.remove(ResourceId{resource}, t);
    }

    void descend(Chronon t)
    {
        ++nodes_;
        if (best_ == static_cast<std::int64_t>(set_.cei_count()))
            return;
        if (t > k_) {
            auto got = full_ceis();
            if (got > best_) {
                best_ = got;
                best_schedule_ = current_;
            }
            return;
        }
        if (upper_bound(t) <= best_)
            return;

        auto options = useful_resources(t);
        auto take = std::min<std::size_t>(options.size(), static_cast<std::size_t>(budget_.at(t)));
        if (take == 0) {
            descend(t + 1);
            return;
        }
        std::vector<std::int32_t> pick;
        choose_and_descend(t, options, 0, take, pick);
    }

    void choose_and_descend(Chronon t, const std::vector<std::int32_t>& options, std::size_t from, std::size_t left,
                            std::vector<std::int32_t>& pick)
    {
        if (left == 0) {
            std::vector<std::vector<std::int32_t>> undo(pick.size());
            for (std::size_t i = 0; i < pick.size(); ++i)
                probe(pick[i], t, undo[i]);
            descend(t + 1);
            for (std::size_t i = pick.size(); i-- > 0;)
                revert(pick[i], t, undo[i]);
            return;
        }
        for (std::size_t i = from; i + left <= options.size(); ++i) {
            pick.push_back(options[i]);
            choose_and_descend(t, options, i + 1, left - 1, pick);
            pick.pop_back();
        }
    }

    const ProfileSet& set_;
    const BudgetVector& budget_;
    Chronon k_;
    std::vector<char> captured_;
    std::vector<std::int32_t> cei_hits_;
    std::vector<std::vector<std::int32_t>> by_resource_;
    Schedule current_;
    Schedule best_schedule_;
    std::int64_t best_ = -1;
    std::int64_t nodes_ = 0;
};

} // namespace

double estimate_search_nodes(const OracleInstance& instance)
{
    auto open = open_resources(instance.profiles, instance.epoch);
    double nodes = 1.0;
    for (Chronon t = 1; t <= instance.epoch.chronons; ++t) {
        auto a = open[static_cast<std::size_t>(t)].size();
        auto c = std::min<std::size_t>(a, static_cast<std::size_t>(std::max(instance.budget.at(t), 0)));
        nodes *= std::max(1.0, choose(a, c));
        if (!std::isfinite(nodes))
            break;
    }
    return nodes;
}

OracleResult optimal_gc(const OracleInstance& instance)
{
    if (instance.budget.size() != static_cast<std::size_t>(instance.epoch.chronons))
        throw std::invalid_argument("budget vector length does not match the epoch");
    if (instance.profiles.cei_count() == 0)
        throw UndefinedMetric("undefined metric: gained completeness over zero CEIs");
    for (std::size_t i = 0; i < instance.profiles.ei_count(); ++i)
        if (instance.profiles.ei(static_cast<std::int32_t>(i)).finish > instance.epoch.chronons)
            throw std::invalid_argument("EI outside the epoch");
    if (estimate_search_nodes(instance) > instance.node_ceiling)
        throw OracleSizeError("instance too large for exact oracle");
    return Search(instance).solve();
}

double policy_gap(const OracleInstance& instance, const PolicySpec& policy)
{
    auto best = optimal_gc(instance);
    SimConfig config{instance.epoch, instance.budget, policy};
    auto got = run(instance.profiles, config).second.gc;
    return best.gc == 0.0 ? 1.0 : got / best.gc;
}

OracleInstance random_instance(const TinyInstanceParams& params, std::uint64_t seed)
{
    if (params.resources < 1 || params.chronons < 1 || params.ceis < 1 || params.max_rank < 1 ||
        params.max_width < 1 || params.budget < 0)
        throw std::invalid_argument("invalid tiny-instance parameters");

    std::mt19937_64 rng(seed);
    auto uniform = [&](std::int32_t lo, std::int32_t hi) { return std::uniform_int_distribution<std::int32_t>(lo, hi)(rng); };

    std::int32_t profile_count = params.profiles > 0 ? params.profiles : uniform(1, params.ceis);
    ProfileSetBuilder builder;
    for (std::int32_t p = 0; p < profile_count; ++p)
        builder.add_profile();

    std::vector<EiSpec> placed;
    auto overlaps = [](const std::vector<EiSpec>& pool, const EiSpec& e) {
        return std::any_of(pool.begin(), pool.end(), [&](const EiSpec& o) {
            return o.resource == e.resource && o.start <= e.finish && e.start <= o.finish;
        });
    };

    std::int32_t made = 0;
    for (std::int32_t attempt = 0; made < params.ceis && attempt < params.ceis * 200; ++attempt) {
        std::int32_t rank = params.exact_rank > 0 ? params.exact_rank : uniform(1, params.max_rank);
        std::vector<EiSpec> eis;
        bool ok = true;
        for (std::int32_t e = 0; e < rank && ok; ++e) {
            ok = false;
            for (int tries = 0; tries < 50 && !ok; ++tries) {
                EiSpec spec;
                spec.resource = ResourceId{uniform(1, params.resources)};
                spec.start = uniform(1, params.chronons);
                spec.finish = std::min(spec.start + uniform(1, params.max_width) - 1, params.chronons);
                if (params.no_intra_overlap && (overlaps(placed, spec) || overlaps(eis, spec)))
                    continue;
                eis.push_back(spec);
                ok = true;
            }
        }
        if (!ok)
            continue;
        builder.add_cei(uniform(0, profile_count - 1), eis);
        placed.insert(placed.end(), eis.begin(), eis.end());
        ++made;
    }
    if (made == 0)
        builder.add_cei(0, {EiSpec{ResourceId{1}, 1, 1}});

    Epoch epoch(params.chronons);
    return OracleInstance{std::move(builder).build(), BudgetVector::uniform(epoch, params.budget), epoch};
}

} // namespace ceisched
