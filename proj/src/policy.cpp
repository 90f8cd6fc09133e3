#include "ceisched/policy.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace ceisched {

CaptureState::CaptureState(const ProfileSet& set)
    : captured_(set.ei_count(), 0), captured_per_cei_(set.cei_count(), 0), cei_sizes_(set.cei_count(), 0),
      failed_(set.cei_count(), 0)
{
    for (std::size_t i = 0; i < set.cei_count(); ++i)
        cei_sizes_[i] = static_cast<std::int32_t>(set.cei(static_cast<std::int32_t>(i)).size());
}

bool CaptureState::mark_captured(const ExecutionInterval& ei)
{
    auto& flag = captured_.at(static_cast<std::size_t>(ei.id));
    if (flag)
        return false;
    flag = 1;
    ++captured_per_cei_.at(static_cast<std::size_t>(ei.cei));
    return true;
}

void CaptureState::mark_failed(const ComplexExecutionInterval& cei)
{
    auto idx = static_cast<std::size_t>(cei.id);
    if (captured_per_cei_.at(idx) == cei_sizes_[idx])
        throw std::logic_error("CEI " + std::to_string(cei.id) + " is fully captured and cannot fail");
    failed_[idx] = 1;
}

PolicySpec parse_policy(std::string_view name)
{
    PolicySpec spec;
    std::string_view base = name;
    if (base.ends_with("-np")) {
        spec.preemption = Preemption::non_preemptive;
        base.remove_suffix(3);
    } else if (base.ends_with("-p")) {
        base.remove_suffix(2);
    }
    if (base == "s-edf")
        spec.kind = PolicyKind::sedf;
    else if (base == "mrsf")
        spec.kind = PolicyKind::mrsf;
    else if (base == "m-edf")
        spec.kind = PolicyKind::medf;
    else if (base == "wic")
        spec.kind = PolicyKind::wic;
    else
        throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
    return spec;
}

std::string policy_name(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::sedf:
        return "s-edf";
    case PolicyKind::mrsf:
        return "mrsf";
    case PolicyKind::medf:
        return "m-edf";
    case PolicyKind::wic:
        return "wic";
    }
    throw std::logic_error("bad policy kind");
}

std::string preemption_name(Preemption p)
{
    return p == Preemption::preemptive ? "p" : "np";
}

std::string policy_label(const PolicySpec& spec)
{
    return policy_name(spec.kind) + "-" + preemption_name(spec.preemption);
}

std::vector<PolicySpec> all_policies()
{
    std::vector<PolicySpec> out;
    for (auto kind : {PolicyKind::sedf, PolicyKind::mrsf, PolicyKind::medf})
        for (auto mode : {Preemption::preemptive, Preemption::non_preemptive})
            out.push_back(PolicySpec{kind, mode, InactiveRule::full_length});
    out.push_back(PolicySpec{PolicyKind::wic, Preemption::preemptive, InactiveRule::full_length});
    return out;
}

std::int64_t sedf_score(const ExecutionInterval& ei, Chronon t)
{
    if (t > ei.finish)
        throw std::domain_error("scored after deadline: EI " + std::to_string(ei.id) + " finished at " +
                                std::to_string(ei.finish) + ", chronon " + std::to_string(t));
    return static_cast<std::int64_t>(ei.finish) - t + 1;
}

std::int64_t mrsf_score(const ExecutionInterval& ei, const ProfileSet& set, const CaptureState& state)
{
    if (ei.cei < 0 || static_cast<std::size_t>(ei.cei) >= set.cei_count())
        throw std::invalid_argument("EI " + std::to_string(ei.id) + " has no known parent CEI");
    return static_cast<std::int64_t>(set.parent_rank(ei.cei)) - state.captured_count(ei.cei);
}

std::int64_t medf_score(const ExecutionInterval& ei, Chronon t, const ProfileSet& set, const CaptureState& state,
                        InactiveRule rule)
{
    if (ei.cei < 0 || static_cast<std::size_t>(ei.cei) >= set.cei_count())
        throw std::invalid_argument("EI " + std::to_string(ei.id) + " has no known parent CEI");
    std::int64_t total = 0;
    for (const auto& sibling : set.cei(ei.cei).eis) {
        if (state.captured(sibling.id))
            continue;
        if (t < sibling.start)
            total += rule == InactiveRule::full_length ? sibling.width() : sedf_score(sibling, 0);
        else
            total += sedf_score(sibling, t);
    }
    return total;
}

std::int64_t wic_utility(ResourceId resource, Chronon t, std::span<const std::int32_t> candidates,
                         const ProfileSet& set, const CaptureState& state)
{
    std::int64_t count = 0;
    for (auto id : candidates) {
        const auto& ei = set.ei(id);
        if (ei.resource == resource && ei.active_at(t) && !state.captured(id) && !state.failed(ei.cei))
            ++count;
    }
    return count;
}

namespace {

struct Ranked {
    int tier;
    std::int64_t score;
    Chronon arrival;
    std::int32_t cei;
    Chronon deadline; // orders siblings of one CEI
    std::int32_t resource;
    std::int32_t ei;

    auto key() const { return std::tie(tier, score, arrival, cei, deadline, resource, ei); }
    bool operator<(const Ranked& o) const { return key() < o.key(); }
};

} // namespace

std::vector<ResourceId> select_probes(std::span<const std::int32_t> candidates, Chronon t, std::int32_t budget,
                                      const PolicySpec& policy, const ProfileSet& set, const CaptureState& state)
{
    if (budget < 0)
        throw std::invalid_argument("negative probing budget");
    std::vector<ResourceId> picked;
    if (budget == 0 || candidates.empty())
        return picked;

    std::unordered_map<std::int32_t, std::int64_t> live_per_resource;
    if (policy.kind == PolicyKind::wic)
        for (auto id : candidates)
            ++live_per_resource[set.ei(id).resource.index];

    std::vector<Ranked> ranked;
    ranked.reserve(candidates.size());
    for (auto id : candidates) {
        const auto& ei = set.ei(id);
        if (!ei.active_at(t) || state.captured(id) || state.failed(ei.cei))
            throw std::logic_error("EI " + std::to_string(id) + " is not an active candidate at chronon " +
                                   std::to_string(t));
        std::int64_t score = 0;
        switch (policy.kind) {
        case PolicyKind::sedf:
            score = sedf_score(ei, t);
            break;
        case PolicyKind::mrsf:
            score = mrsf_score(ei, set, state);
            break;
        case PolicyKind::medf:
            score = medf_score(ei, t, set, state, policy.inactive_rule);
            break;
        case PolicyKind::wic:
            // higher utility wins
            score = -live_per_resource[ei.resource.index];
            break;
        }
        int tier = policy.preemption == Preemption::non_preemptive && !state.probed(ei.cei) ? 1 : 0;
        ranked.push_back(Ranked{tier, score, set.cei(ei.cei).arrival(), ei.cei, ei.finish, ei.resource.index, id});
    }
    std::sort(ranked.begin(), ranked.end());

    for (const auto& r : ranked) {
        if (static_cast<std::int32_t>(picked.size()) == budget)
            break;
        ResourceId res{r.resource};
        if (std::find(picked.begin(), picked.end(), res) == picked.end())
            picked.push_back(res);
    }
    return picked;
}

std::int64_t competitive_bound_l(const ProfileSet& set)
{
    if (set.cei_count() == 0)
        throw std::invalid_argument("competitive bound of an empty profile set");
    std::int64_t best = 0;
    for (const auto& p : set.profiles())
        for (const auto& cei : p.ceis) {
            std::int64_t total = 0;
            for (const auto& ei : cei.eis)
                total += ei.width();
            best = std::max(best, total);
        }
    return best;
}

} // namespace ceisched
