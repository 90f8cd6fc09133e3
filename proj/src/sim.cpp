#include "ceisched/sim.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace ceisched {

void SimConfig::validate() const
{
    if (epoch.chronons < 1)
        throw std::invalid_argument("epoch must contain at least one chronon");
    if (budget.size() != static_cast<std::size_t>(epoch.chronons))
        throw std::invalid_argument("budget vector length " + std::to_string(budget.size()) +
                                    " does not match epoch length " + std::to_string(epoch.chronons));
    if (repeats < 1)
        throw std::invalid_argument("repeats must be >= 1");
}

Simulator::Simulator(const ProfileSet& set, const SimConfig& config)
    : set_(set), config_(config), state_(set)
{
    config_.validate();
    const auto k = static_cast<std::size_t>(config_.epoch.chronons);
    arrivals_.resize(k + 2);
    starts_.resize(k + 2);
    deadlines_.resize(k + 2);
    revealed_.assign(set.cei_count(), 0);
    done_.assign(set.cei_count(), 0);
    failed_at_.assign(set.cei_count(), 0);
    probed_now_.assign(static_cast<std::size_t>(set.resource_count()) + 1, 0);

    for (std::size_t c = 0; c < set.cei_count(); ++c) {
        const auto& cei = set.cei(static_cast<std::int32_t>(c));
        for (const auto& ei : cei.eis) {
            if (!config_.epoch.contains(ei.start) || !config_.epoch.contains(ei.finish))
                throw std::invalid_argument("EI " + std::to_string(ei.id) + " lies outside the epoch");
            starts_[static_cast<std::size_t>(ei.start)].push_back(ei.id);
            deadlines_[static_cast<std::size_t>(ei.finish)].push_back(ei.id);
        }
        arrivals_[static_cast<std::size_t>(cei.arrival())].push_back(cei.id);
    }
}

void Simulator::fail_cei(std::int32_t cei, Chronon t)
{
    state_.mark_failed(set_.cei(cei));
    done_[static_cast<std::size_t>(cei)] = 1;
    failed_at_[static_cast<std::size_t>(cei)] = t;
}

void Simulator::step(Chronon t)
{
    if (t != now_ + 1 || !config_.epoch.contains(t))
        throw std::logic_error("chronon " + std::to_string(t) + " stepped out of order");
    auto started = std::chrono::steady_clock::now();
    now_ = t;
    const auto ut = static_cast<std::size_t>(t);

    for (auto cei : arrivals_[ut])
        revealed_[static_cast<std::size_t>(cei)] = 1;

    if (t > 1)
        for (auto id : deadlines_[ut - 1]) {
            const auto& ei = set_.ei(id);
            auto c = static_cast<std::size_t>(ei.cei);
            if (revealed_[c] && !done_[c] && !state_.captured(id))
                fail_cei(ei.cei, t);
        }

    for (auto id : starts_[ut])
        pool_.push_back(id);
    active_.clear();
    for (auto id : pool_) {
        const auto& ei = set_.ei(id);
        if (!state_.captured(id) && !done_[static_cast<std::size_t>(ei.cei)] && ei.finish >= t)
            active_.push_back(id);
    }
    pool_ = active_;

    auto picked = select_probes(active_, t, config_.budget.at(t), config_.policy, set_, state_);
    for (auto r : picked) {
        schedule_.add(r, t);
        probed_now_[static_cast<std::size_t>(r.index)] = 1;
    }
    for (auto id : active_) {
        const auto& ei = set_.ei(id);
        if (!probed_now_[static_cast<std::size_t>(ei.resource.index)])
            continue;
        state_.mark_captured(ei);
        if (state_.captured_count(ei.cei) == static_cast<std::int32_t>(set_.cei(ei.cei).size()))
            done_[static_cast<std::size_t>(ei.cei)] = 1;
    }
    for (auto r : picked)
        probed_now_[static_cast<std::size_t>(r.index)] = 0;

    elapsed_ns_ += std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started)
                       .count();
}

void Simulator::finish()
{
    for (std::size_t c = 0; c < set_.cei_count(); ++c)
        if (revealed_[c] && !done_[c])
            fail_cei(static_cast<std::int32_t>(c), now_ + 1);
}

std::vector<std::int32_t> Simulator::candidate_ceis() const
{
    std::vector<std::int32_t> out;
    for (std::size_t c = 0; c < set_.cei_count(); ++c)
        if (revealed_[c] && !done_[c])
            out.push_back(static_cast<std::int32_t>(c));
    return out;
}

MetricsReport Simulator::metrics() const
{
    MetricsReport m;
    m.total_ceis = static_cast<std::int64_t>(set_.cei_count());
    m.total_eis = static_cast<std::int64_t>(set_.ei_count());
    for (std::size_t c = 0; c < set_.cei_count(); ++c) {
        const auto id = static_cast<std::int32_t>(c);
        if (state_.failed(id))
            ++m.failed_ceis;
        else if (done_[c])
            ++m.captured_ceis;
        for (const auto& ei : set_.cei(id).eis) {
            if (state_.captured(ei.id))
                ++m.captured_eis;
            else if (state_.failed(id))
                ++(ei.finish < failed_at_[c] ? m.expired_eis : m.abandoned_eis);
        }
    }
    m.pending_ceis = m.total_ceis - m.captured_ceis - m.failed_ceis;
    if (m.total_ceis == 0)
        throw UndefinedMetric("undefined metric: gained completeness over zero CEIs");
    m.gc = static_cast<double>(m.captured_ceis) / static_cast<double>(m.total_ceis);
    m.competitive_bound = competitive_bound_l(set_);
    m.wall_clock_ns = static_cast<double>(elapsed_ns_);
    m.runtime_per_ei_ns = m.total_eis > 0 ? m.wall_clock_ns / static_cast<double>(m.total_eis) : 0.0;
    return m;
}

std::pair<Schedule, MetricsReport> run(const ProfileSet& set, const SimConfig& config)
{
    Simulator sim(set, config);
    for (Chronon t = 1; t <= config.epoch.chronons; ++t)
        sim.step(t);
    sim.finish();
    auto report = sim.metrics();
    return {sim.schedule(), report};
}

ProfileSet promote_to_single_eis(const ProfileSet& set)
{
    ProfileSetBuilder builder;
    for (std::size_t p = 0; p < set.profile_count(); ++p)
        builder.add_profile();
    for (std::size_t c = 0; c < set.cei_count(); ++c) {
        const auto& cei = set.cei(static_cast<std::int32_t>(c));
        for (const auto& ei : cei.eis)
            builder.add_cei(cei.profile, {EiSpec{ei.resource, ei.start, ei.finish}});
    }
    return std::move(builder).build();
}

double single_ei_upper_bound(const ProfileSet& set, const SimConfig& config)
{
    auto relaxed = promote_to_single_eis(set);
    return run(relaxed, config).second.gc;
}

} // namespace ceisched
