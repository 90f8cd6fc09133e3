#include "ceisched/model.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>
#include <unordered_map>

namespace ceisched {

Epoch::Epoch(Chronon k) : chronons(k)
{
    if (k < 1)
        throw std::invalid_argument("epoch must contain at least one chronon");
}

Chronon ComplexExecutionInterval::arrival() const
{
    if (eis.empty())
        throw std::logic_error("CEI without execution intervals has no arrival");
    Chronon first = eis.front().start;
    for (const auto& ei : eis)
        first = std::min(first, ei.start);
    return first;
}

const ComplexExecutionInterval& ProfileSet::cei(std::int32_t id) const
{
    const Slot& s = cei_slots_.at(static_cast<std::size_t>(id));
    return profiles_[static_cast<std::size_t>(s.outer)].ceis[static_cast<std::size_t>(s.inner)];
}

const ExecutionInterval& ProfileSet::ei(std::int32_t id) const
{
    const Slot& s = ei_slots_.at(static_cast<std::size_t>(id));
    return cei(s.outer).eis[static_cast<std::size_t>(s.inner)];
}

std::int32_t ProfileSet::parent_rank(std::int32_t cei_id) const
{
    const Slot& s = cei_slots_.at(static_cast<std::size_t>(cei_id));
    return profile_ranks_[static_cast<std::size_t>(s.outer)];
}

std::int32_t ProfileSetBuilder::add_profile()
{
    auto id = static_cast<std::int32_t>(set_.profiles_.size());
    set_.profiles_.push_back(Profile{id, {}});
    set_.profile_ranks_.push_back(0);
    return id;
}

std::int32_t ProfileSetBuilder::add_cei(std::int32_t profile, const std::vector<EiSpec>& eis)
{
    if (profile < 0 || static_cast<std::size_t>(profile) >= set_.profiles_.size())
        throw std::invalid_argument("unknown profile " + std::to_string(profile));
    if (eis.empty())
        throw std::invalid_argument("a CEI needs at least one execution interval");

    auto cei_id = static_cast<std::int32_t>(set_.cei_slots_.size());
    ComplexExecutionInterval cei{cei_id, profile, {}};
    cei.eis.reserve(eis.size());
    for (const auto& spec : eis) {
        if (spec.resource.index < 1)
            throw std::invalid_argument("resource index must be >= 1");
        if (spec.start < 1 || spec.finish < spec.start)
            throw std::invalid_argument("execution interval needs 1 <= start <= finish");
        auto ei_id = static_cast<std::int32_t>(set_.ei_slots_.size());
        set_.ei_slots_.push_back({cei_id, static_cast<std::int32_t>(cei.eis.size())});
        cei.eis.push_back(ExecutionInterval{ei_id, cei_id, spec.resource, spec.start, spec.finish});
        set_.max_resource_ = std::max(set_.max_resource_, spec.resource.index);
        if (spec.finish != spec.start)
            set_.width_one_ = false;
    }

    auto& p = set_.profiles_[static_cast<std::size_t>(profile)];
    set_.cei_slots_.push_back({profile, static_cast<std::int32_t>(p.ceis.size())});
    auto& rank = set_.profile_ranks_[static_cast<std::size_t>(profile)];
    rank = std::max(rank, static_cast<std::int32_t>(cei.eis.size()));
    p.ceis.push_back(std::move(cei));
    return cei_id;
}

ProfileSet ProfileSetBuilder::build() &&
{
    return std::move(set_);
}

BudgetVector::BudgetVector(std::vector<std::int32_t> per_chronon) : per_chronon_(std::move(per_chronon))
{
    for (auto c : per_chronon_)
        if (c < 0)
            throw std::invalid_argument("budget entries must be non-negative");
}

BudgetVector BudgetVector::uniform(Epoch epoch, std::int32_t c)
{
    return BudgetVector(std::vector<std::int32_t>(static_cast<std::size_t>(epoch.chronons), c));
}

std::int32_t BudgetVector::at(Chronon t) const
{
    if (t < 1 || static_cast<std::size_t>(t) > per_chronon_.size())
        throw std::out_of_range("chronon " + std::to_string(t) + " outside budget vector");
    return per_chronon_[static_cast<std::size_t>(t - 1)];
}

bool Schedule::add(ResourceId resource, Chronon t)
{
    return probes_.insert(Probe{resource, t}).second;
}

bool Schedule::remove(ResourceId resource, Chronon t)
{
    return probes_.erase(Probe{resource, t}) > 0;
}

bool Schedule::probed(ResourceId resource, Chronon t) const
{
    return probes_.contains(Probe{resource, t});
}

bool Schedule::probed_within(ResourceId resource, Chronon from, Chronon to) const
{
    auto it = probes_.lower_bound(Probe{resource, from});
    return it != probes_.end() && it->resource == resource && it->chronon <= to;
}

bool ei_captured(const ExecutionInterval& ei, const Schedule& schedule)
{
    return schedule.probed_within(ei.resource, ei.start, ei.finish);
}

bool cei_captured(const ComplexExecutionInterval& cei, const Schedule& schedule)
{
    return std::all_of(cei.eis.begin(), cei.eis.end(),
                       [&](const ExecutionInterval& ei) { return ei_captured(ei, schedule); });
}

double gained_completeness(const ProfileSet& set, const Schedule& schedule)
{
    if (set.cei_count() == 0)
        throw UndefinedMetric("undefined metric: gained completeness over zero CEIs");
    std::size_t captured = 0;
    for (const auto& p : set.profiles())
        for (const auto& cei : p.ceis)
            captured += cei_captured(cei, schedule) ? 1 : 0;
    return static_cast<double>(captured) / static_cast<double>(set.cei_count());
}

std::int32_t profile_rank(const Profile& profile)
{
    std::size_t rank = 0;
    for (const auto& cei : profile.ceis)
        rank = std::max(rank, cei.size());
    return static_cast<std::int32_t>(rank);
}

std::int32_t set_rank(const ProfileSet& set)
{
    std::int32_t rank = 0;
    for (const auto& p : set.profiles())
        rank = std::max(rank, profile_rank(p));
    return rank;
}

bool schedule_feasible(const Schedule& schedule, const BudgetVector& budget)
{
    std::map<Chronon, std::int32_t> used;
    for (const auto& probe : schedule.probes())
        ++used[probe.chronon];
    for (const auto& [t, count] : used) {
        if (t < 1 || static_cast<std::size_t>(t) > budget.size())
            return false;
        if (count > budget.at(t))
            return false;
    }
    return true;
}

bool has_intra_resource_overlap(const ProfileSet& set)
{
    std::vector<ExecutionInterval> eis;
    eis.reserve(set.ei_count());
    for (std::size_t i = 0; i < set.ei_count(); ++i)
        eis.push_back(set.ei(static_cast<std::int32_t>(i)));
    std::sort(eis.begin(), eis.end(), [](const ExecutionInterval& a, const ExecutionInterval& b) {
        return std::tie(a.resource, a.start) < std::tie(b.resource, b.start);
    });
    for (std::size_t i = 1; i < eis.size(); ++i)
        if (eis[i].resource == eis[i - 1].resource && eis[i].start <= eis[i - 1].finish)
            return true;
    return false;
}

namespace {

constexpr std::string_view profiles_header = "cei_id,profile_id,resource,start,finish";
constexpr std::string_view schedule_header = "resource,chronon";

void expect_header(std::istream& in, std::string_view header, const char* what)
{
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != header)
        throw std::runtime_error(std::string(what) + ": expected header '" + std::string(header) + "'");
}

} // namespace

void write_profiles(std::ostream& out, const ProfileSet& set)
{
    out << profiles_header << '\n';
    for (std::size_t id = 0; id < set.cei_count(); ++id) {
        const auto& cei = set.cei(static_cast<std::int32_t>(id));
        for (const auto& ei : cei.eis)
            out << cei.id << ',' << cei.profile << ',' << ei.resource.index << ',' << ei.start << ','
                << ei.finish << '\n';
    }
}

ProfileSet read_profiles(std::istream& in)
{
    expect_header(in, profiles_header, "profile file");

    struct PendingCei {
        long long profile_label = 0;
        std::vector<EiSpec> eis;
    };
    std::vector<PendingCei> ceis;
    std::unordered_map<long long, std::size_t> cei_index;
    std::vector<long long> profile_order;
    std::unordered_map<long long, std::int32_t> profile_index;

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty())
            continue;
        auto fields = detail::parse_int_fields(line, 5, line_no);
        auto [it, inserted] = cei_index.try_emplace(fields[0], ceis.size());
        if (inserted)
            ceis.push_back(PendingCei{fields[1], {}});
        else if (ceis[it->second].profile_label != fields[1])
            throw std::runtime_error("line " + std::to_string(line_no) + ": CEI " + std::to_string(fields[0]) +
                                     " assigned to two profiles");
        if (profile_index.try_emplace(fields[1], static_cast<std::int32_t>(profile_order.size())).second)
            profile_order.push_back(fields[1]);
        ceis[it->second].eis.push_back(EiSpec{ResourceId{static_cast<std::int32_t>(fields[2])},
                                              static_cast<Chronon>(fields[3]), static_cast<Chronon>(fields[4])});
    }

    ProfileSetBuilder builder;
    for (std::size_t i = 0; i < profile_order.size(); ++i)
        builder.add_profile();
    for (const auto& c : ceis)
        builder.add_cei(profile_index.at(c.profile_label), c.eis);
    return std::move(builder).build();
}

void write_schedule(std::ostream& out, const Schedule& schedule)
{
    out << schedule_header << '\n';
    for (const auto& p : schedule.probes())
        out << p.resource.index << ',' << p.chronon << '\n';
}

Schedule read_schedule(std::istream& in)
{
    expect_header(in, schedule_header, "schedule file");
    Schedule s;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty())
            continue;
        auto f = detail::parse_int_fields(line, 2, line_no);
        s.add(ResourceId{static_cast<std::int32_t>(f[0])}, static_cast<Chronon>(f[1]));
    }
    return s;
}

void save_profiles(const std::string& path, const ProfileSet& set)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_profiles(out, set);
}

ProfileSet load_profiles(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_profiles(in);
}

void save_schedule(const std::string& path, const Schedule& schedule)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_schedule(out, schedule);
}

Schedule load_schedule(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_schedule(in);
}

} // namespace ceisched
