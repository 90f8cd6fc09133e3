#include "ceisched/workload.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace ceisched {

void WorkloadParams::validate() const
{
    if (resources < 1)
        throw std::invalid_argument("need at least one resource");
    if (profiles < 1)
        throw std::invalid_argument("need at least one profile");
    if (chronons < 1)
        throw std::invalid_argument("epoch must contain at least one chronon");
    if (!(lambda > 0.0))
        throw std::invalid_argument("update intensity lambda must be positive");
    if (max_rank < 1)
        throw std::invalid_argument("max rank must be >= 1");
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("Zipf exponents must be non-negative");
    if (window < 0)
        throw std::invalid_argument("window W must be non-negative");
    if (distinct_resources && max_rank > resources)
        throw std::invalid_argument("rank " + std::to_string(max_rank) + " exceeds " + std::to_string(resources) +
                                    " resources with distinct-resource profiles");
}

ZipfDistribution::ZipfDistribution(double exponent, std::int32_t n) : n_(n), uniform_(exponent == 0.0)
{
    if (n < 1)
        throw std::invalid_argument("Zipf support size must be >= 1");
    if (exponent < 0.0)
        throw std::invalid_argument("Zipf exponent must be non-negative");
    cdf_.resize(static_cast<std::size_t>(n));
    double total = 0.0;
    for (std::int32_t i = 1; i <= n; ++i) {
        total += std::pow(static_cast<double>(i), -exponent);
        cdf_[static_cast<std::size_t>(i - 1)] = total;
    }
    for (auto& c : cdf_)
        c /= total;
    cdf_.back() = 1.0;
}

double ZipfDistribution::probability(std::int32_t i) const
{
    if (i < 1 || i > n_)
        return 0.0;
    auto idx = static_cast<std::size_t>(i - 1);
    return idx == 0 ? cdf_[0] : cdf_[idx] - cdf_[idx - 1];
}

std::int32_t ZipfDistribution::sample_at(double u) const
{
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end())
        return n_;
    return static_cast<std::int32_t>(it - cdf_.begin()) + 1;
}

std::int32_t zipf_sample(double exponent, std::int32_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return ZipfDistribution(exponent, n)(rng);
}

namespace {

bool stream_order(const UpdateEvent& a, const UpdateEvent& b)
{
    return std::tie(a.chronon, a.resource) < std::tie(b.chronon, b.resource);
}

} // namespace

std::vector<UpdateEvent> gen_updates(std::int32_t resources, double lambda, Chronon chronons, std::uint64_t seed)
{
    if (!(lambda > 0.0))
        throw std::invalid_argument("update intensity lambda must be positive");
    if (resources < 1 || chronons < 1)
        throw std::invalid_argument("need at least one resource and one chronon");

    std::mt19937_64 rng(seed);
    std::poisson_distribution<std::int64_t> count_dist(lambda);
    std::vector<UpdateEvent> events;
    for (std::int32_t r = 1; r <= resources; ++r) {
        auto count = static_cast<Chronon>(std::min<std::int64_t>(count_dist(rng), chronons));
        // Floyd's sampling of `count` distinct chronons out of 1..K
        std::set<Chronon> picked;
        for (Chronon j = chronons - count + 1; j <= chronons; ++j) {
            Chronon t = std::uniform_int_distribution<Chronon>(1, j)(rng);
            picked.insert(picked.contains(t) ? j : t);
        }
        for (auto t : picked)
            events.push_back(UpdateEvent{ResourceId{r}, t});
    }
    std::sort(events.begin(), events.end(), stream_order);
    return events;
}

ProfileSet gen_profiles(const WorkloadParams& params, const std::vector<UpdateEvent>& updates, std::uint64_t seed)
{
    params.validate();
    if (updates.empty())
        throw std::invalid_argument("profile generation needs a non-empty update stream");

    std::vector<std::vector<Chronon>> by_resource(static_cast<std::size_t>(params.resources) + 1);
    for (const auto& u : updates) {
        if (u.resource.index < 1 || u.resource.index > params.resources)
            throw std::invalid_argument("update on resource " + std::to_string(u.resource.index) +
                                        " outside 1.." + std::to_string(params.resources));
        if (u.chronon < 1 || u.chronon > params.chronons)
            throw std::invalid_argument("update at chronon " + std::to_string(u.chronon) + " outside the epoch");
        by_resource[static_cast<std::size_t>(u.resource.index)].push_back(u.chronon);
    }
    for (auto& v : by_resource) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    std::mt19937_64 rng(seed);
    ZipfDistribution rank_dist(params.beta, params.max_rank);
    ZipfDistribution resource_dist(params.alpha, params.resources);

    // Emitted EI windows per resource (start -> finish), disjoint by
    // construction; only tracked in distinct-resource mode.
    std::vector<std::map<Chronon, Chronon>> occupied(params.distinct_resources ? by_resource.size() : 0);
    auto collides = [&](const EiSpec& e) {
        const auto& windows = occupied[static_cast<std::size_t>(e.resource.index)];
        auto it = windows.upper_bound(e.finish);
        return it != windows.begin() && std::prev(it)->second >= e.start;
    };

    ProfileSetBuilder builder;
    for (std::int32_t p = 0; p < params.profiles; ++p) {
        auto profile = builder.add_profile();
        std::int32_t rank = params.fixed_rank ? params.max_rank : rank_dist(rng);

        std::vector<std::int32_t> chosen;
        while (static_cast<std::int32_t>(chosen.size()) < rank) {
            auto r = resource_dist(rng);
            if (params.distinct_resources && std::find(chosen.begin(), chosen.end(), r) != chosen.end())
                continue;
            chosen.push_back(r);
        }

        for (auto anchor_update : by_resource[static_cast<std::size_t>(chosen.front())]) {
            std::vector<EiSpec> eis;
            for (auto r : chosen) {
                const auto& times = by_resource[static_cast<std::size_t>(r)];
                auto it = std::lower_bound(times.begin(), times.end(), anchor_update);
                if (it == times.end())
                    break;
                Chronon start = *it;
                Chronon finish = params.chronons;
                if (params.life == LifeMode::window)
                    finish = std::min(start + params.window, params.chronons);
                else if (std::next(it) != times.end())
                    finish = *std::next(it) - 1;
                eis.push_back(EiSpec{ResourceId{r}, start, finish});
            }
            if (static_cast<std::int32_t>(eis.size()) != rank)
                continue;
            if (params.distinct_resources) {
                if (std::any_of(eis.begin(), eis.end(), collides))
                    continue;
                for (const auto& e : eis)
                    occupied[static_cast<std::size_t>(e.resource.index)].emplace(e.start, e.finish);
            }
            builder.add_cei(profile, eis);
        }
    }
    return std::move(builder).build();
}

Trace load_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open trace " + path);

    Trace trace;
    bool have_epoch = false;
    bool have_header = false;
    double t_min = 0.0;
    double t_max = 0.0;
    bool have_range = false;

    std::string line;
    std::size_t line_no = 0;
    std::set<UpdateEvent> seen;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = detail::trim(line);
        if (text.empty())
            continue;
        if (text.front() == '#') {
            if (text.find("epoch") == std::string_view::npos)
                continue;
            std::optional<double> lo, hi;
            for (auto token : detail::split(text.substr(1), ' ')) {
                auto eq = token.find('=');
                if (eq == std::string_view::npos)
                    continue;
                auto key = token.substr(0, eq);
                auto value = token.substr(eq + 1);
                double v = 0.0;
                if (!detail::parse_number(value, v))
                    throw detail::line_error(line_no, "malformed epoch directive value '" + std::string(value) + "'");
                if (key == "K")
                    trace.chronons = static_cast<Chronon>(v);
                else if (key == "t_min")
                    lo = v;
                else if (key == "t_max")
                    hi = v;
            }
            if (trace.chronons < 1)
                throw detail::line_error(line_no, "epoch directive needs K >= 1");
            if (lo.has_value() != hi.has_value())
                throw detail::line_error(line_no, "t_min and t_max must be given together");
            have_range = lo.has_value();
            if (have_range) {
                t_min = *lo;
                t_max = *hi;
                if (t_max < t_min)
                    throw detail::line_error(line_no, "t_max < t_min");
            }
            have_epoch = true;
            continue;
        }
        if (!have_header) {
            if (text != "resource,chronon")
                throw detail::line_error(line_no, "expected header 'resource,chronon'");
            have_header = true;
            continue;
        }
        if (!have_epoch)
            throw detail::line_error(line_no, "trace rows before the '# epoch K=...' directive");

        auto parts = detail::split(text, ',');
        long long resource = 0;
        double raw = 0.0;
        if (parts.size() != 2 || !detail::parse_number(parts[0], resource) || !detail::parse_number(parts[1], raw))
            throw detail::line_error(line_no, "malformed trace row '" + std::string(text) + "'");
        if (resource < 1)
            throw detail::line_error(line_no, "resource index must be >= 1");

        double chronon = raw;
        if (have_range) {
            if (raw < t_min || raw > t_max)
                throw detail::line_error(line_no, "time outside declared range");
            chronon = t_max > t_min ? 1.0 + std::round((raw - t_min) * (trace.chronons - 1) / (t_max - t_min)) : 1.0;
        }
        if (chronon != std::floor(chronon) || chronon < 1.0 || chronon > trace.chronons)
            throw detail::line_error(line_no, "chronon outside epoch 1.." + std::to_string(trace.chronons));
        seen.insert(UpdateEvent{ResourceId{static_cast<std::int32_t>(resource)}, static_cast<Chronon>(chronon)});
        trace.resources = std::max(trace.resources, static_cast<std::int32_t>(resource));
    }

    trace.events.assign(seen.begin(), seen.end());
    std::sort(trace.events.begin(), trace.events.end(), stream_order);
    return trace;
}

void save_updates(const std::string& path, Chronon chronons, const std::vector<UpdateEvent>& events)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << "# epoch K=" << chronons << '\n' << "resource,chronon\n";
    for (const auto& e : events)
        out << e.resource.index << ',' << e.chronon << '\n';
}

} // namespace ceisched
