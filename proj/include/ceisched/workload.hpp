#ifndef CEISCHED_WORKLOAD_HPP
#define CEISCHED_WORKLOAD_HPP

#include "ceisched/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ceisched {

struct UpdateEvent {
    ResourceId resource;
    Chronon chronon = 1;

    auto operator<=>(const UpdateEvent&) const = default;
};

enum class LifeMode { overwrite, window };

struct WorkloadParams {
    std::int32_t resources = 1000;  // n
    std::int32_t profiles = 100;    // m
    Chronon chronons = 1000;        // K
    double lambda = 20.0;           // expected updates per resource per epoch
    std::int32_t max_rank = 3;      // k
    double alpha = 0.0;             // inter-user (resource popularity) Zipf exponent
    double beta = 0.0;              // intra-user (profile rank) Zipf exponent
    Chronon window = 10;            // W; W = 0 gives width-1 EIs
    LifeMode life = LifeMode::window;
    /// No intra-resource overlap: resources within a profile are distinct and
    /// a CEI is dropped if any of its EIs would share a chronon with an
    /// already generated EI on the same resource.
    bool distinct_resources = false;
    /// Every profile gets rank exactly k instead of a Zipf(beta, k) draw.
    bool fixed_rank = false;

    void validate() const;
};

/// Zipf law over 1..N with P(i) proportional to 1 / i^s. s = 0 is uniform.
class ZipfDistribution {
public:
    ZipfDistribution(double exponent, std::int32_t n);

    template <typename Rng>
    std::int32_t operator()(Rng& rng) const
    {
        if (uniform_)
            return std::uniform_int_distribution<std::int32_t>(1, n_)(rng);
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return sample_at(u);
    }

    double probability(std::int32_t i) const;
    std::int32_t size() const { return n_; }

private:
    std::int32_t sample_at(double u) const;

    std::int32_t n_;
    bool uniform_;
    std::vector<double> cdf_;
};

/// One draw from Zipf(s, N) using a generator seeded with `seed`.
std::int32_t zipf_sample(double exponent, std::int32_t n, std::uint64_t seed);

/// Poisson(lambda) update counts per resource, placed at distinct chronons
/// drawn uniformly from 1..K. Sorted by (chronon, resource).
std::vector<UpdateEvent> gen_updates(std::int32_t resources, double lambda, Chronon chronons, std::uint64_t seed);

/// Builds m AuctionWatch-style profiles over an update stream.
ProfileSet gen_profiles(const WorkloadParams& params, const std::vector<UpdateEvent>& updates, std::uint64_t seed);

struct Trace {
    Chronon chronons = 0; // 0 when the file declared no epoch (empty file)
    std::vector<UpdateEvent> events;
    std::int32_t resources = 0;
};

/// Reads an update trace. Format:
///
///     # epoch K=<chronons> [t_min=<x> t_max=<y>]
///     resource,chronon
///     <int>,<number>
///
/// Raw times map affinely onto chronons: 1 + round((t - t_min) * (K - 1) / (t_max - t_min)),
/// identity when t_min / t_max are omitted. Events landing on the same
/// (resource, chronon) collapse to one update.
Trace load_trace(const std::string& path);
void save_updates(const std::string& path, Chronon chronons, const std::vector<UpdateEvent>& events);

} // namespace ceisched

#endif
