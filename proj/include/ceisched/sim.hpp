#ifndef CEISCHED_SIM_HPP
#define CEISCHED_SIM_HPP

#include "ceisched/model.hpp"
#include "ceisched/policy.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ceisched {

struct SimConfig {
    Epoch epoch;
    BudgetVector budget;
    PolicySpec policy;
    std::uint64_t seed = 0;
    std::int32_t repeats = 1;

    /// Throws std::invalid_argument on a malformed configuration.
    void validate() const;
};

struct MetricsReport {
    double gc = 0.0;
    double runtime_per_ei_ns = 0.0;
    double wall_clock_ns = 0.0;
    std::int64_t total_ceis = 0;
    std::int64_t total_eis = 0;
    std::int64_t captured_ceis = 0;
    std::int64_t failed_ceis = 0;
    std::int64_t pending_ceis = 0;
    std::int64_t captured_eis = 0;
    /// Uncaptured EIs whose window closed.
    std::int64_t expired_eis = 0;
    /// Uncaptured EIs dropped because a sibling expired first.
    std::int64_t abandoned_eis = 0;
    std::int64_t competitive_bound = 0;
};

/// Online scheduling loop over one profile set. Construct, then call step()
/// for t = 1..K in order (or use run()). The set must outlive the simulator.
class Simulator {
public:
    Simulator(const ProfileSet& set, const SimConfig& config);

    void step(Chronon t);
    /// Fails every CEI still pending after the last chronon.
    void finish();

    Chronon now() const { return now_; }
    const Schedule& schedule() const { return schedule_; }
    const CaptureState& state() const { return state_; }
    /// Revealed CEIs that are neither captured nor failed, ascending by id.
    std::vector<std::int32_t> candidate_ceis() const;
    /// Active candidate EIs considered at the last step.
    const std::vector<std::int32_t>& last_active() const { return active_; }
    MetricsReport metrics() const;

private:
    void fail_cei(std::int32_t cei, Chronon t);

    const ProfileSet& set_;
    SimConfig config_;
    Chronon now_ = 0;
    CaptureState state_;
    Schedule schedule_;

    std::vector<std::vector<std::int32_t>> arrivals_;  // chronon -> CEI ids
    std::vector<std::vector<std::int32_t>> starts_;    // chronon -> EI ids
    std::vector<std::vector<std::int32_t>> deadlines_; // chronon -> EI ids
    std::vector<char> revealed_;
    std::vector<char> done_; // captured or failed
    std::vector<Chronon> failed_at_;
    std::vector<std::int32_t> pool_;   // EIs that have started and may still be live
    std::vector<std::int32_t> active_; // pool filtered at the current chronon
    std::vector<char> probed_now_;
    std::int64_t elapsed_ns_ = 0;
};

/// Runs chronons 1..K and returns the schedule with its metrics.
/// Throws UndefinedMetric when the set holds no CEIs.
std::pair<Schedule, MetricsReport> run(const ProfileSet& set, const SimConfig& config);

/// Every EI promoted to its own rank-1 CEI, keeping profile membership and order.
ProfileSet promote_to_single_eis(const ProfileSet& set);

/// GC of the relaxed instance in which each EI counts on its own.
double single_ei_upper_bound(const ProfileSet& set, const SimConfig& config);

} // namespace ceisched

#endif
