#ifndef CEISCHED_POLICY_HPP
#define CEISCHED_POLICY_HPP

#include "ceisched/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ceisched {

/// Running capture bookkeeping for one simulation: which EIs have been hit,
/// how many EIs of each CEI are captured, and which CEIs have failed.
class CaptureState {
public:
    CaptureState() = default;
    explicit CaptureState(const ProfileSet& set);

    bool captured(std::int32_t ei) const { return captured_[static_cast<std::size_t>(ei)] != 0; }
    std::int32_t captured_count(std::int32_t cei) const { return captured_per_cei_[static_cast<std::size_t>(cei)]; }
    /// CEI has at least one captured EI ("previously probed").
    bool probed(std::int32_t cei) const { return captured_count(cei) > 0; }
    bool failed(std::int32_t cei) const { return failed_[static_cast<std::size_t>(cei)] != 0; }

    /// Marks an EI captured; returns false if it already was.
    bool mark_captured(const ExecutionInterval& ei);
    /// Marks a CEI failed. Throws if the CEI is already fully captured.
    void mark_failed(const ComplexExecutionInterval& cei);

    std::size_t ei_count() const { return captured_.size(); }
    std::size_t cei_count() const { return failed_.size(); }

private:
    std::vector<char> captured_;
    std::vector<std::int32_t> captured_per_cei_;
    std::vector<std::int32_t> cei_sizes_;
    std::vector<char> failed_;
};

enum class PolicyKind { sedf, mrsf, medf, wic };
enum class Preemption { preemptive, non_preemptive };

/// How M-EDF scores a sibling EI that has not started yet.
enum class InactiveRule {
    full_length, ///< T_f - T_s + 1
    literal_t0   ///< S-EDF evaluated at T = 0, i.e. T_f + 1
};

struct PolicySpec {
    PolicyKind kind = PolicyKind::mrsf;
    Preemption preemption = Preemption::preemptive;
    InactiveRule inactive_rule = InactiveRule::full_length;

    bool operator==(const PolicySpec&) const = default;
};

/// Parses `s-edf`, `mrsf`, `m-edf`, `wic` with an optional `-p` / `-np`
/// suffix (default preemptive).
PolicySpec parse_policy(std::string_view name);
std::string policy_name(PolicyKind kind);
std::string preemption_name(Preemption p);
/// Canonical `<kind>-<p|np>` label.
std::string policy_label(const PolicySpec& spec);
/// All seven variants used in experiments: every scoring policy in both modes
/// plus WIC (preemptive only; it has no CEI notion).
std::vector<PolicySpec> all_policies();

std::int64_t sedf_score(const ExecutionInterval& ei, Chronon t);
std::int64_t mrsf_score(const ExecutionInterval& ei, const ProfileSet& set, const CaptureState& state);
std::int64_t medf_score(const ExecutionInterval& ei, Chronon t, const ProfileSet& set, const CaptureState& state,
                        InactiveRule rule = InactiveRule::full_length);
/// Number of live, uncaptured candidate EIs on `resource` whose window holds `t`.
std::int64_t wic_utility(ResourceId resource, Chronon t, std::span<const std::int32_t> candidates,
                         const ProfileSet& set, const CaptureState& state);

/// Chooses up to `budget` distinct resources to probe at chronon `t` from the
/// active candidate EIs (given by id). Resources are returned in pick order.
std::vector<ResourceId> select_probes(std::span<const std::int32_t> candidates, Chronon t, std::int32_t budget,
                                      const PolicySpec& policy, const ProfileSet& set, const CaptureState& state);

/// l = max over CEIs of the summed widths of their EIs.
std::int64_t competitive_bound_l(const ProfileSet& set);

} // namespace ceisched

#endif
