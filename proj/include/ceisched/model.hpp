#ifndef CEISCHED_MODEL_HPP
#define CEISCHED_MODEL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceisched {

/// Chronon index. Valid chronons of an epoch are 1..K; 0 is used only as the
/// "before the epoch" reference point by the M-EDF literal inactive rule.
using Chronon = std::int32_t;

/// Raised when a metric is evaluated on an input where it has no value
/// (for example gained completeness over zero CEIs).
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Epoch {
    Chronon chronons = 1;

    Epoch() = default;
    explicit Epoch(Chronon k);
    bool contains(Chronon t) const { return t >= 1 && t <= chronons; }
};

struct ResourceId {
    std::int32_t index = 1;

    auto operator<=>(const ResourceId&) const = default;
};

struct ExecutionInterval {
    std::int32_t id = 0;
    std::int32_t cei = 0;
    ResourceId resource;
    Chronon start = 1;
    Chronon finish = 1;

    Chronon width() const { return finish - start + 1; }
    bool active_at(Chronon t) const { return start <= t && t <= finish; }
};

struct ComplexExecutionInterval {
    std::int32_t id = 0;
    std::int32_t profile = 0;
    std::vector<ExecutionInterval> eis;

    Chronon arrival() const;
    std::size_t size() const { return eis.size(); }
};

struct Profile {
    std::int32_t id = 0;
    std::vector<ComplexExecutionInterval> ceis;

    std::size_t size() const { return ceis.size(); }
};

/// A validated collection of profiles with dense identifiers: profile ids are
/// 0..m-1, CEI ids 0..M-1 and EI ids 0..N-1, each assigned in insertion order
/// by ProfileSetBuilder. Lookups by id are O(1).
class ProfileSet {
public:
    ProfileSet() = default;

    const std::vector<Profile>& profiles() const { return profiles_; }
    const Profile& profile(std::int32_t id) const { return profiles_.at(static_cast<std::size_t>(id)); }
    const ComplexExecutionInterval& cei(std::int32_t id) const;
    const ExecutionInterval& ei(std::int32_t id) const;

    std::size_t profile_count() const { return profiles_.size(); }
    std::size_t cei_count() const { return cei_slots_.size(); }
    std::size_t ei_count() const { return ei_slots_.size(); }

    /// Largest resource index referenced by any EI (0 when empty).
    std::int32_t resource_count() const { return max_resource_; }

    /// rank(p) of the CEI's parent profile, cached.
    std::int32_t parent_rank(std::int32_t cei_id) const;

    /// True iff every EI of every CEI spans exactly one chronon.
    bool width_one() const { return width_one_; }

private:
    friend class ProfileSetBuilder;

    struct Slot {
        std::int32_t outer = 0;
        std::int32_t inner = 0;
    };

    std::vector<Profile> profiles_;
    std::vector<Slot> cei_slots_;
    std::vector<Slot> ei_slots_;
    std::vector<std::int32_t> profile_ranks_;
    std::int32_t max_resource_ = 0;
    bool width_one_ = true;
};

struct EiSpec {
    ResourceId resource;
    Chronon start = 1;
    Chronon finish = 1;
};

class ProfileSetBuilder {
public:
    std::int32_t add_profile();
    /// Appends a CEI to an existing profile and returns its id.
    std::int32_t add_cei(std::int32_t profile, const std::vector<EiSpec>& eis);
    ProfileSet build() &&;

private:
    ProfileSet set_;
};

class BudgetVector {
public:
    BudgetVector() = default;
    explicit BudgetVector(std::vector<std::int32_t> per_chronon);
    static BudgetVector uniform(Epoch epoch, std::int32_t c);

    std::int32_t at(Chronon t) const;
    std::size_t size() const { return per_chronon_.size(); }
    const std::vector<std::int32_t>& values() const { return per_chronon_; }

private:
    std::vector<std::int32_t> per_chronon_;
};

struct Probe {
    ResourceId resource;
    Chronon chronon = 1;

    auto operator<=>(const Probe&) const = default;
};

/// Sparse probe set; the dense s_{i,j} matrix is `probed(i, j)`.
class Schedule {
public:
    /// Returns false if the probe was already present.
    bool add(ResourceId resource, Chronon t);
    bool remove(ResourceId resource, Chronon t);
    bool probed(ResourceId resource, Chronon t) const;
    /// True if `resource` is probed at any chronon in [from, to].
    bool probed_within(ResourceId resource, Chronon from, Chronon to) const;

    std::size_t size() const { return probes_.size(); }
    bool empty() const { return probes_.empty(); }
    const std::set<Probe>& probes() const { return probes_; }

    bool operator==(const Schedule&) const = default;

private:
    std::set<Probe> probes_;
};

bool ei_captured(const ExecutionInterval& ei, const Schedule& schedule);
bool cei_captured(const ComplexExecutionInterval& cei, const Schedule& schedule);

/// Fraction of CEIs captured. Throws UndefinedMetric when the set holds no CEIs.
double gained_completeness(const ProfileSet& set, const Schedule& schedule);

std::int32_t profile_rank(const Profile& profile);
std::int32_t set_rank(const ProfileSet& set);

bool schedule_feasible(const Schedule& schedule, const BudgetVector& budget);

/// True if two EIs on the same resource share at least one chronon.
bool has_intra_resource_overlap(const ProfileSet& set);

// Line-oriented text formats. Profile sets: header
// `cei_id,profile_id,resource,start,finish`, one row per EI. Schedules: header
// `resource,chronon`, one row per probe. Ids in a profile file are labels; they
// are renumbered densely in order of first appearance on read.
void write_profiles(std::ostream& out, const ProfileSet& set);
ProfileSet read_profiles(std::istream& in);
void write_schedule(std::ostream& out, const Schedule& schedule);
Schedule read_schedule(std::istream& in);

void save_profiles(const std::string& path, const ProfileSet& set);
ProfileSet load_profiles(const std::string& path);
void save_schedule(const std::string& path, const Schedule& schedule);
Schedule load_schedule(const std::string& path);

} // namespace ceisched

#endif
