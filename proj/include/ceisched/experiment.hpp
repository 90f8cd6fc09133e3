#ifndef CEISCHED_EXPERIMENT_HPP
#define CEISCHED_EXPERIMENT_HPP

#include "ceisched/model.hpp"
#include "ceisched/oracle.hpp"
#include "ceisched/policy.hpp"
#include "ceisched/sim.hpp"
#include "ceisched/workload.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ceisched {

/// Everything needed to generate and score one experiment cell.
struct ExperimentConfig {
    WorkloadParams workload;
    std::int32_t budget = 1; // C, uniform over the epoch
    std::vector<PolicySpec> policies = all_policies();
    std::uint64_t seed = 1;
    std::int32_t repeats = 10;

    SimConfig sim_config(const PolicySpec& policy) const;
};

/// Reads `key = value` lines (`#` starts a comment). Keys: W, n, m, K, C,
/// lambda, rank, alpha, beta, policy, life, distinct, fixed_rank, seed,
/// repeats. `policy` takes a comma list of policy labels or `all`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
/// Applies one `key = value` override; throws std::invalid_argument.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Mixes a root seed with cell and repeat indices (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t cell, std::uint64_t repeat);

struct Instance {
    std::vector<UpdateEvent> updates;
    ProfileSet profiles;
};

Instance make_instance(const WorkloadParams& params, std::uint64_t seed);

/// One row of the per-run CSV.
struct RunRecord {
    PolicySpec policy;
    std::uint64_t seed = 0;
    WorkloadParams workload;
    std::int32_t budget = 1;
    MetricsReport metrics;
};

std::string run_record_header();
std::string format_run_record(const RunRecord& record);
RunRecord make_record(const ExperimentConfig& config, const PolicySpec& policy, std::uint64_t seed,
                      const MetricsReport& metrics);

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct SweepSpec {
    ExperimentConfig baseline;
    std::vector<SweepAxis> axes;
    /// Adds the single-EI upper bound (S-EDF-P on the relaxed instance) per cell.
    bool upper_bound = false;
    /// Timing-sensitive sweep: run cells one at a time.
    bool timing = false;

    void validate() const;
    /// Cartesian product of the axes over the baseline, first axis outermost.
    std::vector<ExperimentConfig> cells() const;
};

/// Named sweep layouts: rank, budget, lambda, profiles, alpha, beta, preemption, scalability.
SweepSpec sweep_preset(std::string_view name, const ExperimentConfig& baseline);

struct AggregateRow {
    std::size_t cell = 0;
    RunRecord mean; // metrics hold arithmetic means over successful repeats
    std::int32_t runs = 0;
    std::optional<double> upper_bound;
};

struct SweepResult {
    std::vector<ExperimentConfig> cells;
    /// raw[cell][repeat][policy]; empty inner vector when the repeat failed.
    std::vector<std::vector<std::vector<RunRecord>>> raw;
    /// bounds[cell][repeat], NaN when not computed or failed.
    std::vector<std::vector<double>> bounds;
    std::vector<AggregateRow> aggregate;
    std::vector<std::string> errors;

    const AggregateRow& find(std::size_t cell, const PolicySpec& policy) const;
};

/// Worker count from CEISCHED_WORKERS, else hardware concurrency.
unsigned default_workers();

SweepResult run_sweep(const SweepSpec& spec, unsigned workers = default_workers());

void write_raw_csv(std::ostream& out, const SweepResult& result);
std::string aggregate_header();
void write_aggregate_csv(std::ostream& out, const SweepResult& result);

struct OracleCheckRow {
    std::int64_t instance_id = 0;
    double optimal_gc = 0.0;
    PolicySpec policy;
    double policy_gc = 0.0;
    double gap = 0.0;
    std::int64_t bound_l = 0;
    /// "pass", "fail", or "na" when the instance does not meet the premise.
    std::string prop1 = "na";
    std::string prop2 = "na";
    std::string prop3 = "na";
};

enum class OracleFamily {
    single_no_overlap, ///< rank 1, width 1, no intra-resource overlap
    equal_width_one,   ///< width 1, every CEI of size k in {2, 3}
    general            ///< random ranks and widths, no intra-resource overlap
};

OracleFamily parse_oracle_family(std::string_view name);
TinyInstanceParams oracle_family_params(OracleFamily family, std::uint64_t seed);

/// Runs every policy and the exact oracle on `count` random tiny instances.
std::vector<OracleCheckRow> run_oracle_check(std::int64_t count, OracleFamily family, std::uint64_t seed,
                                             std::vector<std::string>* errors = nullptr);
std::string oracle_check_header();
void write_oracle_check_csv(std::ostream& out, const std::vector<OracleCheckRow>& rows);

} // namespace ceisched

#endif
