#ifndef CEISCHED_ORACLE_HPP
#define CEISCHED_ORACLE_HPP

#include "ceisched/model.hpp"
#include "ceisched/policy.hpp"

#include <cstdint>
#include <stdexcept>

namespace ceisched {

class OracleSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleInstance {
    ProfileSet profiles;
    BudgetVector budget;
    Epoch epoch;
    /// Upper limit on the estimated number of search nodes.
    double node_ceiling = 1e7;
};

struct OracleResult {
    double gc = 0.0;
    Schedule witness;
    std::int64_t nodes = 0;
};

/// Product over chronons of the number of probe subsets the search may branch
/// on, counting only resources with an EI window open at that chronon.
double estimate_search_nodes(const OracleInstance& instance);

/// Exact maximum gained completeness by depth-first search over chronons with
/// branch-and-bound. Throws OracleSizeError when the estimate exceeds the
/// ceiling, UndefinedMetric when there are no CEIs.
OracleResult optimal_gc(const OracleInstance& instance);

/// GC(policy) / GC(optimal), or 1 when the optimum is 0.
double policy_gap(const OracleInstance& instance, const PolicySpec& policy);

struct TinyInstanceParams {
    std::int32_t resources = 3;
    Chronon chronons = 6;
    std::int32_t ceis = 4;
    std::int32_t max_rank = 2;
    /// When > 0 every CEI has exactly this many EIs.
    std::int32_t exact_rank = 0;
    Chronon max_width = 3;
    std::int32_t budget = 1;
    bool no_intra_overlap = false;
    /// Number of profiles the CEIs are spread over; 0 picks at random.
    std::int32_t profiles = 0;
};

/// Random desk-sized instance for oracle comparisons. With no_intra_overlap
/// no two EIs on the same resource share a chronon.
OracleInstance random_instance(const TinyInstanceParams& params, std::uint64_t seed);

} // namespace ceisched

#endif
