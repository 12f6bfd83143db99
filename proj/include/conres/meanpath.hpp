#pragma once

#include <cstdint>
#include <optional>

#include "conres/graph.hpp"

namespace conres {

// ============================================================================
// RNG: SplitMix64 with per-sample substreams
// ============================================================================

/// Counter-based 64-bit generator. Each sample of a Monte Carlo run draws its
/// own stream from (seed, sample index), so a run is reproducible and samples
/// can be evaluated in any order without changing the merged estimate.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Substream for one sample of a seeded run.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(mix(mix(seed) + index));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }
    std::uint64_t state_;
};

// ============================================================================
// Mean path signatures
// ============================================================================

/// Probability floor below which a conditioning event counts as impossible.
inline constexpr double kProbFloor = 1e-12;

enum class PathKind { endpoint, loop, conditioned };

struct MonteCarloInfo {
    std::uint64_t samples = 0;   // requested
    std::uint64_t accepted = 0;  // contributed to the estimate
    std::uint64_t censored = 0;  // exceeded max_steps
    std::uint64_t rejected = 0;  // failed the conditioning event
    double stderr_max = 0.0;     // entrywise max standard error of the mean
};

/// A d x d mean path signature with its provenance. Exact values come from
/// linear solves; Monte Carlo values carry sampling statistics.
struct MeanPathSignature {
    Matrix value;
    PathKind kind = PathKind::endpoint;
    std::optional<MonteCarloInfo> monte_carlo;  // empty for exact values

    bool exact() const { return !monte_carlo.has_value(); }
};

struct WalkConfig {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;  // 0: derive a cap from the graph

    void validate() const {
        if (samples < 1) throw InvalidParameter("samples must be >= 1");
    }
};

/// Default walk cap: 100 * n^2 * max_deg / min_weight, rounded up.
std::uint64_t default_max_steps(const WeightedGraph& g);

// ---- exact operations ----

/// Mean signatures from every vertex to j: block x holds the expected
/// signature product of a walk from x stopped on first arrival at j
/// (identity at x = j).
BlockVector omega0_all(const ConnectionGraph& cg, int j);

/// Expected signature product of a walk from i stopped at j; identity for
/// i = j.
MeanPathSignature omega0(const ConnectionGraph& cg, int i, int j);

/// Mean loop signature at i: expected product over excursions that leave i
/// and return to it. Symmetric, spectral norm <= 1.
MeanPathSignature omega1_loop(const ConnectionGraph& cg, int i);

/// Mean signature of a walk from x to i conditioned on reaching i before j.
/// x = i gives the identity; an unreachable conditioning event throws.
MeanPathSignature omega0_conditioned(const ConnectionGraph& cg, int x, int i,
                                     int j);

/// Same quantity computed through the conditioned (Doob-transformed) walk
/// kernel; used to cross-check the voltage factorization route.
MeanPathSignature omega0_conditioned_via_doob(const ConnectionGraph& cg, int x,
                                              int i, int j);

/// Mean loop signature at i over excursions returning to i before hitting j.
MeanPathSignature omega1_conditioned_loop(const ConnectionGraph& cg, int i,
                                          int j);

/// Mean signature from i to j conditioned on reaching j before returning
/// to i (the escaping excursions).
MeanPathSignature omega1_conditioned_escape(const ConnectionGraph& cg, int i,
                                            int j);

// ---- random walk quantities ----

/// P^x[T_i < T_j]: probability a walk from x hits i before j. Classical
/// scalar Dirichlet problem; 1 at x = i, 0 at x = j.
double hitting_probability(const WeightedGraph& g, int x, int i, int j);

/// P^i[T_j^1 < T_i^1]: probability a walk from i reaches j before returning
/// to i.
double escape_probability(const WeightedGraph& g, int i, int j);

// ---- Monte Carlo estimator ----

/// Sample mean of signature products along walks from i stopped on arrival
/// at j (s = 0 allows stopping at time 0; s = 1 requires at least one step).
/// With a conditioning vertex k, walks that hit k strictly before j are
/// rejected. Walks exceeding max_steps are censored and excluded. Throws
/// AllCensored when no sample is usable. Deterministic in (seed, samples,
/// max_steps).
MeanPathSignature mc_mean_path(const ConnectionGraph& cg, int i, int j, int s,
                               std::optional<int> condition,
                               const WalkConfig& cfg);

// ---- kernel transport ----

struct KernelTransportReport {
    double laplacian_residual;
    double max_transport_residual;
    bool pass(double tol = 1e-8) const { return max_transport_residual <= tol; }
};

/// For f in the kernel of the connection Laplacian, verify the transport
/// identity f(i) = Omega0_ij f(j) over all ordered pairs. Throws NotInKernel
/// if L f is not numerically zero.
KernelTransportReport kernel_transport_check(const ConnectionGraph& cg,
                                             const BlockVector& f);

} // namespace conres
