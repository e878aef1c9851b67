#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sublab/model.hpp"
#include "sublab/rng.hpp"

namespace sublab::sampler {

/// First-passage record over a level s.
struct PassageSample {
    double level;          // s
    double crossing_time;  // T(s)
    double undershoot;     // position just before crossing
    double overshoot;      // excess over s at crossing (0 when creeping)
    bool crept;            // crossed continuously by drift rather than by a jump
};

/// True when the record satisfies the type invariants.
bool passage_sample_ok(const PassageSample& p);

/// Small-jump truncation. Jumps below eps = eps_rel * level are dropped and,
/// when compensate is on, replaced by their mean drift. max_jumps caps the
/// per-sample jump count (guards runaway rates when eps is too small).
struct TruncationPolicy {
    double eps_rel = 1e-5;
    bool compensate = true;
    std::uint64_t max_jumps = 20'000'000;
};

/// Per-(spec, level, policy) sampling plan: truncated jump rate, jump-size
/// inverse sampler (closed form for stable, thinning with acceptance e^{-theta x}
/// for tempered stable, exact jump law for compound Poisson, bracketed bisection
/// on the tabulated tail), and the compensated drift rate.
class PreparedSampler {
public:
    PreparedSampler(const model::SubordinatorSpec& spec, double level, TruncationPolicy policy);

    /// One first-passage sample driven by the given stream.
    PassageSample sample(rng::PhiloxStream& stream) const;

    double level() const { return level_; }
    double eps() const { return eps_; }
    double jump_rate() const { return rate_; }
    double drift_rate() const { return drift_rate_; }
    const TruncationPolicy& policy() const { return policy_; }

private:
    double draw_tabulated(rng::PhiloxStream& stream) const;

    model::SubordinatorSpec spec_;
    TruncationPolicy policy_;
    double level_;
    double eps_;         // absolute cutoff (unused for finite-activity families)
    double rate_;        // arrival rate of simulated jumps (envelope rate for thinning)
    double drift_rate_;  // d + delta(eps) when compensating
    // Bracket table for tabulated tails: geometric abscissae and tail values.
    std::vector<double> bracket_x_;
    std::vector<double> bracket_tail_;
};

/// One first-passage simulation. See PreparedSampler for the scheme.
PassageSample sample_passage(const model::SubordinatorSpec& spec, double s,
                             const TruncationPolicy& policy, rng::PhiloxStream& stream);

/// Mean drift of the dropped small jumps:
/// integral of Pi(x,inf) over (0,eps) minus eps*Pi(eps,inf).
/// Zero for finite-activity families with no mass below eps.
double small_jump_drift(const model::SubordinatorSpec& spec, double eps);

/// n independent samples; replica i uses substream (seed, stream_base + i).
/// Output is ordered by replica index, so results are identical for any worker
/// count. Worker count comes from SUBORDINATOR_LAB_WORKERS (default: hardware).
std::vector<PassageSample> batch_passages(const model::SubordinatorSpec& spec, double s,
                                          const TruncationPolicy& policy, std::uint64_t n,
                                          std::uint64_t seed);

/// Same, reusing a prepared plan and offsetting the substream indices; this is
/// what keeps multi-level experiments (one plan per level) reproducible.
std::vector<PassageSample> batch_prepared(const PreparedSampler& prepared, std::uint64_t n,
                                          std::uint64_t seed, std::uint64_t stream_base);

/// Worker count used by batch fan-out: SUBORDINATOR_LAB_WORKERS or hardware.
unsigned worker_count();

/// Data section of the raw sample dump: header `replica,level,crossing_time,
/// undershoot,overshoot,crept` plus one row per sample (crept as 0/1).
void write_samples_csv(std::ostream& os, const std::vector<PassageSample>& samples);

}  // namespace sublab::sampler
