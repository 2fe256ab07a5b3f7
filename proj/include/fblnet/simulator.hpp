#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "fblnet/fbl.hpp"
#include "fblnet/meta_types.hpp"
#include "fblnet/network.hpp"
#include "fblnet/rng.hpp"

namespace fblnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// One sampled deployment. Arrays are parallel over BS index; each BS
/// carries at most one UE, placed uniformly over its coverage cell.
/// Placement stops once every guard-region BS is filled, so a few tiny
/// cells near the boundary may stay empty.
struct NetworkRealization {
    std::vector<Vec2> bs_positions;
    std::vector<Vec2> ue_positions;
    std::vector<std::uint8_t> has_ue;
    std::vector<double> serving_distance;  // r_i, meters
    std::size_t tagged_bs = 0;
    double region_half_width = 0.0;  // m
    double guard_margin = 0.0;       // m

    bool in_guard(std::size_t i) const;
    std::vector<std::size_t> guard_indices() const;
};

struct SimConfig {
    std::uint64_t seed = 20260809ULL;
    double region_km = 30.0;
    double guard_km = 5.0;
    long outage_iterations = 10000;
    long meta_samples_per_ue = 20000;
    long laplace_min_samples = 100000;
    long batch = 256;  // realizations per scheduling block
    int threads = 0;   // 0 = hardware concurrency

    void validate() const;
};

struct EstimateResult {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

struct DistanceBin {
    double lo_m = 0.0;
    double hi_m = 0.0;
};

struct MetaEstimates {
    MetaCurve exact;        // per-UE slot averaging of the realized rate
    MetaCurve lower_bound;  // per-UE closed-form success bound
};

/// Realizations rejected for having no BS (or no guard BS); diagnostic only.
std::uint64_t empty_realization_resamples();

NetworkRealization sample_network(const NetworkParams& params,
                                  const SimConfig& cfg,
                                  std::uint64_t realization_index);

/// One SINR draw at the tagged BS: fresh Exp(1) fading per link and
/// Bernoulli(δ) activity per interferer; the tagged UE always transmits.
double sample_sinr(const NetworkRealization& real, const NetworkParams& params,
                   RngStream& fading);

/// Rate outage over fresh realization + fading per iteration.
EstimateResult estimate_outage(RateValue rt, const FblParams& fbl,
                               const NetworkParams& params, const SimConfig& cfg);

/// Meta-distribution from one fixed realization, fading and activity
/// redrawn per slot until every guard UE has meta_samples_per_ue active
/// slots. Several target rates share the same realization and slots.
std::vector<MetaEstimates> estimate_meta_multi(const std::vector<double>& rt_list,
                                               const FblParams& fbl,
                                               const NetworkParams& params,
                                               const SimConfig& cfg,
                                               const std::vector<double>& p_grid);

MetaEstimates estimate_meta(RateValue rt, const FblParams& fbl,
                            const NetworkParams& params, const SimConfig& cfg,
                            const std::vector<double>& p_grid);

/// Mean of e^{-sI} over guard links whose serving distance falls in r0_bin,
/// accumulated across realizations until laplace_min_samples; the standard
/// error is cluster-robust over realizations.
EstimateResult estimate_laplace(double s, DistanceBin r0_bin,
                                const NetworkParams& params, const SimConfig& cfg);

/// SINR draws harvested from every guard UE across as many realizations
/// as needed; used for distribution-level cross-checks.
std::vector<double> sample_sinr_batch(const NetworkParams& params,
                                      const SimConfig& cfg, long min_samples);

/// Serving distances of guard UEs across realizations.
std::vector<double> sample_serving_distances(const NetworkParams& params,
                                             const SimConfig& cfg,
                                             long min_samples);

}  // namespace fblnet
