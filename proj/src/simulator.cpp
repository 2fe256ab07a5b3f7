#include "fblnet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fblnet/meta.hpp"
#include "fblnet/parallel.hpp"

namespace fblnet {

namespace {

std::atomic<std::uint64_t> g_resamples{0};

// uniform bucket grid over the square region for nearest-BS queries
class BsGrid {
public:
    BsGrid(const std::vector<Vec2>& bs, double half) : half_(half) {
        side_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(bs.size()))));
        cell_ = 2.0 * half_ / side_;
        const std::size_t nb = static_cast<std::size_t>(side_) * side_;
        std::vector<int> counts(nb, 0);
        for (const Vec2& b : bs) ++counts[bucket_of(b.x, b.y)];
        offsets_.assign(nb + 1, 0);
        for (std::size_t k = 0; k < nb; ++k) offsets_[k + 1] = offsets_[k] + counts[k];
        items_.resize(bs.size());
        std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
        for (int i = 0; i < static_cast<int>(bs.size()); ++i)
            items_[cursor[bucket_of(bs[i].x, bs[i].y)]++] = i;
    }

    int nearest(double x, double y, const std::vector<Vec2>& bs) const {
        const int bx = coord(x);
        const int by = coord(y);
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        auto scan = [&](int cx, int cy) {
            if (cx < 0 || cx >= side_ || cy < 0 || cy >= side_) return;
            const std::size_t b = static_cast<std::size_t>(cy) * side_ + cx;
            for (int k = offsets_[b]; k < offsets_[b + 1]; ++k) {
                const int i = items_[k];
                const double dx = bs[i].x - x;
                const double dy = bs[i].y - y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = i;
                }
            }
        };
        // expanding Chebyshev rings; a bucket at ring r is at least
        // (r-1)*cell away, so stop once that exceeds the current best
        for (int r = 0; r <= 2 * side_; ++r) {
            if (best >= 0) {
                const double reach = (r - 1) * cell_;
                if (reach > 0.0 && reach * reach >= best_d2) break;
            }
            for (int cy = by - r; cy <= by + r; ++cy) {
                if (cy == by - r || cy == by + r) {
                    for (int cx = bx - r; cx <= bx + r; ++cx) scan(cx, cy);
                } else {
                    scan(bx - r, cy);
                    if (r > 0) scan(bx + r, cy);
                }
            }
        }
        return best;
    }

private:
    int coord(double v) const {
        return std::clamp(static_cast<int>((v + half_) / cell_), 0, side_ - 1);
    }
    std::size_t bucket_of(double x, double y) const {
        return static_cast<std::size_t>(coord(y)) * side_ + coord(x);
    }

    double half_, cell_;
    int side_;
    std::vector<int> offsets_;
    std::vector<int> items_;
};

double dist(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// P_j * d(ue_j, bs_i)^-eta for one receiving BS
double link_gain(const NetworkRealization& real, const NetworkParams& p,
                 std::size_t ue_j, const Vec2& bs) {
    const double dx = real.ue_positions[ue_j].x - bs.x;
    const double dy = real.ue_positions[ue_j].y - bs.y;
    const double d2 = dx * dx + dy * dy;
    const double power =
        p.rho_o * std::pow(real.serving_distance[ue_j], p.alpha * p.eta);
    return power * std::pow(d2, -p.eta / 2.0);
}

// one fresh activity+fading draw of the aggregate interference at bs index i
double draw_interference(const NetworkRealization& real, const NetworkParams& p,
                         std::size_t i, RngStream& rng) {
    double sum = 0.0;
    const Vec2 bs = real.bs_positions[i];
    for (std::size_t j = 0; j < real.bs_positions.size(); ++j) {
        if (j == i || !real.has_ue[j]) continue;
        if (!rng.bernoulli(p.delta)) continue;
        sum += rng.exponential() * link_gain(real, p, j, bs);
    }
    return sum;
}

// Cells sampled through uniform probe locations inside the guard region,
// i.e. weighted by coverage area. The closed forms condition on a typical
// point, whose serving cell is area-biased; equal-weight enumeration of
// cells would skew the serving-distance law short by ~10%.
std::vector<int> probe_cells(const NetworkRealization& real, const Philox& eng,
                             std::uint64_t realization_index, std::size_t count) {
    const BsGrid grid(real.bs_positions, real.region_half_width);
    RngStream probes(eng, make_stream(StreamPurpose::Probe, realization_index));
    const double lim = real.region_half_width - real.guard_margin;
    std::vector<int> cells(count, -1);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = (2.0 * probes.uniform01() - 1.0) * lim;
        const double y = (2.0 * probes.uniform01() - 1.0) * lim;
        const int i = grid.nearest(x, y, real.bs_positions);
        if (i >= 0 && real.has_ue[i]) cells[k] = i;  // unfilled cells skipped
    }
    return cells;
}

}  // namespace

bool NetworkRealization::in_guard(std::size_t i) const {
    const double lim = region_half_width - guard_margin;
    return std::fabs(bs_positions[i].x) <= lim && std::fabs(bs_positions[i].y) <= lim;
}

std::vector<std::size_t> NetworkRealization::guard_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bs_positions.size(); ++i)
        if (in_guard(i)) out.push_back(i);
    return out;
}

void SimConfig::validate() const {
    if (!(region_km > 0.0)) throw std::domain_error("SimConfig: region_km must be > 0");
    if (!(guard_km >= 0.0)) throw std::domain_error("SimConfig: guard_km must be >= 0");
    if (!(region_km > 2.0 * guard_km))
        throw std::domain_error("SimConfig: region_km must exceed 2*guard_km");
    if (outage_iterations < 1 || meta_samples_per_ue < 1 || laplace_min_samples < 1 ||
        batch < 1)
        throw std::domain_error("SimConfig: counts must be positive");
}

std::uint64_t empty_realization_resamples() { return g_resamples.load(); }

NetworkRealization sample_network(const NetworkParams& params, const SimConfig& cfg,
                                  std::uint64_t realization_index) {
    cfg.validate();
    const Philox eng(cfg.seed);
    const double half = cfg.region_km * 500.0;  // km -> m, half width
    const double guard = cfg.guard_km * 1000.0;
    const double area = 4.0 * half * half;

    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        RngStream geo(eng, make_stream(StreamPurpose::BsGeometry, realization_index,
                                       attempt));
        const long nbs = geo.poisson(params.lambda_bs * area);
        if (nbs == 0) {
            ++g_resamples;
            continue;
        }
        NetworkRealization real;
        real.region_half_width = half;
        real.guard_margin = guard;
        real.bs_positions.resize(nbs);
        for (long i = 0; i < nbs; ++i) {
            real.bs_positions[i].x = (2.0 * geo.uniform01() - 1.0) * half;
            real.bs_positions[i].y = (2.0 * geo.uniform01() - 1.0) * half;
        }
        const std::vector<std::size_t> guard_idx = real.guard_indices();
        if (guard_idx.empty()) {
            ++g_resamples;
            continue;
        }

        // one UE per cell by region-wide rejection: scatter candidates, keep
        // the first hit per cell, stop once every guard cell is occupied
        const BsGrid grid(real.bs_positions, half);
        real.ue_positions.resize(nbs);
        real.has_ue.assign(nbs, 0);
        real.serving_distance.assign(nbs, 0.0);
        std::vector<std::uint8_t> guard_flag(nbs, 0);
        for (std::size_t g : guard_idx) guard_flag[g] = 1;
        long unfilled_guard = static_cast<long>(guard_idx.size());
        RngStream place(eng, make_stream(StreamPurpose::UePlacement,
                                         realization_index, attempt));
        const long max_candidates = 20000000;
        for (long c = 0; c < max_candidates && unfilled_guard > 0; ++c) {
            const double x = (2.0 * place.uniform01() - 1.0) * half;
            const double y = (2.0 * place.uniform01() - 1.0) * half;
            const int i = grid.nearest(x, y, real.bs_positions);
            if (i < 0 || real.has_ue[i]) continue;
            real.ue_positions[i] = {x, y};
            real.has_ue[i] = 1;
            real.serving_distance[i] = dist(real.ue_positions[i], real.bs_positions[i]);
            if (guard_flag[i]) --unfilled_guard;
        }
        if (unfilled_guard > 0)
            throw std::runtime_error("sample_network: cell fill did not terminate");

        double best = std::numeric_limits<double>::infinity();
        for (std::size_t g : guard_idx) {
            const double d = std::hypot(real.bs_positions[g].x, real.bs_positions[g].y);
            if (d < best) {
                best = d;
                real.tagged_bs = g;
            }
        }
        return real;
    }
    throw std::runtime_error("sample_network: could not draw a usable realization");
}

double sample_sinr(const NetworkRealization& real, const NetworkParams& params,
                   RngStream& fading) {
    const std::size_t t = real.tagged_bs;
    if (!real.has_ue[t])
        throw std::logic_error("sample_sinr: tagged BS has no UE");
    const double h0 = fading.exponential();  // tagged UE always transmits
    const double sig = params.rho_o * h0 *
                       std::pow(real.serving_distance[t],
                                -params.eta * (1.0 - params.alpha));
    const double denom = draw_interference(real, params, t, fading) + params.noise;
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return sig / denom;
}

EstimateResult estimate_outage(RateValue rt, const FblParams& fbl,
                               const NetworkParams& params, const SimConfig& cfg) {
    cfg.validate();
    const Philox eng(cfg.seed);
    const long n = cfg.outage_iterations;
    std::vector<std::uint8_t> hit(n, 0);
    parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t i) {
        const NetworkRealization real = sample_network(params, cfg, i);
        RngStream fading(eng, make_stream(StreamPurpose::OutageFading, i));
        const double omega = sample_sinr(real, params, fading);
        hit[i] = fbr_rate(omega, fbl).bits_per_channel_use <
                 rt.bits_per_channel_use;
    });
    long outages = 0;
    for (std::uint8_t h : hit) outages += h;
    EstimateResult res;
    res.samples = n;
    res.value = static_cast<double>(outages) / n;
    res.std_error = std::sqrt(res.value * (1.0 - res.value) / n);
    return res;
}

namespace {

struct MetaWorkspace {
    NetworkRealization real;
    std::vector<std::size_t> guard;   // BS indices with measured UEs
    std::vector<double> gain;         // m x n link gains, row-major
    std::vector<double> signal_coef;  // rho * r0^{-eta(1-alpha)} per guard UE
    std::size_t n = 0;
};

MetaWorkspace build_meta_workspace(const NetworkParams& params, const SimConfig& cfg) {
    MetaWorkspace ws;
    ws.real = sample_network(params, cfg, 0);
    ws.guard = ws.real.guard_indices();
    ws.n = ws.real.bs_positions.size();
    const std::size_t m = ws.guard.size();
    ws.gain.assign(m * ws.n, 0.0);
    ws.signal_coef.resize(m);
    for (std::size_t gi = 0; gi < m; ++gi) {
        const std::size_t i = ws.guard[gi];
        const Vec2 bs = ws.real.bs_positions[i];
        double* row = &ws.gain[gi * ws.n];
        for (std::size_t j = 0; j < ws.n; ++j)
            if (ws.real.has_ue[j]) row[j] = link_gain(ws.real, params, j, bs);
        ws.signal_coef[gi] =
            params.rho_o * std::pow(ws.real.serving_distance[i],
                                    -params.eta * (1.0 - params.alpha));
    }
    return ws;
}

MetaCurve curve_from_values(const std::vector<double>& per_ue,
                            const std::vector<double>& p_grid, MetaMethod method) {
    MetaCurve c;
    c.p_grid = p_grid;
    c.method = method;
    c.values.reserve(p_grid.size());
    for (double p : p_grid) {
        long count = 0;
        for (double v : per_ue) count += (v > p);
        c.values.push_back(static_cast<double>(count) / per_ue.size());
    }
    return c;
}

}  // namespace

std::vector<MetaEstimates> estimate_meta_multi(const std::vector<double>& rt_list,
                                               const FblParams& fbl,
                                               const NetworkParams& params,
                                               const SimConfig& cfg,
                                               const std::vector<double>& p_grid) {
    cfg.validate();
    if (rt_list.empty()) throw std::invalid_argument("estimate_meta: empty rate list");
    if (p_grid.empty()) throw std::invalid_argument("estimate_meta: empty p grid");
    if (!(params.delta > 0.0))
        throw std::invalid_argument("estimate_meta: requires delta > 0");

    const Philox eng(cfg.seed);
    const MetaWorkspace ws = build_meta_workspace(params, cfg);
    const std::size_t m = ws.guard.size();
    const std::size_t n = ws.n;
    const long target = cfg.meta_samples_per_ue;

    // pass 1: per-UE activity counts fix each UE's measurement window
    // (its first `target` active slots); slots are then processed in
    // parallel against the precomputed cutoffs
    std::vector<long> active_seen(m, 0);
    std::vector<long> cutoff(m, -1);
    long open = static_cast<long>(m);
    long total_slots = 0;
    const long slot_cap =
        std::max<long>(1000, static_cast<long>(16.0 * target / params.delta));
    while (open > 0) {
        if (total_slots >= slot_cap)
            throw std::runtime_error("estimate_meta: activity too sparse to reach target");
        const std::uint64_t act_stream =
            make_stream(StreamPurpose::MetaActivity, total_slots);
        for (std::size_t gi = 0; gi < m; ++gi) {
            if (active_seen[gi] >= target) continue;
            if (eng.uniform(act_stream, ws.guard[gi]) < params.delta) {
                if (++active_seen[gi] == target) {
                    cutoff[gi] = total_slots;
                    --open;
                }
            }
        }
        ++total_slots;
    }

    // pass 2: redraw activity and fading per slot, accumulate per-UE
    // success counts for every target rate
    const std::size_t n_rt = rt_list.size();
    const long chunk = 512;
    const std::size_t n_chunks = (total_slots + chunk - 1) / chunk;
    std::vector<std::vector<long>> chunk_counts(
        n_chunks, std::vector<long>(n_rt * m, 0));
    const double bn = bonus_b(fbl);

    parallel_for(n_chunks, cfg.threads, [&](std::size_t ci) {
        std::vector<double> v(n);
        std::vector<long>& counts = chunk_counts[ci];
        const long lo = static_cast<long>(ci) * chunk;
        const long hi = std::min<long>(lo + chunk, total_slots);
        for (long slot = lo; slot < hi; ++slot) {
            const std::uint64_t act_stream =
                make_stream(StreamPurpose::MetaActivity, slot);
            const std::uint64_t fade_stream =
                make_stream(StreamPurpose::MetaFading, slot);
            for (std::size_t j = 0; j < n; ++j) {
                const bool active = ws.real.has_ue[j] &&
                                    eng.uniform(act_stream, j) < params.delta;
                v[j] = active ? -std::log(eng.uniform(fade_stream, j)) : 0.0;
            }
            for (std::size_t gi = 0; gi < m; ++gi) {
                if (slot > cutoff[gi]) continue;
                const std::size_t own = ws.guard[gi];
                if (v[own] == 0.0) continue;  // UE silent this slot
                const double* row = &ws.gain[gi * n];
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
                const double interference = acc - row[own] * v[own];
                const double omega =
                    ws.signal_coef[gi] * v[own] / (interference + params.noise);
                const double rate = std::log2(1.0 + omega) -
                                    penalty_a(omega, fbl) + bn;
                for (std::size_t k = 0; k < n_rt; ++k)
                    counts[k * m + gi] += (rate > rt_list[k]);
            }
        }
    });

    std::vector<long> success(n_rt * m, 0);
    for (const auto& c : chunk_counts)
        for (std::size_t idx = 0; idx < success.size(); ++idx) success[idx] += c[idx];

    std::vector<MetaEstimates> out(n_rt);
    for (std::size_t k = 0; k < n_rt; ++k) {
        std::vector<double> exact_prob(m), lb_prob(m);
        const double theta = sinr_threshold({rt_list[k]}, fbl,
                                            std::numeric_limits<double>::infinity());
        for (std::size_t gi = 0; gi < m; ++gi) {
            exact_prob[gi] = static_cast<double>(success[k * m + gi]) / target;
            // closed-form success bound from the fixed geometry
            const double c0 = 1.0 / ws.signal_coef[gi];  // r0^{eta(1-a)}/rho
            double lb = std::exp(-theta * params.noise * c0);
            const double* row = &ws.gain[gi * n];
            const std::size_t own = ws.guard[gi];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == own || row[j] == 0.0) continue;
                lb *= params.delta / (1.0 + theta * row[j] * c0) +
                      (1.0 - params.delta);
            }
            lb_prob[gi] = lb;
        }
        out[k].exact = curve_from_values(exact_prob, p_grid, MetaMethod::mc_exact);
        out[k].lower_bound =
            curve_from_values(lb_prob, p_grid, MetaMethod::mc_lower_bound);
    }
    return out;
}

MetaEstimates estimate_meta(RateValue rt, const FblParams& fbl,
                            const NetworkParams& params, const SimConfig& cfg,
                            const std::vector<double>& p_grid) {
    return estimate_meta_multi({rt.bits_per_channel_use}, fbl, params, cfg,
                               p_grid)[0];
}

EstimateResult estimate_laplace(double s, DistanceBin r0_bin,
                                const NetworkParams& params, const SimConfig& cfg) {
    cfg.validate();
    if (std::isnan(s) || s < 0.0)
        throw std::domain_error("estimate_laplace: s must be >= 0");
    if (!(r0_bin.lo_m < r0_bin.hi_m))
        throw std::domain_error("estimate_laplace: empty distance bin");

    const Philox eng(cfg.seed);
    double total = 0.0;
    long count = 0;
    std::vector<double> cluster_sum;
    std::vector<long> cluster_count;
    const long max_realizations = 1 << 20;
    std::uint64_t r = 0;
    while (count < cfg.laplace_min_samples) {
        if (static_cast<long>(r) >= max_realizations)
            throw std::runtime_error(
                "estimate_laplace: conditioning bin yielded too few samples");
        const long b = cfg.batch;
        std::vector<double> sums(b, 0.0);
        std::vector<long> counts(b, 0);
        parallel_for(static_cast<std::size_t>(b), cfg.threads, [&](std::size_t k) {
            const NetworkRealization real = sample_network(params, cfg, r + k);
            const std::vector<int> cells =
                probe_cells(real, eng, r + k, real.guard_indices().size());
            for (std::size_t q = 0; q < cells.size(); ++q) {
                if (cells[q] < 0) continue;
                const std::size_t i = cells[q];
                const double d = real.serving_distance[i];
                if (d < r0_bin.lo_m || d >= r0_bin.hi_m) continue;
                RngStream rng(eng,
                              make_stream(StreamPurpose::LaplaceFading, r + k, q));
                const double interference = draw_interference(real, params, i, rng);
                sums[k] += std::exp(-s * interference);
                ++counts[k];
            }
        });
        for (long k = 0; k < b; ++k) {
            if (counts[k] == 0) continue;
            total += sums[k];
            count += counts[k];
            cluster_sum.push_back(sums[k]);
            cluster_count.push_back(counts[k]);
        }
        r += b;
    }

    EstimateResult res;
    res.samples = count;
    res.value = total / count;
    // ratio-estimator standard error over realization clusters
    double ss = 0.0;
    for (std::size_t k = 0; k < cluster_sum.size(); ++k) {
        const double dev = cluster_sum[k] - res.value * cluster_count[k];
        ss += dev * dev;
    }
    const double nr = static_cast<double>(cluster_sum.size());
    if (nr > 1.0)
        res.std_error = std::sqrt(ss * nr / (nr - 1.0)) / count;
    return res;
}

std::vector<double> sample_sinr_batch(const NetworkParams& params,
                                      const SimConfig& cfg, long min_samples) {
    cfg.validate();
    const Philox eng(cfg.seed);
    std::vector<double> out;
    std::uint64_t r = 0;
    while (static_cast<long>(out.size()) < min_samples) {
        const long b = cfg.batch;
        std::vector<std::vector<double>> block(b);
        parallel_for(static_cast<std::size_t>(b), cfg.threads, [&](std::size_t k) {
            const NetworkRealization real = sample_network(params, cfg, r + k);
            const std::vector<int> cells =
                probe_cells(real, eng, r + k, real.guard_indices().size());
            for (std::size_t q = 0; q < cells.size(); ++q) {
                if (cells[q] < 0) continue;
                const std::size_t i = cells[q];
                RngStream rng(eng, make_stream(StreamPurpose::CdfFading, r + k, q));
                const double h0 = rng.exponential();
                const double sig =
                    params.rho_o * h0 *
                    std::pow(real.serving_distance[i],
                             -params.eta * (1.0 - params.alpha));
                const double denom =
                    draw_interference(real, params, i, rng) + params.noise;
                block[k].push_back(
                    denom == 0.0 ? std::numeric_limits<double>::infinity()
                                 : sig / denom);
            }
        });
        for (auto& v : block) out.insert(out.end(), v.begin(), v.end());
        r += b;
    }
    return out;
}

std::vector<double> sample_serving_distances(const NetworkParams& params,
                                             const SimConfig& cfg,
                                             long min_samples) {
    cfg.validate();
    const Philox eng(cfg.seed);
    std::vector<double> out;
    std::uint64_t r = 0;
    while (static_cast<long>(out.size()) < min_samples) {
        const NetworkRealization real = sample_network(params, cfg, r);
        for (int i : probe_cells(real, eng, r, real.guard_indices().size()))
            if (i >= 0) out.push_back(real.serving_distance[i]);
        ++r;
    }
    return out;
}

}  // namespace fblnet
