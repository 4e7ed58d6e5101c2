#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "measures.hpp"

namespace martin
{
//---------------------------------------------------------------------------//
/*!
 * One-parameter family t -> p(t) of points of W approaching a boundary
 * feature as t -> 0.
 *
 * - RadialDisk(theta): p(t) = (1 - t)(cos theta, sin theta).
 * - SlitSide(side, a): p(t) = (a, +t) above or (a, -t) below the slit.
 * - TangencyAzimuth(phi): distance t from the sphere axis at azimuth phi,
 *   height midway between the two spheres; tends to the tangency point.
 * - SlotMouth(m): center of the comb slot between teeth m and m + 1,
 *   at height 1 - 1/m - t, just below the top of the shorter tooth.
 */
struct ApproachPath
{
    enum class Kind
    {
        RadialDisk,
        SlitSide,
        TangencyAzimuth,
        SlotMouth
    };

    Kind kind{Kind::RadialDisk};
    double angle{0};
    double position{0.5};
    bool above{true};
    int slot{2};

    static ApproachPath radial(double theta)
    {
        return {Kind::RadialDisk, theta, 0, true, 0};
    }
    static ApproachPath slit_side(bool above, double a)
    {
        return {Kind::SlitSide, 0, a, above, 0};
    }
    static ApproachPath tangency(double azimuth)
    {
        return {Kind::TangencyAzimuth, azimuth, 0, true, 0};
    }
    static ApproachPath slot_mouth(int m)
    {
        return {Kind::SlotMouth, 0, 0, true, m};
    }

    Point point_at(double t) const
    {
        switch (kind)
        {
            case Kind::RadialDisk:
                return {(1 - t) * std::cos(angle), (1 - t) * std::sin(angle)};
            case Kind::SlitSide:
                return {position, above ? t : -t};
            case Kind::TangencyAzimuth: {
                if (!(t > 0 && t < 1))
                    throw InputError("tangency offset must lie in (0, 1)");
                double const outer = 2 - std::sqrt(4 - t * t);
                double const inner = 1 - std::sqrt(1 - t * t);
                return {t * std::cos(angle),
                        t * std::sin(angle),
                        (outer + inner) / 2};
            }
            case Kind::SlotMouth: {
                if (slot < 2)
                    throw InputError("slot index must be >= 2");
                double const x = (1.0 / slot + 1.0 / (slot + 1)) / 2;
                return {x, 1 - 1.0 / slot - t};
            }
        }
        return {};
    }

    std::string describe() const
    {
        char buf[64];
        switch (kind)
        {
            case Kind::RadialDisk:
                std::snprintf(buf, sizeof buf, "radial:%.17g", angle);
                break;
            case Kind::SlitSide:
                std::snprintf(buf,
                              sizeof buf,
                              "slit:%s:%.17g",
                              above ? "above" : "below",
                              position);
                break;
            case Kind::TangencyAzimuth:
                std::snprintf(buf, sizeof buf, "tangency:%.17g", angle);
                break;
            case Kind::SlotMouth:
                std::snprintf(buf, sizeof buf, "slot:%d", slot);
                break;
        }
        return buf;
    }
};

namespace detail
{
inline double parse_double(std::string_view s)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InputError("bad number '" + std::string(s) + "'");
    return v;
}
}  // namespace detail

//! Parse "radial:THETA", "slit:above:A", "slit:below:A", "tangency:PHI",
//! "slot:M".
inline ApproachPath parse_path(std::string_view s)
{
    auto colon = s.find(':');
    if (colon == std::string_view::npos)
        throw InputError("bad approach path '" + std::string(s) + "'");
    auto const head = s.substr(0, colon);
    auto const rest = s.substr(colon + 1);
    if (head == "radial")
        return ApproachPath::radial(detail::parse_double(rest));
    if (head == "tangency")
        return ApproachPath::tangency(detail::parse_double(rest));
    if (head == "slot")
        return ApproachPath::slot_mouth(
            static_cast<int>(detail::parse_double(rest)));
    if (head == "slit")
    {
        if (rest.starts_with("above:"))
            return ApproachPath::slit_side(true,
                                           detail::parse_double(rest.substr(6)));
        if (rest.starts_with("below:"))
            return ApproachPath::slit_side(false,
                                           detail::parse_double(rest.substr(6)));
    }
    throw InputError("bad approach path '" + std::string(s) + "'");
}

enum class Verdict
{
    Equivalent,
    Distinct,
    Inconclusive
};

inline char const* to_string(Verdict v)
{
    switch (v)
    {
        case Verdict::Equivalent:
            return "Equivalent";
        case Verdict::Distinct:
            return "Distinct";
        case Verdict::Inconclusive:
            return "Inconclusive";
    }
    return "?";
}

//! Thresholds of the verdict rule, applied to the last half of a schedule.
struct ClassificationRule
{
    double ci_factor{2.0};
    double noise_factor{2.0};
    double equivalent_floor{0.1};
    double distinct_threshold{0.25};
};

struct ProbeRow
{
    int n{0};
    FnEstimate estimate;
    double noise_floor{0};
};

struct ProbeParams
{
    WalkParams walk;
    int cells{64};
    std::uint64_t cell_seed{7};
    BootstrapParams bootstrap;
    ClassificationRule rule;
};

struct ProbeResult
{
    ApproachPath path_a, path_b;
    double t_a{0}, t_b{0};
    Point x, y;
    std::vector<ProbeRow> rows;
    Verdict verdict{Verdict::Inconclusive};
};

/*!
 * Verdict from stored probe rows.
 *
 * Over the last half of the schedule: Equivalent when every
 * f - 2 ci <= max(2 noise, 0.1) and consecutive values never rise by more
 * than their combined half-widths; Distinct when every f - 2 ci >= 0.25;
 * Inconclusive otherwise.
 */
inline Verdict classify(std::vector<ProbeRow> const& rows,
                        ClassificationRule const& rule = {})
{
    if (rows.empty())
        return Verdict::Inconclusive;
    std::size_t const first = rows.size() / 2;
    bool equivalent = true;
    bool distinct = true;
    for (std::size_t i = first; i < rows.size(); ++i)
    {
        auto const& e = rows[i].estimate;
        double const lower = e.f_hat - rule.ci_factor * e.ci_half_width;
        double const floor = std::max(rule.noise_factor * rows[i].noise_floor,
                                      rule.equivalent_floor);
        if (lower > floor)
            equivalent = false;
        if (lower < rule.distinct_threshold)
            distinct = false;
        if (i > first)
        {
            auto const& prev = rows[i - 1].estimate;
            if (e.f_hat - prev.f_hat > e.ci_half_width + prev.ci_half_width)
                equivalent = false;
        }
    }
    if (equivalent)
        return Verdict::Equivalent;
    if (distinct)
        return Verdict::Distinct;
    return Verdict::Inconclusive;
}

//---------------------------------------------------------------------------//
/*!
 * Memo of conditioned exit samples keyed by (chart, point, role, params).
 *
 * Sampling is deterministic, so a cache hit returns exactly what a fresh
 * run would; scans reuse the same point across many pairs. Conditioning
 * failures are remembered too.
 */
class ExitCache
{
  public:
    ExitDistribution const& get(ExhaustionLevel const& level,
                                BoundaryCellization const& cells,
                                Point const& p,
                                std::uint64_t role,
                                WalkParams const& params,
                                std::optional<TallyBall> const& ball
                                = std::nullopt)
    {
        Key key{cells.chart_id,
                p.x,
                role,
                params.seed,
                params.stream,
                params.walks,
                params.min_accepted,
                params.budget_multiplier,
                params.epsilon_shell,
                ball ? ball->radius : -1.0};
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end())
                return it->second;
            if (auto it = failed_.find(key); it != failed_.end())
                throw ConditioningFailure(it->second);
        }
        WalkParams local = params;
        local.stream = params.stream ^ detail::point_stream(p, role);
        std::optional<ExitDistribution> dist;
        try
        {
            dist = sample_conditioned_exit(level, cells, p, local, ball);
        }
        catch (ConditioningFailure const& e)
        {
            std::lock_guard lock(mutex_);
            failed_.emplace(key, e.what());
            throw;
        }
        std::lock_guard lock(mutex_);
        auto [it, fresh] = memo_.emplace(key, std::move(*dist));
        if (fresh)
        {
            trials_ += it->second.trials;
            steps_ += it->second.steps;
        }
        return it->second;
    }

    //! Walks and steps spent on successful samples so far.
    std::uint64_t trials() const { return trials_; }
    std::uint64_t steps() const { return steps_; }

  private:
    using Key = std::tuple<std::string,
                           std::array<double, 3>,
                           std::uint64_t,
                           std::uint64_t,
                           std::uint64_t,
                           std::uint64_t,
                           std::uint64_t,
                           std::uint64_t,
                           double,
                           double>;
    std::mutex mutex_;
    std::map<Key, ExitDistribution> memo_;
    std::map<Key, std::string> failed_;
    std::uint64_t trials_{0};
    std::uint64_t steps_{0};
};

namespace detail
{
inline BootstrapParams bootstrap_for(ProbeParams const& params,
                                     Point const& x,
                                     Point const& y,
                                     int n)
{
    BootstrapParams boot = params.bootstrap;
    boot.seed = params.walk.seed;
    boot.stream ^= mix64(point_stream(x, 7) ^ point_stream(y, 11)
                         ^ static_cast<std::uint64_t>(n));
    return boot;
}
}  // namespace detail

/*!
 * Probe the equivalence of path_a(t_a) and path_b(t_b) along an exhaustion
 * schedule, with a same-point noise floor at every level.
 */
inline ProbeResult probe_pair(Domain const& domain,
                              ApproachPath const& path_a,
                              double t_a,
                              ApproachPath const& path_b,
                              double t_b,
                              std::vector<int> const& n_schedule,
                              ProbeParams const& params,
                              ExitCache* cache = nullptr)
{
    if (n_schedule.empty())
        throw InputError("probe needs a non-empty n schedule");
    ExitCache local_cache;
    ExitCache& memo = cache ? *cache : local_cache;

    ProbeResult out;
    out.path_a = path_a;
    out.path_b = path_b;
    out.t_a = t_a;
    out.t_b = t_b;
    out.x = path_a.point_at(t_a);
    out.y = path_b.point_at(t_b);
    bool const same = out.x == out.y;
    for (int n : n_schedule)
    {
        auto const level = exhaustion_level(domain, n);
        auto const cells
            = cellize_boundary(level, params.cells, params.cell_seed);
        auto const& dx = memo.get(level, cells, out.x, 0, params.walk);
        auto const& dy = memo.get(level, cells, out.y, same ? 1 : 0, params.walk);
        auto const& dx2 = memo.get(level, cells, out.x, 1, params.walk);

        ProbeRow row;
        row.n = n;
        row.estimate = fn_from_distributions(
            dx, dy, detail::bootstrap_for(params, out.x, out.y, n));
        row.noise_floor = total_variation(dx, dx2);
        out.rows.push_back(row);
    }
    out.verdict = classify(out.rows, params.rule);
    return out;
}

//---------------------------------------------------------------------------//
// Scans
//---------------------------------------------------------------------------//

//! A probe that may have failed; failures are recorded, not thrown.
struct ScanEntry
{
    std::optional<ProbeResult> probe;
    std::string error;

    Verdict verdict() const
    {
        return probe ? probe->verdict : Verdict::Inconclusive;
    }
};

struct RingScan
{
    std::vector<double> azimuths;
    double offset{0};
    //! entries[i][j]: i != j compares azimuths at the same offset; the
    //! diagonal compares one azimuth at offset and offset / 2.
    std::vector<std::vector<ScanEntry>> entries;

    std::vector<std::vector<Verdict>> verdicts() const
    {
        std::vector<std::vector<Verdict>> out;
        for (auto const& row : entries)
        {
            out.emplace_back();
            for (auto const& e : row)
                out.back().push_back(e.verdict());
        }
        return out;
    }
};

inline RingScan ring_scan(Domain const& domain,
                          std::vector<double> const& azimuths,
                          double offset,
                          std::vector<int> const& n_schedule,
                          ProbeParams const& params,
                          ExitCache* shared = nullptr)
{
    if (domain.kind != DomainKind::TangentSpheres)
        throw InputError("ring scan needs the spheres domain");
    RingScan out;
    out.azimuths = azimuths;
    out.offset = offset;
    ExitCache local;
    ExitCache& cache = shared ? *shared : local;
    auto const k = azimuths.size();
    out.entries.assign(k, std::vector<ScanEntry>(k));
    for (std::size_t i = 0; i < k; ++i)
    {
        for (std::size_t j = i; j < k; ++j)
        {
            auto const a = ApproachPath::tangency(azimuths[i]);
            auto const b = ApproachPath::tangency(azimuths[j]);
            double const t_b = i == j ? offset / 2 : offset;
            ScanEntry entry;
            try
            {
                entry.probe = probe_pair(
                    domain, a, offset, b, t_b, n_schedule, params, &cache);
            }
            catch (std::exception const& e)
            {
                entry.error = e.what();
            }
            out.entries[i][j] = entry;
            if (i != j)
                out.entries[j][i] = entry;
        }
    }
    return out;
}

struct CombCell
{
    int n{0};
    int slot{0};
    std::optional<double> concentration;
    std::uint64_t accepted{0};
    double acceptance{0};
    std::string error;
};

struct CombPair
{
    int n{0};
    int slot_a{0}, slot_b{0};
    std::optional<FnEstimate> estimate;
    double noise_floor{0};
    std::string error;
};

struct CombScan
{
    std::vector<CombCell> cells;
    std::vector<CombPair> pairs;

    std::optional<double> concentration(int n, int slot) const
    {
        for (auto const& c : cells)
            if (c.n == n && c.slot == slot)
                return c.concentration;
        return std::nullopt;
    }

    CombPair const* pair(int n, int a, int b) const
    {
        for (auto const& p : pairs)
            if (p.n == n
                && ((p.slot_a == a && p.slot_b == b)
                    || (p.slot_a == b && p.slot_b == a)))
                return &p;
        return nullptr;
    }
};

inline constexpr double comb_corner_radius = 0.25;

/*!
 * Slot-mouth probes on the comb: per slot, the fraction of conditioned exit
 * mass within 0.25 of the corner (0, 1); per pair of slots, f-hat.
 */
inline CombScan comb_scan(Domain const& domain,
                          std::vector<int> const& slots,
                          std::vector<int> const& n_schedule,
                          ProbeParams const& params,
                          double t = 1e-3,
                          ExitCache* shared = nullptr)
{
    if (domain.kind != DomainKind::Comb)
        throw InputError("comb scan needs the comb domain");
    CombScan out;
    TallyBall const corner{{0.0, 1.0}, comb_corner_radius};
    ExitCache local;
    ExitCache& cache = shared ? *shared : local;
    for (int n : n_schedule)
    {
        auto const level = exhaustion_level(domain, n);
        auto const cells
            = cellize_boundary(level, params.cells, params.cell_seed);
        std::map<int, ExitDistribution const*> sampled;
        for (int slot : slots)
        {
            CombCell cell{n, slot, std::nullopt, 0, 0, {}};
            try
            {
                Point const p = ApproachPath::slot_mouth(slot).point_at(t);
                auto const& d = cache.get(level, cells, p, 0, params.walk, corner);
                cell.concentration = static_cast<double>(d.region_hits)
                                     / static_cast<double>(d.accepted);
                cell.accepted = d.accepted;
                cell.acceptance = d.acceptance_rate();
                sampled[slot] = &d;
            }
            catch (std::exception const& e)
            {
                cell.error = e.what();
            }
            out.cells.push_back(cell);
        }
        for (std::size_t i = 0; i < slots.size(); ++i)
        {
            for (std::size_t j = i + 1; j < slots.size(); ++j)
            {
                CombPair pair{n, slots[i], slots[j], std::nullopt, 0, {}};
                auto const a = sampled.find(slots[i]);
                auto const b = sampled.find(slots[j]);
                if (a == sampled.end() || b == sampled.end())
                {
                    pair.error = "slot sample unavailable";
                    out.pairs.push_back(pair);
                    continue;
                }
                Point const pa = ApproachPath::slot_mouth(slots[i]).point_at(t);
                Point const pb = ApproachPath::slot_mouth(slots[j]).point_at(t);
                pair.estimate = fn_from_distributions(
                    *a->second,
                    *b->second,
                    detail::bootstrap_for(params, pa, pb, n));
                auto const& again
                    = cache.get(level, cells, pa, 1, params.walk, corner);
                pair.noise_floor = total_variation(*a->second, again);
                out.pairs.push_back(pair);
            }
        }
    }
    return out;
}

}  // namespace martin
