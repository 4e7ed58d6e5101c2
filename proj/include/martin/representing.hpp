#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "measures.hpp"

namespace martin
{
//---------------------------------------------------------------------------//
/*!
 * Built-in positive harmonic functions on the unit disk, normalized to 1 at
 * a base point x0.
 *
 * PoissonUnitDisk(theta0) is z -> P(z, theta0) / P(x0, theta0) with
 * P(z, theta) = (1 - |z|^2) / |e^{i theta} - z|^2, an extreme element of
 * the normalized cone. AffineCombo takes positive weights summing to one.
 */
class HarmonicFunction
{
  public:
    enum class Kind
    {
        ConstantOne,
        PoissonUnitDisk,
        AffineCombo
    };

    static HarmonicFunction constant_one() { return HarmonicFunction{}; }

    static HarmonicFunction poisson(double theta0, Point const& x0 = {0, 0})
    {
        HarmonicFunction h;
        h.kind_ = Kind::PoissonUnitDisk;
        h.theta0_ = theta0;
        h.scale_ = 1.0 / raw_poisson(theta0, x0);
        return h;
    }

    static HarmonicFunction
    affine(std::vector<std::pair<double, HarmonicFunction>> parts)
    {
        if (parts.empty())
            throw InputError("affine combination needs at least one part");
        double total = 0;
        for (auto const& [alpha, _] : parts)
        {
            if (!(alpha > 0))
                throw InputError("affine weights must be positive");
            total += alpha;
        }
        if (std::abs(total - 1) > 1e-12)
            throw InputError("affine weights must sum to 1");
        HarmonicFunction h;
        h.kind_ = Kind::AffineCombo;
        h.parts_ = std::make_shared<
            std::vector<std::pair<double, HarmonicFunction>> const>(
            std::move(parts));
        return h;
    }

    Kind kind() const { return kind_; }

    double operator()(Point const& z) const
    {
        switch (kind_)
        {
            case Kind::ConstantOne:
                return 1.0;
            case Kind::PoissonUnitDisk:
                return scale_ * raw_poisson(theta0_, z);
            case Kind::AffineCombo: {
                double sum = 0;
                for (auto const& [alpha, h] : *parts_)
                    sum += alpha * h(z);
                return sum;
            }
        }
        return 0.0;
    }

    std::string describe() const
    {
        switch (kind_)
        {
            case Kind::ConstantOne:
                return "one";
            case Kind::PoissonUnitDisk: {
                char buf[48];
                std::snprintf(buf, sizeof buf, "poisson:%.17g", theta0_);
                return buf;
            }
            case Kind::AffineCombo: {
                std::string out = "affine(";
                for (std::size_t i = 0; i < parts_->size(); ++i)
                {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.17g*", (*parts_)[i].first);
                    out += (i ? ";" : "") + std::string(buf)
                           + (*parts_)[i].second.describe();
                }
                return out + ")";
            }
        }
        return {};
    }

  private:
    static double raw_poisson(double theta, Point const& z)
    {
        double const r2 = z[0] * z[0] + z[1] * z[1];
        if (!(r2 < 1))
            throw InputError("Poisson kernel evaluated outside the unit disk");
        double const dx = std::cos(theta) - z[0];
        double const dy = std::sin(theta) - z[1];
        return (1 - r2) / (dx * dx + dy * dy);
    }

    Kind kind_{Kind::ConstantOne};
    double theta0_{0};
    double scale_{1};
    std::shared_ptr<std::vector<std::pair<double, HarmonicFunction>> const>
        parts_;
};

/*!
 * Parse the form produced by HarmonicFunction::describe: "one",
 * "poisson:THETA" or "affine(A*H;B*H;...)".
 */
inline HarmonicFunction parse_harmonic(std::string_view s,
                                       Point const& x0 = {0, 0})
{
    auto number = [&](std::string_view v) {
        double out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw InputError("bad number in harmonic function '"
                             + std::string(s) + "'");
        return out;
    };
    if (s == "one")
        return HarmonicFunction::constant_one();
    if (s.starts_with("poisson:"))
        return HarmonicFunction::poisson(number(s.substr(8)), x0);
    if (s.starts_with("affine(") && s.ends_with(")"))
    {
        auto body = s.substr(7, s.size() - 8);
        std::vector<std::pair<double, HarmonicFunction>> parts;
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= body.size(); ++i)
        {
            if (i < body.size() && body[i] == '(')
                ++depth;
            else if (i < body.size() && body[i] == ')')
                --depth;
            else if (i == body.size() || (body[i] == ';' && depth == 0))
            {
                auto term = body.substr(start, i - start);
                auto star = term.find('*');
                if (star == std::string_view::npos)
                    throw InputError("affine term needs WEIGHT*FUNCTION");
                parts.emplace_back(number(term.substr(0, star)),
                                   parse_harmonic(term.substr(star + 1), x0));
                start = i + 1;
            }
        }
        return HarmonicFunction::affine(std::move(parts));
    }
    throw InputError("unknown harmonic function '" + std::string(s) + "'");
}

//---------------------------------------------------------------------------//
/*!
 * Write-once cache of harmonic-measure estimates mu_x(A_i) = count_i/trials
 * keyed by the evaluation point.
 */
class HarmonicMeasureCache
{
  public:
    using Vector = std::vector<double>;

    template<class Compute>
    Vector const& get(Point const& x, Compute&& compute)
    {
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(x.x); it != memo_.end())
                return it->second;
        }
        Vector value = compute();
        std::lock_guard lock(mutex_);
        return memo_.emplace(x.x, std::move(value)).first->second;
    }

  private:
    std::mutex mutex_;
    std::map<std::array<double, 3>, Vector> memo_;
};

struct RepresentingParams
{
    WalkParams walk{1e-6, 100000, 200000, 1, 0x5EB5ull, 0, 20, 1};
    std::uint64_t cell_seed{7};
};

/*!
 * Finite partition {A_i} of C = boundary of K_gamma with harmonic-measure
 * weights seen from x0.
 *
 * Only cells with mu_x0(A_i) > 0 are kept. Masses are count / trials, so
 * the kept masses sum to one minus the abort fraction and nothing is
 * renormalized.
 */
struct RepresentingPartition
{
    ExhaustionLevel gamma_level;
    BoundaryCellization cells;
    Point x0;
    std::vector<double> mu_x0;
    std::vector<std::size_t> kept;
    double abort_fraction{0};
    //! Largest spread of a requested h over the probe points of one cell.
    double delta_var{0};
    RepresentingParams params;
    std::shared_ptr<HarmonicMeasureCache> cache;

    bool is_kept(std::size_t i) const
    {
        return i < mu_x0.size() && mu_x0[i] > 0;
    }
};

namespace detail
{
inline std::vector<double> harmonic_masses(ExitDistribution const& dist)
{
    std::vector<double> mu(dist.counts.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        mu[i] = static_cast<double>(dist.counts[i])
                / static_cast<double>(dist.trials);
    return mu;
}

inline std::vector<double> const&
measure_from(RepresentingPartition const& part, Point const& x)
{
    return part.cache->get(x, [&] {
        WalkParams walk = part.params.walk;
        walk.stream ^= point_stream(x, 0x4A1u);
        return harmonic_masses(
            harmonic_measure_inside(part.gamma_level, part.cells, x, walk));
    });
}

//! Points spread across cell i, for measuring the variation of h there.
inline std::vector<Point> cell_probe_points(BoundaryCellization const& cells,
                                            std::size_t i)
{
    if (!cells.chart)
        return {cells.representatives[i]};
    double const len = cells.chart->length() / cells.cell_count;
    std::vector<Point> out;
    for (int k = 0; k <= 8; ++k)
        out.push_back(cells.chart->point_at(len * (i + k / 8.0)));
    return out;
}
}  // namespace detail

inline RepresentingPartition
build_partition(Domain const& domain,
                int gamma_n,
                int cells,
                Point const& x0,
                RepresentingParams const& params = {},
                std::vector<HarmonicFunction> const& variation_of = {})
{
    RepresentingPartition part;
    part.gamma_level = exhaustion_level(domain, gamma_n);
    part.cells = cellize_boundary(part.gamma_level, cells, params.cell_seed);
    part.x0 = x0;
    part.params = params;
    part.cache = std::make_shared<HarmonicMeasureCache>();

    WalkParams walk = params.walk;
    walk.stream ^= detail::point_stream(x0, 0x4A1u);
    auto const dist
        = harmonic_measure_inside(part.gamma_level, part.cells, x0, walk);
    part.abort_fraction = dist.abort_fraction();
    part.mu_x0 = part.cache->get(x0, [&] { return detail::harmonic_masses(dist); });
    for (std::size_t i = 0; i < part.mu_x0.size(); ++i)
        if (part.mu_x0[i] > 0)
            part.kept.push_back(i);

    for (auto const& h : variation_of)
    {
        for (auto i : part.kept)
        {
            auto const probes = detail::cell_probe_points(part.cells, i);
            double lo = h(probes.front());
            double hi = lo;
            for (auto const& p : probes)
            {
                lo = std::min(lo, h(p));
                hi = std::max(hi, h(p));
            }
            part.delta_var = std::max(part.delta_var, hi - lo);
        }
    }
    return part;
}

//! Kernel function z -> mu_z(A_i) / mu_x0(A_i) evaluated at x.
inline double
kernel_eval(RepresentingPartition const& part, Point const& x, std::size_t i)
{
    if (!part.is_kept(i))
        throw InputError("cell " + std::to_string(i) + " is not kept");
    auto const& mu = detail::measure_from(part, x);
    return mu[i] / part.mu_x0[i];
}

//! Estimated harmonic-measure vector mu_x(A_i) over all cells.
inline std::vector<double> const&
harmonic_measure_at(RepresentingPartition const& part, Point const& x)
{
    return detail::measure_from(part, x);
}

//! sum over kept cells of h(y_i) mu_x(A_i).
inline double reconstruct(RepresentingPartition const& part,
                          HarmonicFunction const& h,
                          Point const& x)
{
    auto const& mu = detail::measure_from(part, x);
    double sum = 0;
    for (auto i : part.kept)
        sum += h(part.cells.representatives[i]) * mu[i];
    return sum;
}

struct WeightVector
{
    std::vector<std::size_t> cells;
    std::vector<double> w;

    double total() const { return std::accumulate(w.begin(), w.end(), 0.0); }
};

//! Weights h(y_i) mu_x0(A_i) on the kept cells.
inline WeightVector weight_vector(RepresentingPartition const& part,
                                  HarmonicFunction const& h)
{
    WeightVector out;
    for (auto i : part.kept)
    {
        out.cells.push_back(i);
        out.w.push_back(h(part.cells.representatives[i]) * part.mu_x0[i]);
    }
    return out;
}

/*!
 * Bin the weights on the boundary of W by the chart coordinate of each
 * representative: angular bins from angle 0 for the disk, arc-length bins
 * of the notched boundary for the cut disk.
 */
inline std::vector<double> push_to_boundary(RepresentingPartition const& part,
                                            WeightVector const& weights,
                                            int bins)
{
    if (!part.cells.chart)
        throw InputError("boundary push needs the disk or cut disk");
    if (bins < 1)
        throw InputError("bin count must be positive");
    std::vector<double> out(bins, 0.0);
    for (std::size_t k = 0; k < weights.cells.size(); ++k)
    {
        double const s = part.cells.normalized_coordinate(
            part.cells.representatives[weights.cells[k]]);
        auto const b = std::min<std::size_t>(
            static_cast<std::size_t>(std::floor(s * bins)), bins - 1);
        out[b] += weights.w[k];
    }
    return out;
}

}  // namespace martin
