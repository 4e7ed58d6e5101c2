#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exhaustion.hpp"
#include "rng.hpp"

namespace martin
{
//---------------------------------------------------------------------------//
/*!
 * Arc-length parametrization of the boundary of a disk-family level.
 *
 * Unit disk: the circle of radius R = 1 - 1/n, coordinate 0 at angle 0,
 * running counterclockwise.
 *
 * Cut disk: the boundary of the disk of radius R minus the slit notch of
 * half-width h = 1/n. The coordinate starts at (-R, 0) and runs
 * counterclockwise: lower arc, lower notch edge (right to left), the small
 * semicircle around the slit tip, upper notch edge, upper arc. Reflection
 * in the x-axis maps coordinate s to L - s.
 */
class ExplicitChart
{
  public:
    ExplicitChart(DomainKind kind, int n) : cut_{kind == DomainKind::CutDisk}
    {
        h_ = 1.0 / n;
        radius_ = 1.0 - h_;
        if (!cut_)
        {
            length_ = 2 * pi * radius_;
            return;
        }
        alpha_ = std::asin(std::min(1.0, h_ / radius_));
        corner_x_ = radius_ * std::cos(alpha_);
        double const arc = radius_ * (pi - alpha_);
        start_lower_edge_ = arc;
        start_tip_ = start_lower_edge_ + corner_x_;
        start_upper_edge_ = start_tip_ + pi * h_;
        start_upper_arc_ = start_upper_edge_ + corner_x_;
        length_ = start_upper_arc_ + arc;
    }

    double length() const { return length_; }

    //! Arc-length coordinate in [0, L) of the boundary point nearest p.
    double coordinate(Point const& p) const
    {
        double const theta = std::atan2(p[1], p[0]);
        if (!cut_)
            return wrap((theta < 0 ? theta + 2 * pi : theta) * radius_);

        double const r = std::hypot(p[0], p[1]);
        double const circle = 1.0 - r;
        double slit;
        if (p[0] <= 0)
            slit = r;
        else
            slit = std::abs(p[1]);
        if (circle <= slit)
        {
            if (theta >= 0)
            {
                double const t = std::clamp(theta, alpha_, pi);
                return wrap(start_upper_arc_ + radius_ * (t - alpha_));
            }
            double const phi = std::clamp(theta + 2 * pi, pi, 2 * pi - alpha_);
            return wrap(radius_ * (phi - pi));
        }
        if (p[0] > 0)
        {
            double const x = std::clamp(p[0], 0.0, corner_x_);
            if (p[1] < 0)
                return start_lower_edge_ + (corner_x_ - x);
            return start_upper_edge_ + x;
        }
        // Semicircle from (0,-h) through (-h,0) to (0,h).
        double travelled = theta <= -pi / 2 ? (-pi / 2 - theta)
                                            : (pi / 2 + (pi - theta));
        if (theta > -pi / 2 && theta < pi / 2)
            travelled = theta < 0 ? 0.0 : pi;
        return start_tip_ + h_ * travelled;
    }

    //! Boundary point at arc-length coordinate s.
    Point point_at(double s) const
    {
        s = wrap(s);
        if (!cut_)
        {
            double const theta = s / radius_;
            return {radius_ * std::cos(theta), radius_ * std::sin(theta)};
        }
        if (s < start_lower_edge_)
        {
            double const phi = pi + s / radius_;
            return {radius_ * std::cos(phi), radius_ * std::sin(phi)};
        }
        if (s < start_tip_)
            return {corner_x_ - (s - start_lower_edge_), -h_};
        if (s < start_upper_edge_)
        {
            double const psi = -pi / 2 - (s - start_tip_) / h_;
            return {h_ * std::cos(psi), h_ * std::sin(psi)};
        }
        if (s < start_upper_arc_)
            return {s - start_upper_edge_, h_};
        double const theta = alpha_ + (s - start_upper_arc_) / radius_;
        return {radius_ * std::cos(theta), radius_ * std::sin(theta)};
    }

  private:
    double wrap(double s) const
    {
        s = std::fmod(s, length_);
        if (s < 0)
            s += length_;
        return s >= length_ ? 0.0 : s;
    }

    bool cut_;
    double h_{}, radius_{}, alpha_{}, corner_x_{}, length_{};
    double start_lower_edge_{}, start_tip_{}, start_upper_edge_{},
        start_upper_arc_{};
};

//---------------------------------------------------------------------------//
/*!
 * Partition of the boundary of K_n into M cells with a representative
 * point per cell.
 *
 * Explicit charts split the boundary into equal arc-length cells with
 * representatives at the cell midpoints. Implicit levels use the Voronoi
 * cells of M seeds placed on the level set {d_W = r_n}.
 */
struct BoundaryCellization
{
    std::string chart_id;
    int cell_count{0};
    std::vector<Point> representatives;
    std::optional<ExplicitChart> chart;

    //! Chart coordinate normalized to [0, 1), explicit charts only.
    double normalized_coordinate(Point const& p) const
    {
        return chart->coordinate(p) / chart->length();
    }

    std::size_t cell_of(Point const& p) const
    {
        if (chart)
        {
            auto const i = static_cast<std::size_t>(
                std::floor(normalized_coordinate(p) * cell_count));
            return std::min(i, static_cast<std::size_t>(cell_count - 1));
        }
        std::size_t best = 0;
        double best_d2 = dot(p - representatives[0], p - representatives[0]);
        for (std::size_t i = 1; i < representatives.size(); ++i)
        {
            Point const v = p - representatives[i];
            double const d2 = dot(v, v);
            if (d2 < best_d2)
            {
                best_d2 = d2;
                best = i;
            }
        }
        return best;
    }
};

struct CellizationOptions
{
    //! Rejection-sampling attempts allowed per requested seed.
    std::uint64_t attempts_per_cell{20000};
};

namespace detail
{
inline constexpr std::uint64_t cell_stream_tag = 0xCE11CE11ull;

//! Project p onto the level set {d_W = r} by Newton steps along grad d_W.
inline std::optional<Point>
project_to_level(Domain const& domain, Point p, double r, double tol)
{
    double const step = 1e-7;
    for (int iter = 0; iter < 8; ++iter)
    {
        double const d = distance_to_boundary(domain, p);
        if (std::abs(d - r) <= tol)
            return p;
        Point grad;
        grad.dim = p.dim;
        for (int k = 0; k < p.dim; ++k)
        {
            Point a = p, b = p;
            a[k] += step;
            b[k] -= step;
            grad[k] = (distance_to_boundary(domain, a)
                       - distance_to_boundary(domain, b))
                      / (2 * step);
        }
        double const g2 = dot(grad, grad);
        if (g2 < 0.25)
            return std::nullopt;
        p = p - ((d - r) / g2) * grad;
    }
    return std::abs(distance_to_boundary(domain, p) - r) <= tol
               ? std::optional<Point>{p}
               : std::nullopt;
}
}  // namespace detail

inline double chart_tolerance(Domain const& domain)
{
    return 1e-9 * domain.diameter();
}

inline BoundaryCellization cellize_boundary(ExhaustionLevel const& level,
                                            int cells,
                                            std::uint64_t seed = 7,
                                            CellizationOptions const& opts = {})
{
    if (cells < 2)
        throw InputError("cell count must be >= 2, got "
                         + std::to_string(cells));
    BoundaryCellization out;
    out.cell_count = cells;
    out.chart_id = to_string(level.domain) + "/" + level_string(level)
                   + "/M=" + std::to_string(cells);

    if (level.explicit_chart())
    {
        out.chart.emplace(level.domain.kind, level.n);
        double const len = out.chart->length();
        for (int i = 0; i < cells; ++i)
            out.representatives.push_back(
                out.chart->point_at((i + 0.5) * len / cells));
        return out;
    }

    out.chart_id += ",seed=" + std::to_string(seed);
    Domain const& domain = level.domain;
    double const r = level.shell_radius;
    double const tol = chart_tolerance(domain);
    double const band = r / 4;
    bool const solid = domain.dim() == 3;
    Point const lo = solid ? Point{-2.0, -2.0, 0.0} : Point{0.0, 0.0};
    Point const hi = solid ? Point{2.0, 2.0, 4.0} : Point{1.0, 1.0};

    WalkStream rng(seed, detail::cell_stream_tag, 0);
    std::uint64_t const budget = opts.attempts_per_cell * cells;
    std::uint64_t attempts = 0;
    while (static_cast<int>(out.representatives.size()) < cells)
    {
        if (attempts++ >= budget)
            throw ChartError("placed only "
                             + std::to_string(out.representatives.size())
                             + " of " + std::to_string(cells)
                             + " seeds on the level set of "
                             + to_string(domain) + " "
                             + level_string(level));
        Point p = lo;
        for (int k = 0; k < p.dim; ++k)
            p[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
        if (!inside_domain(domain, p)
            || std::abs(distance_to_boundary(domain, p) - r) > band)
            continue;
        auto projected = detail::project_to_level(domain, p, r, tol);
        if (!projected || !inside_domain(domain, *projected)
            || !level.mask->in_anchor_component(*projected))
            continue;
        out.representatives.push_back(*projected);
    }
    return out;
}

}  // namespace martin
