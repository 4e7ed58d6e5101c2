#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "core.hpp"

namespace martin
{

enum class DomainKind
{
    UnitDisk,
    CutDisk,
    TangentSpheres,
    Comb
};

//---------------------------------------------------------------------------//
/*!
 * One of the four example domains W.
 *
 * - UnitDisk: the open unit disk.
 * - CutDisk: the unit disk minus the slit {(t, 0) : 0 <= t < 1}.
 * - TangentSpheres: the open region inside the sphere of radius 2 centered
 *   at (0,0,2) and outside the closed ball of radius 1 centered at (0,0,1).
 *   The two boundaries touch at the origin.
 * - Comb: the open unit square minus the teeth x = 1/m, 0 < y <= 1 - 1/m
 *   for m = 2..teeth.
 */
struct Domain
{
    DomainKind kind{DomainKind::UnitDisk};
    int teeth{50};
    Point anchor{-0.5, 0.0};

    int dim() const { return kind == DomainKind::TangentSpheres ? 3 : 2; }

    //! Diameter of the bounding region, used to scale tolerances.
    double diameter() const
    {
        switch (kind)
        {
            case DomainKind::TangentSpheres:
                return 4.0;
            case DomainKind::Comb:
                return std::sqrt(2.0);
            default:
                return 2.0;
        }
    }

    static Domain unit_disk() { return {DomainKind::UnitDisk, 0, {-0.5, 0.0}}; }
    static Domain cut_disk() { return {DomainKind::CutDisk, 0, {-0.5, 0.0}}; }
    static Domain tangent_spheres()
    {
        return {DomainKind::TangentSpheres, 0, {0.0, 0.0, 3.0}};
    }
    static Domain comb(int teeth = 50)
    {
        if (teeth < 3)
            throw InputError("comb needs at least 3 teeth");
        return {DomainKind::Comb, teeth, {0.75, 0.25}};
    }
};

inline void check_dim(Domain const& d, Point const& p)
{
    if (p.dim != d.dim())
        throw InputError("point dimension " + std::to_string(p.dim)
                         + " does not match domain dimension "
                         + std::to_string(d.dim()));
}

namespace detail
{
inline Point const sphere_outer_center{0.0, 0.0, 2.0};
inline Point const sphere_inner_center{0.0, 0.0, 1.0};
inline constexpr double sphere_outer_radius = 2.0;
inline constexpr double sphere_inner_radius = 1.0;

//! Distance to the union of the comb teeth, visiting teeth nearest in x first.
inline double comb_teeth_distance(int teeth, double x, double y)
{
    auto tooth = [&](int m) {
        double const tx = 1.0 / m;
        double const top = 1.0 - tx;
        double const dx = x - tx;
        double dy = 0.0;
        if (y < 0)
            dy = -y;
        else if (y > top)
            dy = y - top;
        return std::hypot(dx, dy);
    };
    // Teeth are ordered by decreasing x; start from the one closest to x.
    int start = x > 0 ? static_cast<int>(std::lround(1.0 / x)) : teeth;
    start = std::clamp(start, 2, teeth);
    double best = tooth(start);
    for (int m = start - 1; m >= 2 && std::abs(x - 1.0 / m) < best; --m)
        best = std::min(best, tooth(m));
    for (int m = start + 1; m <= teeth && std::abs(x - 1.0 / m) < best; ++m)
        best = std::min(best, tooth(m));
    return best;
}

inline double square_boundary_distance(double x, double y)
{
    if (x >= 0 && x <= 1 && y >= 0 && y <= 1)
        return std::min({x, 1 - x, y, 1 - y});
    double const dx = std::max({-x, 0.0, x - 1});
    double const dy = std::max({-y, 0.0, y - 1});
    return std::hypot(dx, dy);
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! Exact Euclidean distance from p to the boundary of W (inside or outside).
inline double distance_to_boundary(Domain const& d, Point const& p)
{
    check_dim(d, p);
    switch (d.kind)
    {
        case DomainKind::UnitDisk:
            return std::abs(1.0 - std::hypot(p[0], p[1]));
        case DomainKind::CutDisk: {
            double const circle = std::abs(1.0 - std::hypot(p[0], p[1]));
            double slit;
            if (p[0] <= 0)
                slit = std::hypot(p[0], p[1]);
            else if (p[0] >= 1)
                slit = std::hypot(p[0] - 1, p[1]);
            else
                slit = std::abs(p[1]);
            return std::min(circle, slit);
        }
        case DomainKind::TangentSpheres: {
            double const outer = std::abs(
                detail::sphere_outer_radius
                - distance(p, detail::sphere_outer_center));
            double const inner
                = std::abs(distance(p, detail::sphere_inner_center)
                           - detail::sphere_inner_radius);
            return std::min(outer, inner);
        }
        case DomainKind::Comb:
            return std::min(detail::square_boundary_distance(p[0], p[1]),
                            detail::comb_teeth_distance(d.teeth, p[0], p[1]));
    }
    return 0.0;
}

//! Whether p lies in the open set W.
inline bool inside_domain(Domain const& d, Point const& p)
{
    check_dim(d, p);
    switch (d.kind)
    {
        case DomainKind::UnitDisk:
            return std::hypot(p[0], p[1]) < 1.0;
        case DomainKind::CutDisk:
            if (p[1] == 0.0 && p[0] >= 0.0 && p[0] < 1.0)
                return false;
            return std::hypot(p[0], p[1]) < 1.0;
        case DomainKind::TangentSpheres:
            return distance(p, detail::sphere_outer_center)
                       < detail::sphere_outer_radius
                   && distance(p, detail::sphere_inner_center)
                          > detail::sphere_inner_radius;
        case DomainKind::Comb:
            if (!(p[0] > 0 && p[0] < 1 && p[1] > 0 && p[1] < 1))
                return false;
            return detail::comb_teeth_distance(d.teeth, p[0], p[1]) > 0.0;
    }
    return false;
}

//---------------------------------------------------------------------------//
// Canonical string forms: disk, cutdisk, spheres, comb:N=50
//---------------------------------------------------------------------------//

inline std::string to_string(Domain const& d)
{
    switch (d.kind)
    {
        case DomainKind::UnitDisk:
            return "disk";
        case DomainKind::CutDisk:
            return "cutdisk";
        case DomainKind::TangentSpheres:
            return "spheres";
        case DomainKind::Comb:
            return "comb:N=" + std::to_string(d.teeth);
    }
    return {};
}

inline Domain parse_domain(std::string_view s)
{
    if (s == "disk")
        return Domain::unit_disk();
    if (s == "cutdisk")
        return Domain::cut_disk();
    if (s == "spheres")
        return Domain::tangent_spheres();
    if (s == "comb")
        return Domain::comb();
    if (s.starts_with("comb:N="))
    {
        auto rest = s.substr(7);
        int teeth = 0;
        auto [ptr, ec]
            = std::from_chars(rest.data(), rest.data() + rest.size(), teeth);
        if (ec != std::errc{} || ptr != rest.data() + rest.size())
            throw InputError("bad comb tooth count in '" + std::string(s)
                             + "'");
        return Domain::comb(teeth);
    }
    throw InputError("unknown domain '" + std::string(s) + "'");
}

}  // namespace martin
