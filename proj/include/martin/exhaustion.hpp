#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace martin
{
//---------------------------------------------------------------------------//
/*!
 * Flood-filled grid marking the connected component of the anchor inside
 * the level set {d_W >= r}.
 *
 * The grid lives in the plane for the comb and in meridional coordinates
 * (rho, z) for the axially symmetric sphere domain. A cell is open when its
 * center satisfies d_W >= r - pitch * sqrt(2) / 2, i.e. when the cell may
 * meet the level set; cells reachable from the anchor cell through open
 * 4-neighbors form the component.
 */
class ComponentMask
{
  public:
    ComponentMask(Domain const& domain, double shell_radius)
        : axial_{domain.kind == DomainKind::TangentSpheres}
    {
        pitch_ = shell_radius / 4;
        if (axial_)
        {
            lo_ = {0.0, 0.0};
            hi_ = {2.0, 4.0};
        }
        else
        {
            lo_ = {0.0, 0.0};
            hi_ = {1.0, 1.0};
        }
        nx_ = static_cast<int>(std::ceil((hi_[0] - lo_[0]) / pitch_));
        ny_ = static_cast<int>(std::ceil((hi_[1] - lo_[1]) / pitch_));

        double const slack = pitch_ * std::sqrt(2.0) / 2;
        std::vector<std::uint8_t> open(static_cast<std::size_t>(nx_) * ny_);
        for (int j = 0; j < ny_; ++j)
        {
            for (int i = 0; i < nx_; ++i)
            {
                Point const p = lift(lo_[0] + (i + 0.5) * pitch_,
                                     lo_[1] + (j + 0.5) * pitch_);
                bool const in_w = inside_domain(domain, p);
                open[index(i, j)]
                    = in_w
                      && distance_to_boundary(domain, p) >= shell_radius - slack;
            }
        }
        label_.assign(open.size(), 0);
        auto const [ai, aj] = cell_of(domain.anchor);
        if (!open[index(ai, aj)])
            throw InputError("anchor is not inside the exhaustion level");

        // Label every open component; component 1 holds the anchor.
        components_ = 0;
        auto flood = [&](int si, int sj, std::uint32_t id) {
            std::vector<std::pair<int, int>> stack{{si, sj}};
            label_[index(si, sj)] = id;
            while (!stack.empty())
            {
                auto [i, j] = stack.back();
                stack.pop_back();
                int const di[] = {1, -1, 0, 0};
                int const dj[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k)
                {
                    int const ni = i + di[k];
                    int const nj = j + dj[k];
                    if (ni < 0 || nj < 0 || ni >= nx_ || nj >= ny_)
                        continue;
                    auto const idx = index(ni, nj);
                    if (open[idx] && label_[idx] == 0)
                    {
                        label_[idx] = id;
                        stack.emplace_back(ni, nj);
                    }
                }
            }
        };
        flood(ai, aj, ++components_);
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i)
                if (open[index(i, j)] && label_[index(i, j)] == 0)
                    flood(i, j, ++components_);
    }

    bool in_anchor_component(Point const& p) const
    {
        auto const [i, j] = cell_of(p);
        return label_[index(i, j)] == 1;
    }

    //! Number of open connected components found on the grid.
    int component_count() const { return static_cast<int>(components_); }

    double pitch() const { return pitch_; }

  private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    Point lift(double u, double v) const
    {
        return axial_ ? Point{u, 0.0, v} : Point{u, v};
    }

    std::pair<int, int> cell_of(Point const& p) const
    {
        double const u = axial_ ? std::hypot(p[0], p[1]) : p[0];
        double const v = axial_ ? p[2] : p[1];
        int i = static_cast<int>(std::floor((u - lo_[0]) / pitch_));
        int j = static_cast<int>(std::floor((v - lo_[1]) / pitch_));
        i = std::clamp(i, 0, nx_ - 1);
        j = std::clamp(j, 0, ny_ - 1);
        return {i, j};
    }

    bool axial_;
    double pitch_{};
    std::array<double, 2> lo_{}, hi_{};
    int nx_{}, ny_{};
    std::vector<std::uint32_t> label_;
    std::uint32_t components_{};
};

//---------------------------------------------------------------------------//
/*!
 * Finite stand-in for K_n in a compact exhaustion of W.
 *
 * Every level is the anchor component of {p : d_W(p) >= r_n}. For the unit
 * disk this is the closed disk of radius 1 - 1/n; for the cut disk it is
 * the closed disk of radius 1 - 1/n with a notch of half-width 1/n cut
 * around the slit. Comb and sphere levels use r_n = 1/(4n) and carry a
 * component mask.
 */
struct ExhaustionLevel
{
    Domain domain;
    int n{2};
    double shell_radius{0.5};
    std::shared_ptr<ComponentMask const> mask;

    bool explicit_chart() const
    {
        return domain.kind == DomainKind::UnitDisk
               || domain.kind == DomainKind::CutDisk;
    }
};

inline double shell_radius_for(DomainKind kind, int n)
{
    switch (kind)
    {
        case DomainKind::UnitDisk:
        case DomainKind::CutDisk:
            return 1.0 / n;
        default:
            return 1.0 / (4.0 * n);
    }
}

inline ExhaustionLevel exhaustion_level(Domain const& domain, int n)
{
    if (n < 2)
        throw InputError("exhaustion index must be >= 2, got "
                         + std::to_string(n));
    ExhaustionLevel level{domain, n, shell_radius_for(domain.kind, n), nullptr};
    if (!level.explicit_chart())
    {
        // Masks are pure functions of (domain, n); build each one once.
        static std::mutex mutex;
        static std::map<std::pair<std::string, int>,
                        std::shared_ptr<ComponentMask const>>
            cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[{to_string(domain), n}];
        if (!slot)
            slot = std::make_shared<ComponentMask const>(domain,
                                                         level.shell_radius);
        level.mask = slot;
    }
    else if (distance_to_boundary(domain, domain.anchor) < level.shell_radius)
        throw InputError("anchor is not inside the exhaustion level");
    return level;
}

//! Whether p (a point of W) lies in K_n.
inline bool membership_in_K(ExhaustionLevel const& level, Point const& p)
{
    if (distance_to_boundary(level.domain, p) < level.shell_radius
        || !inside_domain(level.domain, p))
        return false;
    return !level.mask || level.mask->in_anchor_component(p);
}

inline std::string level_string(ExhaustionLevel const& level)
{
    return "n=" + std::to_string(level.n);
}

}  // namespace martin
