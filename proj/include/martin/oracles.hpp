#pragma once

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"

namespace martin::oracle
{
//---------------------------------------------------------------------------//
// Disk harmonic measure
//---------------------------------------------------------------------------//

//! Poisson kernel of the disk of radius R, per unit arc length at angle phi.
inline double poisson_disk_density(double radius, Point const& x, double phi)
{
    double const r2 = x[0] * x[0] + x[1] * x[1];
    if (!(radius > 0) || !(r2 < radius * radius))
        throw InputError("Poisson kernel needs |x| < R");
    double const dx = radius * std::cos(phi) - x[0];
    double const dy = radius * std::sin(phi) - x[1];
    return (radius * radius - r2) / (2 * pi * radius * (dx * dx + dy * dy));
}

//! Harmonic measure from x of the arc [phi1, phi2] of the circle radius R.
inline double disk_arc_harmonic_measure(double radius,
                                        Point const& x,
                                        double phi1,
                                        double phi2)
{
    if (!(phi1 < phi2))
        throw InputError("arc needs phi1 < phi2");
    poisson_disk_density(radius, x, phi1);
    auto f = [&](double phi) {
        return radius * poisson_disk_density(radius, x, phi);
    };
    double error = 0;
    double const value
        = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, phi1, phi2, 30, 1e-14, &error);
    if (error > 1e-10)
        throw OracleError("arc quadrature did not converge");
    return value;
}

//---------------------------------------------------------------------------//
/*!
 * Harmonic measure of the annulus r_in < |p| < r_out, by separation of
 * variables.
 *
 * With boundary data g on the inner circle and 0 on the outer circle, the
 * solution at (r, theta) is
 *   (1/2pi) int g(phi) [a_0(r) + 2 sum_k a_k(r) cos k(theta - phi)] dphi,
 *   a_0 = log(r_out/r) / log(r_out/r_in),
 *   a_k = (s^-k - s^k) / (q^-k - q^k),  s = r/r_out, q = r_in/r_out.
 * The series is summed up to a mode budget; a geometric tail bound on the
 * neglected modes must fall below the tolerance.
 */
class AnnulusExit
{
  public:
    AnnulusExit(double r_in,
                double r_out,
                Point const& x,
                int modes = 128,
                double tolerance = 1e-12)
        : r_in_{r_in}, theta_{std::atan2(x[1], x[0])}
    {
        double const r = std::hypot(x[0], x[1]);
        if (!(0 < r_in && r_in < r && r < r_out))
            throw InputError("annulus oracle needs r_in < |x| < r_out");
        double const q = r_in / r_out;
        double const s = r / r_out;
        inner_mass_ = std::log(r_out / r) / std::log(r_out / r_in);
        double const ratio = q / s;
        // a_k = ratio^k (1 - s^2k) / (1 - q^2k), bounded by ratio^k/(1-q^2).
        double const tail = 2 * std::pow(ratio, modes + 1)
                            / ((1 - ratio) * (1 - q * q));
        if (tail > tolerance * inner_mass_)
            throw OracleError("annulus series needs more than "
                              + std::to_string(modes) + " modes");
        coeff_.resize(modes + 1);
        coeff_[0] = inner_mass_;
        for (int k = 1; k <= modes; ++k)
            coeff_[k] = std::pow(ratio, k) * (1 - std::pow(s, 2 * k))
                        / (1 - std::pow(q, 2 * k));
    }

    //! Probability of exiting through the inner circle.
    double inner_mass() const { return inner_mass_; }
    double outer_mass() const { return 1 - inner_mass_; }
    int modes() const { return static_cast<int>(coeff_.size()) - 1; }

    //! Unnormalized exit density per unit arc length of the inner circle.
    double inner_density(double phi) const
    {
        double sum = coeff_[0];
        for (std::size_t k = 1; k < coeff_.size(); ++k)
            sum += 2 * coeff_[k] * std::cos(k * (theta_ - phi));
        return sum / (2 * pi * r_in_);
    }

    //! Exit density conditioned on the inner circle, per unit arc length.
    double conditional_density(double phi) const
    {
        return inner_density(phi) / inner_mass_;
    }

    //! Conditional probability of the inner arc [phi1, phi2], termwise.
    double conditional_arc(double phi1, double phi2) const
    {
        double sum = coeff_[0] * (phi2 - phi1);
        for (std::size_t k = 1; k < coeff_.size(); ++k)
        {
            double const kk = static_cast<double>(k);
            sum += 2 * coeff_[k]
                   * (std::sin(kk * (phi2 - theta_))
                      - std::sin(kk * (phi1 - theta_)))
                   / kk;
        }
        return sum / (2 * pi * inner_mass_);
    }

    //! Conditional probabilities of M equal inner arcs starting at angle 0.
    std::vector<double> conditional_cells(int cells) const
    {
        std::vector<double> out(cells);
        for (int i = 0; i < cells; ++i)
            out[i] = conditional_arc(2 * pi * i / cells,
                                     2 * pi * (i + 1) / cells);
        return out;
    }

  private:
    double r_in_;
    double theta_;
    double inner_mass_{};
    std::vector<double> coeff_;
};

//! Conditional exit density on the inner circle of the annulus.
inline double annulus_conditional_exit_density(
    double r_in, double r_out, Point const& x, double phi, int modes = 128)
{
    return AnnulusExit(r_in, r_out, x, modes).conditional_density(phi);
}

}  // namespace martin::oracle
