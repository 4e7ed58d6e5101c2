#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace martin
{

inline constexpr double pi = 3.14159265358979323846;
inline constexpr char const* version_string = "martinlab 1.0.0";

//---------------------------------------------------------------------------//
// Error types
//---------------------------------------------------------------------------//

//! Bad user input: dimension mismatch, violated preconditions, bad config.
class InputError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Seed placement on an implicit level set exhausted its budget.
class ChartError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! No walk reached the compact set within the full sampling budget.
class ConditioningFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Series truncation did not meet its tail bound.
class OracleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
/*!
 * Euclidean point in two or three dimensions.
 *
 * Unused trailing coordinates are kept at zero so that norms and distances
 * can be computed without branching on the dimension.
 */
struct Point
{
    std::array<double, 3> x{0.0, 0.0, 0.0};
    int dim{2};

    constexpr Point() = default;
    constexpr Point(double a, double b) : x{a, b, 0.0}, dim{2} {}
    constexpr Point(double a, double b, double c) : x{a, b, c}, dim{3} {}

    constexpr double operator[](std::size_t i) const { return x[i]; }
    constexpr double& operator[](std::size_t i) { return x[i]; }

    friend constexpr bool operator==(Point const&, Point const&) = default;
};

inline Point operator+(Point a, Point const& b)
{
    for (std::size_t i = 0; i < 3; ++i)
        a.x[i] += b.x[i];
    return a;
}

inline Point operator-(Point a, Point const& b)
{
    for (std::size_t i = 0; i < 3; ++i)
        a.x[i] -= b.x[i];
    return a;
}

inline Point operator*(double s, Point a)
{
    for (auto& c : a.x)
        c *= s;
    return a;
}

inline double dot(Point const& a, Point const& b)
{
    return a.x[0] * b.x[0] + a.x[1] * b.x[1] + a.x[2] * b.x[2];
}

inline double norm(Point const& a)
{
    return std::sqrt(dot(a, a));
}

inline double distance(Point const& a, Point const& b)
{
    return norm(a - b);
}

//! Distance from p to the closed segment [a, b].
inline double segment_distance(Point const& p, Point const& a, Point const& b)
{
    Point const ab = b - a;
    double const len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = t < 0 ? 0 : (t > 1 ? 1 : t);
    return distance(p, a + t * ab);
}

inline std::string to_string(Point const& p)
{
    std::string out;
    for (int i = 0; i < p.dim; ++i)
    {
        if (i)
            out += ';';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", p.x[i]);
        out += buf;
    }
    return out;
}

}  // namespace martin
