#pragma once

#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "runner.hpp"

namespace martin
{
struct CriterionResult
{
    int id{0};
    std::string name;
    bool pass{false};
    std::string detail;
    json data = json::object();
};

struct AcceptanceOptions
{
    unsigned threads{1};
    //! Directory holding the committed reference vectors.
    std::filesystem::path golden_dir;
};

namespace accept
{
// Tolerances and budgets of the desk suite.
inline constexpr double c1_tv_max = 0.05;
inline constexpr std::uint64_t c1_accepted = 100000;
inline constexpr double c2_tv_max = 0.05;
inline constexpr double c2_sigmas = 3.0;
inline constexpr double c3_t = 1e-3;
inline constexpr double c3_min_gap = pi / 8;
inline constexpr double c4_f8_min = 1.0;
inline constexpr double c5_offset = 0.05;
inline constexpr double c5_final_max = 0.15;
inline constexpr double c6_concentration_min = 0.7;
inline constexpr double c7_one_tol = 0.02;
inline constexpr double c7_rel_tol = 0.05;
inline constexpr double c8_tol = 1e-12;
inline constexpr double c9_sigmas = 3.0;

inline std::string format(char const* fmt, ...)
{
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

//! Upper tail of chi-square with the given degrees of freedom.
inline double chi2_tail(double stat, int dof)
{
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

inline std::vector<int> powers_of_two(int hi)
{
    std::vector<int> out;
    for (int n = 2; n <= hi; n *= 2)
        out.push_back(n);
    return out;
}

inline WalkParams walk(std::uint64_t walks, std::uint64_t seed, unsigned threads)
{
    WalkParams w;
    w.walks = walks;
    w.seed = seed;
    w.threads = threads;
    return w;
}

//---------------------------------------------------------------------------//
inline CriterionResult oracle_calibration(AcceptanceOptions const& opt)
{
    CriterionResult r{1, "oracle calibration"};
    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    Point const z{0.75, 0.0};
    WalkParams w = walk(100000, 1, opt.threads);
    w.min_accepted = c1_accepted;
    auto const dist = sample_conditioned_exit(level, cells, z, w);
    auto const oracle = oracle::AnnulusExit(0.5, 1.0, z).conditional_cells(64);
    double const tv = total_variation(dist.probs(), oracle);
    r.pass = tv < c1_tv_max && dist.accepted >= c1_accepted;
    r.detail = format("TV=%.4f (< %.2f) accepted=%llu",
                      tv,
                      c1_tv_max,
                      static_cast<unsigned long long>(dist.accepted));
    r.data = {{"tv", tv}, {"accepted", static_cast<std::uint64_t>(dist.accepted)}};
    return r;
}

inline CriterionResult uniformity(AcceptanceOptions const& opt)
{
    CriterionResult r{2, "uniformity"};
    int const m = 64;
    auto const level = exhaustion_level(Domain::unit_disk(), 8);
    auto const cells = cellize_boundary(level, m);
    auto const dist = harmonic_measure_inside(
        level, cells, Point{0.0, 0.0}, walk(100000, 2, opt.threads));
    std::vector<double> const uniform(m, 1.0 / m);
    double const tv = total_variation(dist.probs(), uniform);
    // Cell i spans [i, i+1) * 2pi/M; its mirror across the x-axis is M-1-i.
    double worst = 0;
    double chi2 = 0;
    for (int i = 0; i < m / 2; ++i)
    {
        double const a = static_cast<double>(dist.counts[i]);
        double const b = static_cast<double>(dist.counts[m - 1 - i]);
        if (a + b > 0)
        {
            double const z = std::abs(a - b) / std::sqrt(a + b);
            worst = std::max(worst, z);
            chi2 += z * z;
        }
    }
    // Informational: joint fit of all pairs, not part of the pass rule.
    double const joint_p = chi2_tail(chi2, m / 2);
    r.pass = tv < c2_tv_max && worst <= c2_sigmas;
    r.detail = format("TV=%.4f (< %.2f) worst mirror pair %.2f sigma (<= 3); "
                      "all pairs chi2 p=%.2f",
                      tv,
                      c2_tv_max,
                      worst,
                      joint_p);
    r.data = {{"tv", tv}, {"mirror_sigma", worst}, {"mirror_chi2_p", joint_p}};
    return r;
}

namespace detail
{
struct DiskGrid
{
    std::vector<std::vector<Verdict>> verdicts;
    std::uint64_t walks{0};
};

//! Off-diagonal: angles i, j at offset t; diagonal: angle i at t and t/2.
inline DiskGrid disk_grid(double t, std::uint64_t walks, unsigned threads)
{
    auto const domain = Domain::unit_disk();
    ProbeParams params;
    params.walk = walk(walks, 3, threads);
    std::vector<int> schedule;
    for (int n : powers_of_two(256))
        if (n < 1 / t)
            schedule.push_back(n);
    ExitCache cache;
    DiskGrid grid;
    grid.verdicts.assign(6, std::vector<Verdict>(6, Verdict::Inconclusive));
    for (int i = 0; i < 6; ++i)
    {
        for (int j = i; j < 6; ++j)
        {
            auto const a = ApproachPath::radial(i * pi / 3);
            auto const b = ApproachPath::radial(j * pi / 3);
            auto const res = probe_pair(
                domain, a, t, b, i == j ? t / 2 : t, schedule, params, &cache);
            grid.verdicts[i][j] = grid.verdicts[j][i] = res.verdict;
        }
    }
    grid.walks = cache.trials();
    return grid;
}

inline bool grid_correct(std::vector<std::vector<Verdict>> const& v,
                         std::string& why)
{
    for (int i = 0; i < 6; ++i)
    {
        for (int j = 0; j < 6; ++j)
        {
            double gap = std::abs(i - j) * pi / 3;
            gap = std::min(gap, 2 * pi - gap);
            bool const ok = i == j ? v[i][j] == Verdict::Equivalent
                                   : (gap < c3_min_gap
                                      || v[i][j] == Verdict::Distinct);
            if (!ok)
            {
                why = format("angles %d,%d gave %s", i, j, to_string(v[i][j]));
                return false;
            }
        }
    }
    return true;
}
}  // namespace detail

inline CriterionResult disk_equivalence(AcceptanceOptions const& opt)
{
    CriterionResult r{3, "unit-disk equivalence"};
    auto const base = detail::disk_grid(c3_t, 100000, opt.threads);
    auto const half = detail::disk_grid(c3_t / 2, 100000, opt.threads);
    auto const more = detail::disk_grid(c3_t, 400000, opt.threads);
    std::string why;
    bool const correct = detail::grid_correct(base.verdicts, why);
    bool const stable_t = half.verdicts == base.verdicts;
    bool const stable_w = more.verdicts == base.verdicts;
    r.pass = correct && stable_t && stable_w;
    r.detail = format("6-angle grid %s; stable under t/2: %s; under 4x walks: %s",
                      correct ? "correct" : why.c_str(),
                      stable_t ? "yes" : "no",
                      stable_w ? "yes" : "no");
    auto names = [](std::vector<std::vector<Verdict>> const& v) {
        json m = json::array();
        for (auto const& row : v)
        {
            json out = json::array();
            for (auto x : row)
                out.push_back(to_string(x));
            m.push_back(out);
        }
        return m;
    };
    r.data = {{"base", names(base.verdicts)},
              {"half_t", names(half.verdicts)},
              {"walks_x4", names(more.verdicts)}};
    return r;
}

//! f-hat at n = 8 from the committed reference probe.
inline double cutdisk_reference_f8(std::filesystem::path const& dir)
{
    auto const rows = io::read_csv((dir / "cutdisk_reference.csv").string());
    if (rows.empty())
        throw std::runtime_error("cut-disk reference is empty");
    auto const& header = rows.front();
    auto col = [&](std::string const& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw std::runtime_error("cut-disk reference lacks column " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    auto const n_col = col("n");
    auto const f_col = col("f_hat");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].at(n_col) == "8")
            return std::stod(rows[i].at(f_col));
    throw std::runtime_error("cut-disk reference has no n=8 row");
}

inline CriterionResult cutdisk(AcceptanceOptions const& opt)
{
    CriterionResult r{4, "cut-disk non-equivalence"};
    ProbeParams params;
    params.walk = walk(100000, 42, opt.threads);
    auto const res = probe_pair(Domain::cut_disk(),
                                ApproachPath::slit_side(true, 0.5),
                                1e-3,
                                ApproachPath::slit_side(false, 0.5),
                                1e-3,
                                powers_of_two(64),
                                params);
    double f8 = -1;
    for (auto const& row : res.rows)
        if (row.n == 8)
            f8 = row.estimate.f_hat;
    double const ref = cutdisk_reference_f8(opt.golden_dir);
    r.pass = res.verdict == Verdict::Distinct && f8 >= c4_f8_min
             && ref >= c4_f8_min;
    r.detail = format("verdict %s; f8=%.4f (>= %.1f); reference f8=%.4f",
                      to_string(res.verdict),
                      f8,
                      c4_f8_min,
                      ref);
    r.data = {{"verdict", to_string(res.verdict)}, {"f8", f8}, {"reference_f8", ref}};
    return r;
}

inline CriterionResult spheres_ring(AcceptanceOptions const& opt)
{
    CriterionResult r{5, "tangent-spheres ring"};
    ProbeParams params;
    params.walk = walk(100000, 5, opt.threads);
    auto const scan = ring_scan(Domain::tangent_spheres(),
                                {0.0, pi / 2, pi},
                                c5_offset,
                                {2, 4, 8},
                                params);
    bool cross = true;
    bool trend = true;
    std::string first_error;
    for (std::size_t i = 0; i < 3; ++i)
    {
        for (std::size_t j = i; j < 3; ++j)
        {
            auto const& e = scan.entries[i][j];
            if (!e.error.empty() && first_error.empty())
                first_error = e.error;
            if (i != j)
            {
                cross = cross && e.verdict() == Verdict::Distinct;
                continue;
            }
            if (!e.probe)
            {
                trend = false;
                continue;
            }
            auto const& rows = e.probe->rows;
            for (std::size_t k = 1; k < rows.size(); ++k)
                if (rows[k].estimate.f_hat > rows[k - 1].estimate.f_hat)
                    trend = false;
            if (rows.back().estimate.f_hat >= c5_final_max)
                trend = false;
        }
    }
    r.pass = cross && trend;
    r.detail = format("cross-azimuth Distinct: %s; refinement trend: %s%s%s",
                      cross ? "yes" : "no",
                      trend ? "yes" : "no",
                      first_error.empty() ? "" : "; ",
                      first_error.c_str());
    r.data = {{"cross_distinct", cross}, {"trend", trend}, {"error", first_error}};
    return r;
}

inline CriterionResult comb_accumulation(AcceptanceOptions const& opt)
{
    CriterionResult r{6, "comb accumulation"};
    ProbeParams params;
    params.walk = walk(100000, 6, opt.threads);
    auto const scan = comb_scan(Domain::comb(50), {2, 4, 6}, {2, 4}, params);
    auto const c4 = scan.concentration(4, 4);
    auto const c6 = scan.concentration(4, 6);
    bool const concentrated = c4 && c6 && *c4 >= c6_concentration_min
                              && *c6 >= c6_concentration_min;
    // The slot-2 mouth lies inside K_n for n >= 3, so the pairs match at n = 2.
    auto const near = scan.pair(2, 4, 6);
    auto const far = scan.pair(2, 2, 6);
    bool const ordered = near && far && near->estimate && far->estimate
                         && near->estimate->f_hat < far->estimate->f_hat;
    r.pass = concentrated && ordered;
    r.detail = format(
        "n=4 concentration slot4=%.3f slot6=%.3f (>= %.1f); "
        "n=2 f(4,6)=%.3f < f(2,6)=%.3f: %s",
        c4.value_or(-1),
        c6.value_or(-1),
        c6_concentration_min,
        near && near->estimate ? near->estimate->f_hat : -1.0,
        far && far->estimate ? far->estimate->f_hat : -1.0,
        ordered ? "yes" : "no");
    r.data = {{"concentration_slot4", c4 ? json(*c4) : json(nullptr)},
              {"concentration_slot6", c6 ? json(*c6) : json(nullptr)},
              {"ordered", ordered}};
    return r;
}

inline std::vector<Point> const& reconstruction_probes()
{
    static std::vector<Point> const probes{
        {0.0, 0.0}, {0.3, 0.0}, {-0.2, 0.4}, {0.5, -0.5}, {0.0, -0.7}};
    return probes;
}

inline RepresentingParams representing_params(unsigned threads)
{
    RepresentingParams p;
    p.walk.walks = 200000;
    p.walk.threads = threads;
    return p;
}

inline CriterionResult reconstruction(RepresentingPartition const& part)
{
    CriterionResult r{7, "reconstruction"};
    auto const one = HarmonicFunction::constant_one();
    double worst_one = 0;
    for (auto const& x : reconstruction_probes())
        worst_one = std::max(worst_one, std::abs(reconstruct(part, one, x) - 1));
    auto const h = HarmonicFunction::poisson(0.0);
    Point const x{0.3, 0.0};
    double const target = 0.91 / 0.49;
    double const estimate = reconstruct(part, h, x);
    double const rel = std::abs(estimate - target) / target;
    r.pass = worst_one <= c7_one_tol && rel < c7_rel_tol;
    r.detail = format("max |recon(1)-1|=%.4f (<= %.2f); poisson(0) at (0.3,0): "
                      "%.4f vs %.4f, rel err %.4f (< %.2f)",
                      worst_one,
                      c7_one_tol,
                      estimate,
                      target,
                      rel,
                      c7_rel_tol);
    r.data = {{"one_error", worst_one}, {"estimate", estimate}, {"rel_err", rel}};
    return r;
}

inline CriterionResult affinity(RepresentingPartition const& part)
{
    CriterionResult r{8, "affinity"};
    auto const h1 = HarmonicFunction::poisson(0.0);
    auto const h2 = HarmonicFunction::poisson(pi / 2);
    auto const mix = HarmonicFunction::affine({{0.3, h1}, {0.7, h2}});
    auto const w = weight_vector(part, mix);
    auto const w1 = weight_vector(part, h1);
    auto const w2 = weight_vector(part, h2);
    double worst = 0;
    for (std::size_t i = 0; i < w.w.size(); ++i)
        worst = std::max(worst, std::abs(w.w[i] - (0.3 * w1.w[i] + 0.7 * w2.w[i])));
    for (auto const& x : reconstruction_probes())
    {
        double const lhs = reconstruct(part, mix, x);
        double const rhs
            = 0.3 * reconstruct(part, h1, x) + 0.7 * reconstruct(part, h2, x);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    r.pass = worst <= c8_tol;
    r.detail = format("max deviation %.3g (<= 1e-12)", worst);
    r.data = {{"max_deviation", worst}};
    return r;
}

inline CriterionResult push_to_boundary_check(AcceptanceOptions const& opt,
                                              RepresentingPartition const& part)
{
    CriterionResult r{9, "push-to-boundary"};
    int const bins = 64;
    auto const params = representing_params(opt.threads);
    auto const pushed
        = push_to_boundary(part, weight_vector(part, HarmonicFunction::constant_one()), bins);
    double const n = static_cast<double>(params.walk.walks);
    double const p = 1.0 / bins;
    double const sigma = std::sqrt(p * (1 - p) / n);
    double const expect = (1 - part.abort_fraction) / bins;
    double worst = 0;
    double chi2 = 0;
    for (double m : pushed)
    {
        double const z = (m - expect) / sigma;
        worst = std::max(worst, std::abs(z));
        chi2 += z * z;
    }
    double const joint_p = chi2_tail(chi2, bins - 1);

    // gamma grows with M so that the cells near angle 0 approach the boundary.
    std::vector<double> near;
    auto const h = HarmonicFunction::poisson(0.0);
    for (int m : {64, 256, 1024})
    {
        auto const refined = build_partition(
            Domain::unit_disk(), m / 8, m, Point{0.0, 0.0}, params);
        auto const hist = push_to_boundary(refined, weight_vector(refined, h), bins);
        near.push_back(hist.front() + hist.back());
    }
    bool const increasing = near[0] < near[1] && near[1] < near[2];
    r.pass = worst <= c9_sigmas && increasing;
    r.detail = format("uniform within %.2f sigma (<= 3), all bins chi2 p=%.2f; "
                      "mass next to 0 at M=64,256,1024: %.4f, %.4f, %.4f",
                      worst,
                      joint_p,
                      near[0],
                      near[1],
                      near[2]);
    r.data = {{"uniform_sigma", worst},
              {"uniform_chi2_p", joint_p},
              {"near_zero_mass", near}};
    return r;
}

inline CriterionResult reproducibility(AcceptanceOptions const&)
{
    CriterionResult r{10, "reproducibility and merge"};
    ExperimentConfig c;
    c.command = "exitdist";
    c.domain = "disk";
    c.z = {0.75, 0.0};
    c.n = {2};
    c.cells = 64;
    c.walks = 100000;
    c.seed = 1;
    auto render = [&](unsigned threads) {
        ExperimentConfig local = c;
        local.threads = threads;
        RunOutput out(local);
        run_exitdist(local, out);
        return out.files();
    };
    auto const first = render(1);
    bool const same_run = render(1) == first;
    bool const same_threads = render(4) == first;

    auto const level = exhaustion_level(Domain::unit_disk(), 2);
    auto const cells = cellize_boundary(level, 64);
    WalkParams w = walk(100000, 1, 1);
    Point const z{0.75, 0.0};
    auto merged = tally_exit_walks(level, cells, z, w, 0, 50000);
    merged += tally_exit_walks(level, cells, z, w, 50000, 100000);
    auto const full = tally_exit_walks(level, cells, z, w, 0, 100000);
    w.threads = 4;
    auto const batch = sample_conditioned_exit(level, cells, z, w);
    bool const merge = merged == full && batch == full;

    r.pass = same_run && same_threads && merge;
    r.detail = format("repeat run identical: %s; threads 1 vs 4 identical: %s; "
                      "half-batch merge exact: %s",
                      same_run ? "yes" : "no",
                      same_threads ? "yes" : "no",
                      merge ? "yes" : "no");
    r.data = {{"same_run", same_run}, {"same_threads", same_threads}, {"merge", merge}};
    return r;
}
}  // namespace accept

/*!
 * Run criteria 1 to 10 of the desk suite, reporting each as it finishes.
 *
 * A criterion that throws is recorded as failed with the error message.
 */
inline std::vector<CriterionResult>
run_acceptance(AcceptanceOptions const& opt,
               std::function<void(CriterionResult const&)> const& report = {})
{
    std::vector<CriterionResult> results;
    auto record = [&](int id, char const* name, auto&& fn) {
        CriterionResult r;
        try
        {
            r = fn();
        }
        catch (std::exception const& e)
        {
            r = {id, name, false, std::string("error: ") + e.what()};
        }
        if (report)
            report(r);
        results.push_back(std::move(r));
    };
    record(1, "oracle calibration", [&] { return accept::oracle_calibration(opt); });
    record(2, "uniformity", [&] { return accept::uniformity(opt); });
    record(3, "unit-disk equivalence", [&] { return accept::disk_equivalence(opt); });
    record(4, "cut-disk non-equivalence", [&] { return accept::cutdisk(opt); });
    record(5, "tangent-spheres ring", [&] { return accept::spheres_ring(opt); });
    record(6, "comb accumulation", [&] { return accept::comb_accumulation(opt); });

    std::optional<RepresentingPartition> part;
    auto partition = [&]() -> RepresentingPartition const& {
        if (!part)
            part = build_partition(Domain::unit_disk(),
                                   8,
                                   256,
                                   Point{0.0, 0.0},
                                   accept::representing_params(opt.threads));
        return *part;
    };
    record(7, "reconstruction", [&] { return accept::reconstruction(partition()); });
    record(8, "affinity", [&] { return accept::affinity(partition()); });
    record(9, "push-to-boundary",
           [&] { return accept::push_to_boundary_check(opt, partition()); });
    record(10, "reproducibility and merge", [&] { return accept::reproducibility(opt); });
    return results;
}

inline std::string format_line(CriterionResult const& r)
{
    return accept::format("criterion %2d %-28s %s  %s",
                          r.id,
                          r.name.c_str(),
                          r.pass ? "PASS" : "FAIL",
                          r.detail.c_str());
}

//! The accept command: acceptance.csv plus summary verdicts.
inline bool run_accept(ExperimentConfig const& c,
                       RunOutput& out,
                       std::filesystem::path const& golden_dir)
{
    AcceptanceOptions opt;
    opt.threads = c.threads;
    opt.golden_dir = golden_dir;
    auto table = out.table({"criterion", "name", "pass", "detail"});
    bool all = true;
    auto const results = run_acceptance(opt, [](CriterionResult const& r) {
        std::cerr << format_line(r) << std::endl;
    });
    json data = json::object();
    for (auto const& r : results)
    {
        all = all && r.pass;
        table.add_row({io::format_number(r.id), r.name, r.pass ? "pass" : "fail", r.detail});
        out.verdicts()[std::to_string(r.id)] = r.pass ? "pass" : "fail";
        data[std::to_string(r.id)] = r.data;
    }
    out.add_file("acceptance.csv", table);
    out.results() = data;
    return all;
}

}  // namespace martin
