#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equivalence.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "representing.hpp"

namespace martin
{
using json = nlohmann::json;

//---------------------------------------------------------------------------//
/*!
 * Resolved settings of one experiment.
 *
 * JSON keys match the member names, except "M" for the cell count. The
 * worker count and output directory never enter the echoed config since
 * they must not change any output byte.
 */
struct ExperimentConfig
{
    std::string command;
    std::string domain{"disk"};
    std::vector<int> n{2};
    int cells{64};
    double t{1e-3};
    std::optional<double> t_b;
    std::uint64_t walks{100000};
    std::uint64_t budget_multiplier{20};
    std::uint64_t min_accepted{0};
    std::uint64_t seed{1};
    std::uint64_t max_steps{100000};
    double epsilon_shell{1e-6};
    std::uint64_t cell_seed{7};
    int bootstrap{200};

    // exitdist
    std::vector<double> z{0.75, 0.0};
    // probe
    std::string pair;
    std::string path_a;
    std::string path_b;
    // ring-scan
    std::vector<double> azimuths{0.0, pi / 2, pi};
    double offset{0.05};
    // comb-scan
    std::vector<int> slots{4, 6};
    // represent
    int gamma_n{8};
    std::vector<double> x0{0.0, 0.0};
    std::vector<std::string> h{"one", "poisson:0"};
    std::vector<std::vector<double>> probes{{0.3, 0.0}};
    int bins{64};
    // accept
    std::string suite{"desk"};

    bool sensitivity{false};
    bool refine{false};

    std::string out_dir;
    unsigned threads{1};
};

inline std::set<std::string> const& command_names()
{
    static std::set<std::string> const names{"exitdist",
                                             "probe",
                                             "ring-scan",
                                             "comb-scan",
                                             "represent",
                                             "oracle-check",
                                             "accept"};
    return names;
}

inline json to_json(ExperimentConfig const& c)
{
    json j{{"command", c.command},
           {"domain", c.domain},
           {"n", c.n},
           {"M", c.cells},
           {"t", c.t},
           {"walks", c.walks},
           {"budget_multiplier", c.budget_multiplier},
           {"min_accepted", c.min_accepted},
           {"seed", c.seed},
           {"max_steps", c.max_steps},
           {"epsilon_shell", c.epsilon_shell},
           {"cell_seed", c.cell_seed},
           {"bootstrap", c.bootstrap},
           {"z", c.z},
           {"pair", c.pair},
           {"path_a", c.path_a},
           {"path_b", c.path_b},
           {"azimuths", c.azimuths},
           {"offset", c.offset},
           {"slots", c.slots},
           {"gamma_n", c.gamma_n},
           {"x0", c.x0},
           {"h", c.h},
           {"probes", c.probes},
           {"bins", c.bins},
           {"suite", c.suite},
           {"sensitivity", c.sensitivity},
           {"refine", c.refine}};
    j["t_b"] = c.t_b ? json(*c.t_b) : json(nullptr);
    return j;
}

namespace detail
{
template<class T>
void read_key(json const& j, char const* key, T& out)
{
    if (!j.contains(key))
        return;
    try
    {
        out = j.at(key).get<T>();
    }
    catch (json::exception const&)
    {
        throw InputError(std::string("config key '") + key
                         + "' has the wrong type");
    }
}
}  // namespace detail

/*!
 * Overlay the keys of a JSON object onto a config.
 *
 * Unknown keys are rejected so that typos cannot silently fall back to
 * defaults. "threads" and "out_dir" are accepted here but never echoed.
 */
inline void apply_json(json const& j, ExperimentConfig& c)
{
    if (!j.is_object())
        throw InputError("config must be a JSON object");
    static std::set<std::string> const known = [] {
        std::set<std::string> k;
        json const defaults = to_json(ExperimentConfig{});
        for (auto const& [key, _] : defaults.items())
            k.insert(key);
        k.insert("threads");
        k.insert("out_dir");
        return k;
    }();
    for (auto const& [key, _] : j.items())
        if (!known.count(key))
            throw InputError("unknown config key '" + key + "'");

    using detail::read_key;
    read_key(j, "command", c.command);
    read_key(j, "domain", c.domain);
    read_key(j, "n", c.n);
    read_key(j, "M", c.cells);
    read_key(j, "t", c.t);
    if (j.contains("t_b"))
    {
        if (j["t_b"].is_null())
            c.t_b.reset();
        else
        {
            double v = 0;
            read_key(j, "t_b", v);
            c.t_b = v;
        }
    }
    read_key(j, "walks", c.walks);
    read_key(j, "budget_multiplier", c.budget_multiplier);
    read_key(j, "min_accepted", c.min_accepted);
    read_key(j, "seed", c.seed);
    read_key(j, "max_steps", c.max_steps);
    read_key(j, "epsilon_shell", c.epsilon_shell);
    read_key(j, "cell_seed", c.cell_seed);
    read_key(j, "bootstrap", c.bootstrap);
    read_key(j, "z", c.z);
    read_key(j, "pair", c.pair);
    read_key(j, "path_a", c.path_a);
    read_key(j, "path_b", c.path_b);
    read_key(j, "azimuths", c.azimuths);
    read_key(j, "offset", c.offset);
    read_key(j, "slots", c.slots);
    read_key(j, "gamma_n", c.gamma_n);
    read_key(j, "x0", c.x0);
    read_key(j, "h", c.h);
    read_key(j, "probes", c.probes);
    read_key(j, "bins", c.bins);
    read_key(j, "suite", c.suite);
    read_key(j, "sensitivity", c.sensitivity);
    read_key(j, "refine", c.refine);
    read_key(j, "out_dir", c.out_dir);
    read_key(j, "threads", c.threads);
}

inline ExperimentConfig config_from_json(json const& j)
{
    ExperimentConfig c;
    apply_json(j, c);
    return c;
}

inline Point point_from(std::vector<double> const& v, char const* what)
{
    if (v.size() == 2)
        return {v[0], v[1]};
    if (v.size() == 3)
        return {v[0], v[1], v[2]};
    throw InputError(std::string(what) + " needs 2 or 3 coordinates");
}

//! Checks that do not need any sampling.
inline void validate(ExperimentConfig const& c)
{
    if (!command_names().count(c.command))
        throw InputError("unknown command '" + c.command + "'");
    parse_domain(c.domain);
    if (c.n.empty())
        throw InputError("n schedule is empty");
    for (int n : c.n)
        if (n < 2)
            throw InputError("every level n must be at least 2");
    if (c.cells < 2)
        throw InputError("M must be at least 2");
    if (!(c.t > 0) || (c.t_b && !(*c.t_b > 0)))
        throw InputError("t must be positive");
    if (c.walks == 0)
        throw InputError("walks must be positive");
    if (c.max_steps < 1000)
        throw InputError("max_steps must be at least 1000");
    if (!(c.epsilon_shell > 0))
        throw InputError("epsilon_shell must be positive");
    if (c.bootstrap < 2)
        throw InputError("bootstrap needs at least 2 resamples");
    if (c.bins < 1)
        throw InputError("bins must be positive");
    if (c.threads < 1)
        throw InputError("threads must be positive");
    if (c.command == "accept" && c.suite != "desk")
        throw InputError("the only acceptance suite is 'desk'");
}

inline WalkParams walk_params(ExperimentConfig const& c)
{
    WalkParams w;
    w.epsilon_shell = c.epsilon_shell;
    w.max_steps = c.max_steps;
    w.walks = c.walks;
    w.seed = c.seed;
    w.min_accepted = c.min_accepted;
    w.budget_multiplier = c.budget_multiplier;
    w.threads = c.threads;
    return w;
}

inline ProbeParams probe_params(ExperimentConfig const& c)
{
    ProbeParams p;
    p.walk = walk_params(c);
    p.cells = c.cells;
    p.cell_seed = c.cell_seed;
    p.bootstrap.resamples = c.bootstrap;
    return p;
}

//! Output directory: the config value, else $MARTINLAB_OUT, else ./martinlab_out.
inline std::filesystem::path output_dir(ExperimentConfig const& c)
{
    if (!c.out_dir.empty())
        return c.out_dir;
    if (char const* env = std::getenv("MARTINLAB_OUT"); env && *env)
        return env;
    return "martinlab_out";
}

//---------------------------------------------------------------------------//
/*!
 * Collects the files of one run and writes them together.
 *
 * Every CSV starts with comment lines holding the version string and the
 * resolved config; summary.json holds the same config.
 */
class RunOutput
{
  public:
    explicit RunOutput(ExperimentConfig const& config)
        : config_(config), echo_(to_json(config))
    {
        summary_["version"] = version_string;
        summary_["command"] = config.command;
        summary_["resolved_config"] = echo_;
        summary_["seed"] = config.seed;
        summary_["results"] = json::object();
        summary_["verdicts"] = json::object();
        summary_["runtime"] = {{"walks", 0}, {"steps", 0}};
        summary_["status"] = "ok";
    }

    io::CsvTable table(std::vector<std::string> header) const
    {
        io::CsvTable t(std::move(header));
        t.add_comment(version_string);
        t.add_comment("config " + echo_.dump());
        return t;
    }

    void add_file(std::string name, io::CsvTable const& table)
    {
        files_.emplace_back(std::move(name), table.str());
    }

    json& results() { return summary_["results"]; }
    json& verdicts() { return summary_["verdicts"]; }

    void add_work(std::uint64_t walks, std::uint64_t steps)
    {
        summary_["runtime"]["walks"]
            = summary_["runtime"]["walks"].get<std::uint64_t>() + walks;
        summary_["runtime"]["steps"]
            = summary_["runtime"]["steps"].get<std::uint64_t>() + steps;
    }

    void fail(std::string const& kind, std::string const& message)
    {
        summary_["status"] = "error";
        summary_["error"] = {{"kind", kind}, {"message", message}};
    }

    json const& summary() const { return summary_; }

    //! File name to content, summary.json included.
    std::vector<std::pair<std::string, std::string>> files() const
    {
        auto out = files_;
        out.emplace_back("summary.json", summary_.dump(2) + "\n");
        return out;
    }

    void write() const
    {
        auto const dir = output_dir(config_);
        std::filesystem::create_directories(dir);
        for (auto const& [name, text] : files())
        {
            std::ofstream f(dir / name, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + (dir / name).string());
            f << text;
        }
    }

  private:
    ExperimentConfig config_;
    json echo_;
    json summary_;
    std::vector<std::pair<std::string, std::string>> files_;
};

inline json to_json(ExitDistribution const& d)
{
    return {{"chart", d.chart_id},
            {"accepted", d.accepted},
            {"trials", d.trials},
            {"aborted", d.aborted},
            {"hit_outer", d.hit_outer},
            {"acceptance_rate", d.acceptance_rate()},
            {"abort_fraction", d.abort_fraction()},
            {"low_acceptance", d.low_acceptance}};
}

//---------------------------------------------------------------------------//
// Commands
//---------------------------------------------------------------------------//

//! Conditioned exit histogram from z at the first level of the schedule.
inline void run_exitdist(ExperimentConfig const& c, RunOutput& out)
{
    auto const domain = parse_domain(c.domain);
    auto const level = exhaustion_level(domain, c.n.front());
    auto const cells = cellize_boundary(level, c.cells, c.cell_seed);
    Point const z = point_from(c.z, "z");
    auto const dist = sample_conditioned_exit(level, cells, z, walk_params(c));
    out.add_work(dist.trials, dist.steps);

    auto table = out.table({"cell", "y", "count", "p"});
    auto const p = dist.probs();
    for (std::size_t i = 0; i < p.size(); ++i)
        table.add_row({io::format_number(static_cast<std::uint64_t>(i)),
                       io::format_point(cells.representatives[i]),
                       io::format_number(dist.counts[i]),
                       io::format_number(p[i])});
    out.add_file("exitdist.csv", table);
    out.results() = to_json(dist);
    out.results()["level"] = level_string(level);
}

namespace detail
{
struct PathPair
{
    ApproachPath a, b;
};

inline PathPair probe_paths(ExperimentConfig const& c)
{
    if (!c.pair.empty())
    {
        if (!c.pair.starts_with("slit:"))
            throw InputError("--pair only supports slit:A");
        double const a = parse_double(std::string_view(c.pair).substr(5));
        return {ApproachPath::slit_side(true, a), ApproachPath::slit_side(false, a)};
    }
    if (c.path_a.empty() || c.path_b.empty())
        throw InputError("probe needs --pair or both --a and --b");
    return {parse_path(c.path_a), parse_path(c.path_b)};
}

inline json rows_json(ProbeResult const& r)
{
    json rows = json::array();
    for (auto const& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"f_hat", row.estimate.f_hat},
                        {"ci", row.estimate.ci_half_width},
                        {"ci_low", row.estimate.ci.low},
                        {"ci_high", row.estimate.ci.high},
                        {"noise_floor", row.noise_floor},
                        {"accepted_x", row.estimate.diagnostics.accepted_x},
                        {"accepted_y", row.estimate.diagnostics.accepted_y},
                        {"low_acceptance",
                         row.estimate.diagnostics.low_acceptance}});
    return rows;
}

inline io::CsvTable probe_table(RunOutput const& out,
                                ExperimentConfig const& c,
                                ProbeResult const& r,
                                int cells)
{
    auto table = out.table({"domain",
                            "n",
                            "M",
                            "x",
                            "y",
                            "f_hat",
                            "ci",
                            "acc_x",
                            "acc_y",
                            "abort_x",
                            "abort_y",
                            "seed"});
    for (auto const& row : r.rows)
    {
        auto const& d = row.estimate.diagnostics;
        table.add_row({c.domain,
                       io::format_number(row.n),
                       io::format_number(cells),
                       io::format_point(r.x),
                       io::format_point(r.y),
                       io::format_number(row.estimate.f_hat),
                       io::format_number(row.estimate.ci_half_width),
                       io::format_number(d.acceptance_x),
                       io::format_number(d.acceptance_y),
                       io::format_number(d.abort_x),
                       io::format_number(d.abort_y),
                       io::format_number(c.seed)});
    }
    return table;
}
}  // namespace detail

/*!
 * Probe one pair of approach points over the n schedule.
 *
 * --sensitivity adds runs at M = 32 and M = 128; --refine adds a run with
 * both offsets halved.
 */
inline void run_probe(ExperimentConfig const& c, RunOutput& out)
{
    auto const domain = parse_domain(c.domain);
    auto const paths = detail::probe_paths(c);
    double const t_a = c.t;
    double const t_b = c.t_b.value_or(c.t);

    struct Variant
    {
        std::string name;
        int cells;
        double scale;
    };
    std::vector<Variant> variants{{"main", c.cells, 1.0}};
    if (c.sensitivity)
    {
        variants.push_back({"M32", 32, 1.0});
        variants.push_back({"M128", 128, 1.0});
    }
    if (c.refine)
        variants.push_back({"refined", c.cells, 0.5});

    for (auto const& v : variants)
    {
        ProbeParams params = probe_params(c);
        params.cells = v.cells;
        ExitCache cache;
        auto const r = probe_pair(domain,
                                  paths.a,
                                  t_a * v.scale,
                                  paths.b,
                                  t_b * v.scale,
                                  c.n,
                                  params,
                                  &cache);
        out.add_work(cache.trials(), cache.steps());
        std::string const file
            = v.name == "main" ? "probe.csv" : "probe_" + v.name + ".csv";
        out.add_file(file, detail::probe_table(out, c, r, v.cells));
        out.results()[v.name] = {{"x", io::format_point(r.x)},
                                 {"y", io::format_point(r.y)},
                                 {"path_a", r.path_a.describe()},
                                 {"path_b", r.path_b.describe()},
                                 {"M", v.cells},
                                 {"rows", detail::rows_json(r)}};
        out.verdicts()[v.name] = to_string(r.verdict);
    }
}

inline void run_ring_scan(ExperimentConfig const& c, RunOutput& out)
{
    auto const domain = parse_domain(c.domain);
    ExitCache cache;
    auto const scan
        = ring_scan(domain, c.azimuths, c.offset, c.n, probe_params(c), &cache);
    out.add_work(cache.trials(), cache.steps());

    auto table = out.table({"i",
                            "j",
                            "phi_i",
                            "phi_j",
                            "t_i",
                            "t_j",
                            "n",
                            "f_hat",
                            "ci",
                            "noise_floor",
                            "verdict",
                            "error"});
    json matrix = json::array();
    auto const k = scan.azimuths.size();
    for (std::size_t i = 0; i < k; ++i)
    {
        json row = json::array();
        for (std::size_t j = 0; j < k; ++j)
        {
            auto const& e = scan.entries[i][j];
            row.push_back(to_string(e.verdict()));
            if (j < i)
                continue;
            std::vector<std::string> head{
                io::format_number(static_cast<std::uint64_t>(i)),
                io::format_number(static_cast<std::uint64_t>(j)),
                io::format_number(scan.azimuths[i]),
                io::format_number(scan.azimuths[j]),
                io::format_number(scan.offset),
                io::format_number(i == j ? scan.offset / 2 : scan.offset)};
            if (!e.probe)
            {
                auto fields = head;
                fields.insert(fields.end(),
                              {"", "", "", "", to_string(e.verdict()), e.error});
                table.add_row(fields);
                continue;
            }
            for (auto const& pr : e.probe->rows)
            {
                auto fields = head;
                fields.insert(fields.end(),
                              {io::format_number(pr.n),
                               io::format_number(pr.estimate.f_hat),
                               io::format_number(pr.estimate.ci_half_width),
                               io::format_number(pr.noise_floor),
                               to_string(e.verdict()),
                               ""});
                table.add_row(fields);
            }
        }
        matrix.push_back(row);
    }
    out.add_file("ring.csv", table);
    out.verdicts()["matrix"] = matrix;
    out.results()["azimuths"] = scan.azimuths;
    out.results()["offset"] = scan.offset;
}

inline void run_comb_scan(ExperimentConfig const& c, RunOutput& out)
{
    auto const domain = parse_domain(c.domain);
    ExitCache cache;
    auto const scan
        = comb_scan(domain, c.slots, c.n, probe_params(c), c.t, &cache);
    out.add_work(cache.trials(), cache.steps());

    auto cells = out.table(
        {"n", "slot", "concentration", "accepted", "acceptance", "error"});
    json cj = json::array();
    for (auto const& cell : scan.cells)
    {
        cells.add_row({io::format_number(cell.n),
                       io::format_number(cell.slot),
                       cell.concentration ? io::format_number(*cell.concentration)
                                          : "",
                       io::format_number(cell.accepted),
                       io::format_number(cell.acceptance),
                       cell.error});
        cj.push_back({{"n", cell.n},
                      {"slot", cell.slot},
                      {"concentration",
                       cell.concentration ? json(*cell.concentration)
                                          : json(nullptr)},
                      {"error", cell.error}});
    }
    auto pairs = out.table(
        {"n", "slot_a", "slot_b", "f_hat", "ci", "noise_floor", "error"});
    json pj = json::array();
    for (auto const& p : scan.pairs)
    {
        pairs.add_row(
            {io::format_number(p.n),
             io::format_number(p.slot_a),
             io::format_number(p.slot_b),
             p.estimate ? io::format_number(p.estimate->f_hat) : "",
             p.estimate ? io::format_number(p.estimate->ci_half_width) : "",
             p.estimate ? io::format_number(p.noise_floor) : "",
             p.error});
        pj.push_back(
            {{"n", p.n},
             {"slot_a", p.slot_a},
             {"slot_b", p.slot_b},
             {"f_hat", p.estimate ? json(p.estimate->f_hat) : json(nullptr)},
             {"error", p.error}});
    }
    out.add_file("comb_cells.csv", cells);
    out.add_file("comb_pairs.csv", pairs);
    out.results()["cells"] = cj;
    out.results()["pairs"] = pj;
}

namespace detail
{
inline void represent_at(ExperimentConfig const& c,
                         int gamma_n,
                         std::string const& suffix,
                         RunOutput& out)
{
    auto const domain = parse_domain(c.domain);
    Point const x0 = point_from(c.x0, "x0");
    std::vector<HarmonicFunction> hs;
    for (auto const& s : c.h)
        hs.push_back(parse_harmonic(s, x0));
    for (auto const& h : hs)
        if (domain.kind != DomainKind::UnitDisk
            && h.kind() != HarmonicFunction::Kind::ConstantOne)
            throw InputError("built-in harmonic functions other than 'one' "
                             "live on the unit disk");

    RepresentingParams params;
    params.walk = walk_params(c);
    params.walk.stream = RepresentingParams{}.walk.stream;
    params.cell_seed = c.cell_seed;
    auto const part = build_partition(domain, gamma_n, c.cells, x0, params, hs);
    std::uint64_t evaluations = 1;

    auto partition = out.table({"i", "y_i", "mu_x0"});
    for (auto i : part.kept)
        partition.add_row({io::format_number(static_cast<std::uint64_t>(i)),
                           io::format_point(part.cells.representatives[i]),
                           io::format_number(part.mu_x0[i])});
    out.add_file("partition" + suffix + ".csv", partition);

    auto recon = out.table({"x", "h", "target", "estimate", "rel_err"});
    json rj = json::array();
    std::set<std::array<double, 3>> seen;
    for (auto const& pv : c.probes)
    {
        Point const x = point_from(pv, "probe point");
        if (seen.insert(x.x).second)
            ++evaluations;
        for (std::size_t k = 0; k < hs.size(); ++k)
        {
            double const target = hs[k](x);
            double const estimate = reconstruct(part, hs[k], x);
            double const rel = std::abs(estimate - target) / std::abs(target);
            recon.add_row({io::format_point(x),
                           c.h[k],
                           io::format_number(target),
                           io::format_number(estimate),
                           io::format_number(rel)});
            rj.push_back({{"x", io::format_point(x)},
                          {"h", c.h[k]},
                          {"target", target},
                          {"estimate", estimate},
                          {"rel_err", rel}});
        }
    }
    out.add_file("reconstruction" + suffix + ".csv", recon);

    json weights = json::array();
    for (std::size_t k = 0; k < hs.size(); ++k)
    {
        auto const w = weight_vector(part, hs[k]);
        json entry{{"h", c.h[k]}, {"total", w.total()}};
        if (part.cells.chart)
        {
            auto const pushed = push_to_boundary(part, w, c.bins);
            auto table = out.table({"bin", "mass"});
            for (std::size_t b = 0; b < pushed.size(); ++b)
                table.add_row({io::format_number(static_cast<std::uint64_t>(b)),
                               io::format_number(pushed[b])});
            out.add_file("pushed_" + std::to_string(k) + suffix + ".csv", table);
        }
        weights.push_back(entry);
    }
    out.add_work(evaluations * c.walks, 0);

    std::string const key = suffix.empty() ? "main" : suffix.substr(1);
    out.results()[key] = {{"gamma_n", gamma_n},
                          {"kept", part.kept.size()},
                          {"abort_fraction", part.abort_fraction},
                          {"delta_var", part.delta_var},
                          {"weights", weights},
                          {"reconstruction", rj}};
}
}  // namespace detail

//! Partition, reconstruction and pushed measures; --refine adds gamma_n = 16.
inline void run_represent(ExperimentConfig const& c, RunOutput& out)
{
    detail::represent_at(c, c.gamma_n, "", out);
    if (c.refine)
        detail::represent_at(c, 16, "_gamma16", out);
}

/*!
 * Golden vectors from the disk oracles: conditional annulus exit cells for
 * r_in = 1 - 1/n, r_out = 1 from z, and disk arc measures on the circle of
 * radius 1 - 1/gamma_n from x0.
 */
inline void run_oracle_check(ExperimentConfig const& c, RunOutput& out)
{
    Point const z = point_from(c.z, "z");
    double const r_in = 1.0 - 1.0 / c.n.front();
    oracle::AnnulusExit const annulus(r_in, 1.0, z);
    oracle::AnnulusExit const doubled(r_in, 1.0, z, 256);
    auto const p = annulus.conditional_cells(c.cells);
    auto const p2 = doubled.conditional_cells(c.cells);

    auto table = out.table({"cell", "phi_lo", "phi_hi", "p"});
    double drift = 0;
    double total = 0;
    for (int i = 0; i < c.cells; ++i)
    {
        table.add_row({io::format_number(i),
                       io::format_number(2 * pi * i / c.cells),
                       io::format_number(2 * pi * (i + 1) / c.cells),
                       io::format_number(p[i])});
        drift = std::max(drift, std::abs(p[i] - p2[i]));
        total += p[i];
    }
    out.add_file("annulus_cells.csv", table);

    double const radius = 1.0 - 1.0 / c.gamma_n;
    Point const x0 = point_from(c.x0, "x0");
    auto arcs = out.table({"cell", "phi_lo", "phi_hi", "measure"});
    double arc_total = 0;
    for (int i = 0; i < c.cells; ++i)
    {
        double const lo = 2 * pi * i / c.cells;
        double const hi = 2 * pi * (i + 1) / c.cells;
        double const m = oracle::disk_arc_harmonic_measure(radius, x0, lo, hi);
        arc_total += m;
        arcs.add_row({io::format_number(i),
                      io::format_number(lo),
                      io::format_number(hi),
                      io::format_number(m)});
    }
    out.add_file("disk_arcs.csv", arcs);

    out.results() = {{"inner_mass", annulus.inner_mass()},
                     {"conditional_total", total},
                     {"mode_doubling_drift", drift},
                     {"arc_radius", radius},
                     {"arc_total", arc_total},
                     {"arc_centered_at_0",
                      oracle::disk_arc_harmonic_measure(
                          radius, x0, -pi / c.cells, pi / c.cells)}};
}

}  // namespace martin
