#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <martin/acceptance.hpp>

using martin::json;

namespace
{
martin::Point parse_probe(std::string const& s)
{
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= s.size())
    {
        auto end = s.find(',', start);
        if (end == std::string::npos)
            end = s.size();
        v.push_back(martin::detail::parse_double(s.substr(start, end - start)));
        start = end + 1;
    }
    return martin::point_from(v, "probe point");
}

std::filesystem::path golden_dir()
{
    if (char const* env = std::getenv("MARTINLAB_GOLDEN"); env && *env)
        return env;
    return MARTIN_GOLDEN_DIR;
}

int execute(martin::ExperimentConfig const& config)
{
    martin::RunOutput out(config);
    int status = 0;
    auto const start = std::chrono::steady_clock::now();
    try
    {
        if (config.command == "exitdist")
            martin::run_exitdist(config, out);
        else if (config.command == "probe")
            martin::run_probe(config, out);
        else if (config.command == "ring-scan")
            martin::run_ring_scan(config, out);
        else if (config.command == "comb-scan")
            martin::run_comb_scan(config, out);
        else if (config.command == "represent")
            martin::run_represent(config, out);
        else if (config.command == "oracle-check")
            martin::run_oracle_check(config, out);
        else if (config.command == "accept")
            status = martin::run_accept(config, out, golden_dir()) ? 0 : 1;
    }
    catch (martin::InputError const& e)
    {
        out.fail("input", e.what());
        std::cerr << "martinlab: " << e.what() << "\n";
        status = 2;
    }
    catch (std::exception const& e)
    {
        out.fail("runtime", e.what());
        std::cerr << "martinlab: " << e.what() << "\n";
        status = 1;
    }
    out.write();
    double const seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    std::cerr << "martinlab: " << config.command << " wrote "
              << martin::output_dir(config).string() << " in " << seconds
              << " s\n";
    if (config.command != "accept")
        std::cout << out.summary()["verdicts"].dump() << "\n";
    return status;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exit-distribution experiments on exhaustions of planar and "
                 "spatial domains"};
    app.set_version_flag("--version", std::string(martin::version_string));

    std::string command, config_file;
    app.add_option("command", command, "exitdist, probe, ring-scan, comb-scan, "
                                        "represent, oracle-check or accept")
        ->required()
        ->check(CLI::IsMember(martin::command_names()));
    app.add_option("--config", config_file, "JSON config file; flags override it")
        ->check(CLI::ExistingFile);

    json flags = json::object();
    std::string domain, pair, path_a, path_b, suite, out_dir;
    std::vector<int> n, slots;
    std::vector<double> z, azimuths, x0;
    std::vector<std::string> h, probes;
    int cells = 0, gamma_n = 0, bins = 0, bootstrap = 0;
    double t = 0, t_b = 0, offset = 0, epsilon = 0;
    std::uint64_t walks = 0, budget = 0, min_accepted = 0, seed = 0,
                  max_steps = 0, cell_seed = 0;
    unsigned threads = 1;
    bool sensitivity = false, refine = false;

    struct Bound
    {
        CLI::Option* option;
        char const* key;
        std::function<json()> value;
    };
    std::vector<Bound> bound;
    auto bind = [&](CLI::Option* o, char const* key, auto& var) {
        bound.push_back({o, key, [&var] { return json(var); }});
        return o;
    };

    bind(app.add_option("--domain", domain, "disk, cutdisk, spheres, comb[:N=K]"),
         "domain", domain);
    bind(app.add_option("--n", n, "level schedule, e.g. 2,4,8")->delimiter(','),
         "n", n);
    bind(app.add_option("--M", cells, "boundary cells"), "M", cells);
    bind(app.add_option("--t", t, "approach offset"), "t", t);
    bind(app.add_option("--t-b", t_b, "offset of the second point"), "t_b", t_b);
    bind(app.add_option("--walks", walks, "walks per batch"), "walks", walks);
    bind(app.add_option("--budget", budget, "batch budget multiplier"),
         "budget_multiplier", budget);
    bind(app.add_option("--min-accepted", min_accepted, "accepted-walk target"),
         "min_accepted", min_accepted);
    bind(app.add_option("--seed", seed, "64-bit seed"), "seed", seed);
    bind(app.add_option("--max-steps", max_steps, "steps before a walk aborts"),
         "max_steps", max_steps);
    bind(app.add_option("--epsilon", epsilon, "absorption shell"),
         "epsilon_shell", epsilon);
    bind(app.add_option("--cell-seed", cell_seed, "seed of implicit cellizations"),
         "cell_seed", cell_seed);
    bind(app.add_option("--bootstrap", bootstrap, "bootstrap resamples"),
         "bootstrap", bootstrap);
    bind(app.add_option("--z", z, "exitdist start point")->delimiter(','), "z", z);
    bind(app.add_option("--pair", pair, "slit:A probes (A,+t) against (A,-t)"),
         "pair", pair);
    bind(app.add_option("--a", path_a, "first approach path"), "path_a", path_a);
    bind(app.add_option("--b", path_b, "second approach path"), "path_b", path_b);
    bind(app.add_option("--azimuths", azimuths, "ring-scan azimuths")->delimiter(','),
         "azimuths", azimuths);
    bind(app.add_option("--offset", offset, "ring-scan offset"), "offset", offset);
    bind(app.add_option("--slots", slots, "comb-scan slots")->delimiter(','),
         "slots", slots);
    bind(app.add_option("--gamma-n", gamma_n, "level of the partitioned set"),
         "gamma_n", gamma_n);
    bind(app.add_option("--x0", x0, "base point")->delimiter(','), "x0", x0);
    bind(app.add_option("--harmonic", h, "harmonic function, repeatable"), "h", h);
    auto* probe_opt = app.add_option("--probe", probes, "reconstruction point x,y; "
                                                         "repeatable");
    bind(app.add_option("--bins", bins, "boundary bins"), "bins", bins);
    bind(app.add_option("--suite", suite, "acceptance suite"), "suite", suite);
    bind(app.add_flag("--sensitivity", sensitivity, "rerun at M=32 and M=128"),
         "sensitivity", sensitivity);
    bind(app.add_flag("--refine", refine, "rerun at t/2 or gamma_n=16"),
         "refine", refine);
    bind(app.add_option("--out", out_dir, "output directory ($MARTINLAB_OUT)"),
         "out_dir", out_dir);
    bind(app.add_option("--threads", threads, "worker threads"), "threads", threads);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    martin::ExperimentConfig config;
    try
    {
        if (!config_file.empty())
        {
            std::ifstream in(config_file);
            json file;
            try
            {
                file = json::parse(in);
            }
            catch (json::exception const& e)
            {
                throw martin::InputError(std::string("config is not JSON: ")
                                         + e.what());
            }
            martin::apply_json(file, config);
        }
        for (auto const& b : bound)
            if (b.option->count() > 0)
                flags[b.key] = b.value();
        if (probe_opt->count() > 0)
        {
            json list = json::array();
            for (auto const& p : probes)
            {
                auto const pt = parse_probe(p);
                list.push_back(std::vector<double>(pt.x.begin(),
                                                   pt.x.begin() + pt.dim));
            }
            flags["probes"] = list;
        }
        flags["command"] = command;
        martin::apply_json(flags, config);
        martin::validate(config);
    }
    catch (martin::InputError const& e)
    {
        std::cerr << "martinlab: " << e.what() << "\n";
        return 2;
    }
    return execute(config);
}
