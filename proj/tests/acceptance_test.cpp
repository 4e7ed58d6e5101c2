#include <cstdio>

#include <martin/acceptance.hpp>

// One line per criterion; exit status 1 when any criterion fails.
int main()
{
    martin::AcceptanceOptions opt;
    opt.golden_dir = MARTIN_GOLDEN_DIR;
    auto const results = martin::run_acceptance(opt, [](auto const& r) {
        std::printf("%s\n", martin::format_line(r).c_str());
        std::fflush(stdout);
    });
    int failed = 0;
    for (auto const& r : results)
        failed += !r.pass;
    std::printf("%d of %zu criteria passed\n",
                static_cast<int>(results.size()) - failed,
                results.size());
    return failed ? 1 : 0;
}
