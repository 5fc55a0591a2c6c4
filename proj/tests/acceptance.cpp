// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "systolic/acceptance.hpp"

int main(int argc, char** argv)
{
    using namespace systolic;
    std::uint64_t seed = acceptance::kDefaultSeed;
    if (argc > 1)
        seed = std::strtoull(argv[1], nullptr, 10);
    int failed = 0;
    acceptance::run_all(seed, [&](const acceptance::CriterionResult& r) {
        std::printf("%s  %2d  %-28s %8.3f s (limit %g s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.seconds, r.limit_seconds);
        for (const auto& e : r.entries)
            if (e.status == Status::Fail)
                std::printf("        failed: %s value=%.17g reference=%.17g margin=%.3g\n", e.name.c_str(), e.value,
                            e.reference, e.margin);
        if (!r.within_time)
            std::printf("        failed: runtime limit\n");
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    });
    std::printf("%d/%d criteria passed\n", acceptance::criterion_count() - failed, acceptance::criterion_count());
    return failed == 0 ? 0 : 1;
}
