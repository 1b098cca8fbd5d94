#include <cstdio>
#include <string>

#include "macrsv/validation.hpp"

// Runs the full acceptance suite and prints one verdict line per criterion.
// Exit status 0 only if every criterion passes.
int main(int argc, char** argv) {
    std::string scenario_dir = "scenarios";
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--scenario-dir" && i + 1 < argc) {
            scenario_dir = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--scenario-dir DIR]\n", argv[0]);
            return 2;
        }
    }

    int failed = 0;
    std::size_t printed = 0;
    auto report = [&](const macrsv::CheckResult& r) {
        const char* verdict = r.pass ? (r.finding ? "PASS [finding]" : "PASS") : "FAIL";
        if (!r.pass) ++failed;
        ++printed;
        std::printf("criterion %d (%s): %s -- %s\n", r.criterion, r.name.c_str(), verdict,
                    r.detail.c_str());
        std::fflush(stdout);
    };
    try {
        macrsv::run_acceptance(scenario_dir, report);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%zu criteria, %d failed\n", printed, failed);
    return failed == 0 ? 0 : 1;
}
