#include <cstdio>
#include <string>

#include "qmeter/acceptance.hpp"

int main(int argc, char** argv) {
    std::string dir = "scenarios";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--scenarios" && i + 1 < argc) {
            dir = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--scenarios DIR]\n", argv[0]);
            return 2;
        }
    }

    const auto results = qmeter::acceptance::run_all({dir});
    bool all_passed = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s (%s)\n", r.passed ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str());
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 1;
}
