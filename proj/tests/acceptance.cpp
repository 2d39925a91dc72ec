// Acceptance gate: runs every regression criterion at full scale and prints
// one pass/fail line per criterion. Exits nonzero if any fails.

#include "clearnet/harness.hpp"

#include <cstdio>

int main() {
    const clearnet::SuiteReport report = clearnet::run_scenario_suite(false);
    int failures = 0;
    for (const auto& e : report.entries) {
        std::printf("[%s] criterion %s — %s (%.2fs)\n", e.pass ? "PASS" : "FAIL", e.name.c_str(),
                    e.measured.c_str(), e.seconds);
        if (!e.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(report.entries.size()) - failures,
                report.entries.size());
    return failures == 0 ? 0 : 1;
}
