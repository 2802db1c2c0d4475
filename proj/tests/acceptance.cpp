// Acceptance criteria 1-12, one PASS/FAIL line each.
//   acceptance [--criterion N]... [--quick] [--seed S]
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "suites.hpp"
#include "vpfp/types.hpp"

int main(int argc, char** argv) {
    vpfp::suites::Options opt;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--quick") {
            opt.quick = true;
        } else if (a == "--criterion" && i + 1 < argc) {
            ids.push_back(std::atoi(argv[++i]));
        } else if (a == "--seed" && i + 1 < argc) {
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]... [--quick] [--seed S]\n");
            return 2;
        }
    }
    if (ids.empty())
        for (int i = 1; i <= vpfp::suites::criterion_count(); ++i) ids.push_back(i);
    int failed = 0;
    for (int id : ids) {
        try {
            const auto v = vpfp::suites::run_criterion(id, opt);
            std::printf("%s  (%.1f s)\n", vpfp::suites::format_line(v).c_str(), v.seconds);
            failed += !v.pass;
        } catch (const std::exception& e) {
            std::printf("criterion %2d FAIL error: %s\n", id, e.what());
            ++failed;
        }
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(ids.size()) - failed, ids.size());
    return failed ? 1 : 0;
}
