#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpfp/assembly.hpp"

namespace vpfp::suites {

struct Options {
    bool quick = false;  // reduced grids; verdicts are marked "smoke"
    std::uint64_t seed = 1;
};

struct Verdict {
    int id = 0;
    std::string title;
    bool pass = false;
    bool smoke = false;
    double seconds = 0.0;
    std::string summary;
    nlohmann::json detail;
};

// Criterion ids belonging to a suite (kernel, lowfreq, highfreq, assembly,
// nonlinear, all); throws UsageError for unknown names.
std::vector<int> criteria_of(const std::string& suite);
int criterion_count();
Verdict run_criterion(int id, const Options& opt);

// Timings are left out so that reports are reproducible.
nlohmann::json to_json(const Verdict& v);
std::string format_line(const Verdict& v);
// inf exponents (super-algebraic) are written as 1e300, NaN as null.
nlohmann::json fit_to_json(const DecayFit& f);

// Gap scan shared by the time-rate criteria: eta0_hat for the degree used by
// the suites (16, or 8 in quick mode). Cached per process.
struct GapNumbers {
    double r0_hat = 0.0, beta0_hat = 0.0, beta1_hat = 0.0, eta0_hat = 0.0;
    int max_degree = 0;
};
const GapNumbers& measured_gap(bool quick);

}  // namespace vpfp::suites
