#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "upslope/json_io.hpp"
#include "upslope/upmat.hpp"

namespace upslope {

enum class CheckStatus { Pass, Fail, ReportOnly, Uncertified };

std::string status_str(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    Json details;
    double seconds = 0.0;
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    bool any_uncertified() const;
    Json to_json(bool with_timings = false) const;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 1;
    int prec = 40;
    int jobs = 1;
    std::vector<std::string> only;  // restrict to these check names (empty = all)

    static Scenario builtin(const std::string& name);
    static Scenario from_json(const Json& j);
};

Report run_scenario(const Scenario& s);

// Fixture corpus: the two integral U_3 matrices (3x3 over zeta_9 for the
// conductor-27 character, 9x9 over zeta_27 for the conductor-81 one) with
// known Newton/Hodge slopes, plus the Hamilton-order recipe.
struct Fixtures {
    CtxPtr ctx_c27;
    Mat c27;
    CtxPtr ctx_c81;
    Mat c81;
    Example53 hamilton;
};

Fixtures fixtures(int prec = 40);

}  // namespace upslope
