#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lf {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0;   // the decisive measured quantity
    double required = 0;   // the threshold it is compared with
    std::string relation;  // how measured relates to required when passing, e.g. "<" or ">="
    std::string detail;
    double seconds = 0;
    double time_limit = 0;
};

enum class Level { Quick, Full };

struct VerifyOptions {
    Level level = Level::Full;
    uint64_t seed = 20241016;
    // deliberately corrupt one ingredient to show the suite catches it:
    // "spin-weight", "six-vertex-weight", "bkw-phase", "p8", "fk-weight"
    std::string mutation;
    std::vector<int> only;  // empty: all criteria
};

std::vector<std::string> known_mutations();
int num_criteria();
std::string criterion_name(int id);

CheckResult run_criterion(int id, const VerifyOptions& opt);
std::vector<CheckResult> run_criteria(const VerifyOptions& opt,
                                      const std::function<void(const CheckResult&)>& on_result = {});

std::string format_line(const CheckResult& r);
std::string report_json(const std::vector<CheckResult>& rs, const VerifyOptions& opt);

}  // namespace lf
