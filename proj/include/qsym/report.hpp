#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "qsym/models.hpp"
#include "qsym/trajectories.hpp"

namespace qsym {

inline constexpr const char* kVersion = "1.0.0";

struct CheckOptions {
    std::optional<std::string> symmetry;  // all symmetries when empty
    double tol = 1e-9;
    bool block_support = true;
};

// SJED summary, condition verdicts with certificates, completion, block support and the
// comparison against the model's expectations. Indices are 1-based. Timings live under
// "timings_ms" so reports can be compared after dropping that key.
nlohmann::json check_report(const Model& m, const CheckOptions& opts = {});

// Residual table for dH', dL, dL^P, dL^C per symmetry, with "consistent" flags.
nlohmann::json joint_report(const Model& m, const CheckOptions& opts = {}, int random_candidates = 200);

struct SimulateOptions {
    std::string symmetry;
    TestLevel level = TestLevel::Full;
    int N = 20000;
    double T = 1.0;
    std::uint64_t seed = 1;
    double alpha = 0.01;
    int threads = 0;
    std::vector<double> times;  // ensemble-average checkpoints
    std::optional<std::string> out_dir;
};

nlohmann::json simulate_report(const Model& m, const SimulateOptions& opts);

// True when every verdict in the report agrees with its expectation.
bool report_consistent(const nlohmann::json& report);

Mat default_initial_state(int dim);
SjedPartition model_partition(const Model& m, double tol = 1e-9);
TestLevel parse_level(const std::string& s);
const char* to_string(TestLevel level);

}  // namespace qsym
