#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsym/symmetry.hpp"

namespace qsym {

enum class Granularity { Full, Coarse };

struct Event {
    double t;
    int label;  // jump index (Full) or SJED index (Coarse), 0-based
    bool operator==(const Event& o) const { return t == o.t && label == o.label; }
};

struct MeasurementRecord {
    std::vector<Event> events;
    double horizon = 0.0;
    Granularity granularity = Granularity::Full;

    // Throws ShapeError for unordered or out-of-window times, IndexError for bad labels.
    void validate(int num_labels) const;
    std::vector<int> counts(int num_labels) const;
};

struct Checkpoint {
    double t;
    Mat psi;
};

struct Trajectory {
    Mat psi0;
    MeasurementRecord record;
    std::vector<Checkpoint> states;  // requested times plus the horizon, ascending
    const Mat& final_state() const { return states.back().psi; }
};

struct TrajectoryEnsemble {
    std::vector<Trajectory> trajectories;
    std::string fingerprint;
    std::uint64_t seed = 0;
    double horizon = 0.0;
};

// Independent stream per (seed, index).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index);
    double uniform();  // [0, 1) with 53 random bits
    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

Mat drift(const Representation& rep, const Mat& psi);

struct JumpRate {
    int index;
    double rate;
    Mat destination;
};
std::vector<JumpRate> jump_rates(const Representation& rep, const Mat& psi, double tol = 1e-14);

struct RecordWeight {
    Mat phi;  // unnormalised conditional state
    double density = 0.0;
};

// Evaluated at time t (defaults to the horizon); events after t are ignored.
RecordWeight record_weight(const Representation& rep, const Mat& psi0, const MeasurementRecord& record,
                           std::optional<double> t = std::nullopt);
RecordWeight coarse_record_weight(const Representation& rep, const SjedPartition& partition, const Mat& psi0,
                                  const MeasurementRecord& record, std::optional<double> t = std::nullopt);

MeasurementRecord coarse_record(const MeasurementRecord& full, const SjedPartition& partition);
MeasurementRecord transform_record(const MeasurementRecord& record, const std::vector<int>& permutation);

struct SampleOptions {
    std::vector<double> checkpoints;  // extra times at which to store psi_t
    double rk_tol = 1e-10;
};

Trajectory sample_trajectory(const Representation& rep, const Mat& psi0, double T, Stream& rng,
                             const SampleOptions& opts = {});

// Worker count: explicit value if > 0, else QSYM_THREADS, else hardware concurrency.
int resolve_threads(int requested);

TrajectoryEnsemble simulate_ensemble(const Representation& rep, const Mat& psi0, double T, int N, std::uint64_t seed,
                                     const SampleOptions& opts = {}, int threads = 0);

struct EnsembleAverage {
    Mat mean;
    Mat stderr_;  // bootstrap standard error, real and imaginary parts separately
};

EnsembleAverage ensemble_average(const Representation& rep, const TrajectoryEnsemble& ens, double t,
                                 int resamples = 200, std::uint64_t seed = 7);

std::string fingerprint(const Representation& rep);

struct ChiSquared {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int bins = 0;
};

using Histogram = std::map<std::vector<long>, long>;

// Bins with pooled count below `min_pooled` are merged into one rare bin.
ChiSquared two_sample_chi_squared(const Histogram& a, const Histogram& b, long min_pooled = 10);

enum class TestLevel { Full, Coarse, Unlabelled };

struct SymmetryTestOptions {
    TestLevel level = TestLevel::Full;
    double T = 1.0;
    int N = 20000;
    std::uint64_t seed = 1;
    double alpha = 0.01;
    int threads = 0;
    std::optional<std::vector<int>> permutation;  // defaults to the condition III / II certificate
};

struct SymmetryTestResult {
    ChiSquared chi2;
    bool symmetric = false;  // p >= alpha
    std::vector<int> permutation;
};

// Histogram keys for ensemble A (mapped through the symmetry) and ensemble B.
Histogram symmetry_histogram(const TrajectoryEnsemble& ens, const Representation& rep, const SjedPartition& partition,
                             const SymmetryOperator* sym, TestLevel level, const std::vector<int>& permutation);

SymmetryTestResult ensemble_symmetry_test(const Representation& rep, const SjedPartition& partition,
                                          const SymmetryOperator& sym, const Mat& psi0,
                                          const SymmetryTestOptions& opts);

// Same simulation, scanning every label permutation; reports the largest p-value.
SymmetryTestResult best_permutation_test(const Representation& rep, const SjedPartition& partition,
                                         const SymmetryOperator& sym, const Mat& psi0,
                                         const SymmetryTestOptions& opts);

// Transformed-generator check: ensembles of rep from psi0 and of the transformed rep from U psi0 U^dag.
SymmetryTestResult transformed_generator_test(const Representation& rep, const SymmetryOperator& sym,
                                              const Mat& psi0, const SymmetryTestOptions& opts);

// One JSON object per line: {"traj", "events": [[t, label]...], "final": [[re, im]...]}.
void export_ensemble_jsonl(const TrajectoryEnsemble& ens, std::ostream& out);
// label,count,trajectories
void export_count_histogram_csv(const TrajectoryEnsemble& ens, int num_labels, std::ostream& out);

}  // namespace qsym
