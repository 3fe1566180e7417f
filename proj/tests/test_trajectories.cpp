#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "qsym/models.hpp"
#include "qsym/trajectories.hpp"

using namespace qsym;

namespace {

Mat pure(const Vec& v) {
    const Vec n = v / v.norm();
    return n * n.adjoint();
}

Mat generic_qubit() {
    Vec v(2);
    v << std::cos(0.3), std::polar(std::sin(0.3), 0.7);
    return pure(v);
}

Mat ket_proj(int d, int i) {
    Mat P = Mat::Zero(d, d);
    P(i, i) = 1;
    return P;
}

// Gauss-Legendre nodes and weights on [-1, 1], 8 points.
const double kNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                          0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
const double kWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066578181698, 0.3626837833783620,
                            0.3626837833783620, 0.3137066578181698, 0.2223810344533745, 0.1012285362903763};

// Sum of phi_T over all records with exactly n events (nested quadrature over ordered times).
Mat records_with(int n, const Representation& rep, const Mat& psi0, double T, std::vector<Event> prefix, double from) {
    if (n == 0) {
        MeasurementRecord r;
        r.events = prefix;
        r.horizon = T;
        return record_weight(rep, psi0, r).phi;
    }
    Mat acc = Mat::Zero(rep.dim, rep.dim);
    const double half = 0.5 * (T - from), mid = 0.5 * (T + from);
    for (int q = 0; q < 8; ++q) {
        const double t = mid + half * kNodes[q];
        for (int j = 0; j < rep.num_jumps(); ++j) {
            auto next = prefix;
            next.push_back({t, j});
            acc += half * kWeights[q] * records_with(n - 1, rep, psi0, T, next, t);
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("drift") {
    std::mt19937_64 rng(1);
    Mat H = random_hermitian(3, rng);
    auto closed = Representation::make(H, {});
    Mat psi = pure(random_state(3, rng));
    CHECK((drift(closed, psi) - (-kI * (H * psi - psi * H))).norm() < 1e-13);

    Mat sm = Mat::Zero(2, 2);
    sm(0, 1) = 1;
    auto dark = Representation::make(pauli::z(), {sm});
    CHECK(drift(dark, ket_proj(2, 0)).norm() < 1e-15);

    auto m = qubit_II();
    for (int i = 0; i < 100; ++i) CHECK(std::abs(drift(m.rep, pure(random_state(2, rng))).trace()) < 1e-12);
}

TEST_CASE("jump rates") {
    const double g = 0.4;
    auto rep = Representation::make(Mat::Zero(2, 2), {std::sqrt(g) * pauli::x()});
    auto r = jump_rates(rep, ket_proj(2, 0));
    REQUIRE(r.size() == 1);
    CHECK(r[0].rate == doctest::Approx(g));
    CHECK((r[0].destination - ket_proj(2, 1)).norm() < 1e-15);

    Mat sm = Mat::Zero(2, 2);
    sm(0, 1) = 1;
    CHECK(jump_rates(Representation::make(Mat::Zero(2, 2), {sm}), ket_proj(2, 0)).empty());

    std::mt19937_64 rng(5);
    auto m = twoqubit_II();
    Mat psi = pure(random_state(4, rng));
    double total = 0.0;
    for (const auto& j : jump_rates(m.rep, psi)) total += j.rate;
    CHECK(total == doctest::Approx(apply_master_operator(m.rep, psi).trace().real() * 0 + jump_superop(m.rep).apply(psi).trace().real()));
}

TEST_CASE("record weights") {
    MeasurementRecord empty;
    empty.horizon = 1.7;
    auto closed = Representation::make(pauli::x(), {});
    CHECK(record_weight(closed, generic_qubit(), empty).density == doctest::Approx(1.0));

    const double g = 0.8, T = 1.3;
    auto d = dephasing_qubit(g);
    Vec plus(2);
    plus << 1, 1;
    empty.horizon = T;
    CHECK(record_weight(d.rep, pure(plus), empty).density == doctest::Approx(std::exp(-g * T)).epsilon(1e-12));

    // Records up to three events reproduce the master equation solution.
    QubitParams p;
    p.gz = p.gx = 0.1;
    auto m = qubit_I(p);
    const Mat psi0 = generic_qubit();
    Mat sum = Mat::Zero(2, 2);
    for (int n = 0; n <= 3; ++n) sum += records_with(n, m.rep, psi0, 1.0, {}, 0.0);
    const Mat exact = evolve_density(m.rep, psi0, 1.0);
    CHECK((sum - exact).norm() < 1e-4);
    CHECK(sum.trace().real() <= 1.0 + 1e-12);
    CHECK(sum.trace().real() > 1.0 - 1e-4);

    MeasurementRecord bad;
    bad.horizon = 1.0;
    bad.events = {{0.5, 0}, {0.2, 1}};
    CHECK_THROWS_AS(record_weight(m.rep, psi0, bad), Error);
    bad.events = {{0.5, 7}};
    CHECK_THROWS_AS(record_weight(m.rep, psi0, bad), Error);
}

TEST_CASE("coarse record weights") {
    auto m = qubit_II();
    const Mat psi0 = generic_qubit();
    auto p = build_sjeds(m.rep);

    auto w = qubit_weak();
    auto pw = build_sjeds(w.rep);
    MeasurementRecord r;
    r.horizon = 2.0;
    r.events = {{0.4, 1}, {1.1, 0}};
    const auto full = record_weight(w.rep, psi0, r);
    const auto coarse = coarse_record_weight(w.rep, pw, psi0, coarse_record(r, pw));
    CHECK((full.phi - coarse.phi).norm() < 1e-14);

    MeasurementRecord c1;
    c1.horizon = 1.5;
    c1.granularity = Granularity::Coarse;
    c1.events = {{0.6, 0}};
    Mat sum = Mat::Zero(2, 2);
    for (int j : p.sets[0].members) {
        MeasurementRecord f = c1;
        f.granularity = Granularity::Full;
        f.events[0].label = j;
        sum += record_weight(m.rep, psi0, f).phi;
    }
    auto cw = coarse_record_weight(m.rep, p, psi0, c1);
    CHECK((sum - cw.phi).norm() < 1e-13);

    MeasurementRecord c2 = c1;
    c2.events = {{0.3, 0}, {0.9, 1}};
    sum.setZero();
    for (int j : p.sets[0].members)
        for (int k : p.sets[1].members) {
            MeasurementRecord f = c2;
            f.events[0].label = j;
            f.events[1].label = k;
            f.granularity = Granularity::Full;
            sum += record_weight(m.rep, psi0, f).phi;
        }
    auto cw2 = coarse_record_weight(m.rep, p, psi0, c2);
    CHECK((sum - cw2.phi).norm() < 1e-13);
    const Mat state = cw2.phi / cw2.density;
    CHECK(hermitian_eigen(state).values(1) > 1 - 1e-10);
}

TEST_CASE("transform_record") {
    MeasurementRecord r;
    r.horizon = 1.0;
    r.events = {{0.3, 0}, {0.7, 1}};
    CHECK(transform_record(r, {0, 1}).events == r.events);
    auto s = transform_record(r, {1, 0});
    CHECK(s.events[0].label == 1);
    CHECK(s.events[1].label == 0);
    CHECK(s.events[0].t == 0.3);
    std::vector<int> pi = {2, 0, 1}, inv = {1, 2, 0};
    r.events.push_back({0.9, 2});
    CHECK(transform_record(transform_record(r, pi), inv).events == r.events);
    CHECK_THROWS_AS(transform_record(r, {0, 1}), Error);
    CHECK_THROWS_AS(transform_record(r, {0, 0, 1}), Error);
}

TEST_CASE("sampling without jumps follows the unitary") {
    std::mt19937_64 rng(3);
    Mat H = random_hermitian(3, rng);
    auto closed = Representation::make(H, {});
    Mat psi0 = pure(random_state(3, rng));
    Stream s(1, 0);
    auto tr = sample_trajectory(closed, psi0, 2.0, s);
    CHECK(tr.record.events.empty());
    const Mat U = expm(-kI * 2.0 * H);
    CHECK((tr.final_state() - U * psi0 * U.adjoint()).norm() < 1e-8);
}

TEST_CASE("dephasing jump counts are Poissonian") {
    const double g = 0.9, T = 1.5;
    auto d = dephasing_qubit(g);
    Vec plus(2);
    plus << 1, 1;
    auto ens = simulate_ensemble(d.rep, pure(plus), T, 20000, 42);
    double mean = 0.0;
    for (const auto& tr : ens.trajectories) mean += tr.record.events.size();
    mean /= 20000;
    CHECK(std::abs(mean - g * T) < 3 * std::sqrt(g * T / 20000));
}

TEST_CASE("ensemble averages recover the master equation") {
    auto m = qubit_weak();
    const Mat psi0 = generic_qubit();
    SampleOptions opts;
    opts.checkpoints = {0.0, 2.0};
    auto ens = simulate_ensemble(m.rep, psi0, 2.5, 20000, 9, opts);
    auto avg = ensemble_average(m.rep, ens, 2.0);
    const Mat exact = evolve_density(m.rep, psi0, 2.0);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(avg.mean(k).real() - exact(k).real()) <= 3 * avg.stderr_(k).real() + 1e-12);
        CHECK(std::abs(avg.mean(k).imag() - exact(k).imag()) <= 3 * avg.stderr_(k).imag() + 1e-12);
    }
    CHECK((ensemble_average(m.rep, ens, 0.0).mean - psi0).norm() < 1e-12);
    // off-checkpoint times are replayed from the records
    auto mid = ensemble_average(m.rep, ens, 1.0);
    CHECK((mid.mean - evolve_density(m.rep, psi0, 1.0)).norm() < 0.02);

    TrajectoryEnsemble one = ens;
    one.trajectories.resize(1);
    CHECK((ensemble_average(m.rep, one, 2.0).mean - one.trajectories[0].states[1].psi).norm() < 1e-15);
}

TEST_CASE("trajectory invariants") {
    auto m = twoqubit_II();
    std::mt19937_64 rng(12);
    const Mat psi0 = pure(random_state(4, rng));
    SampleOptions opts;
    opts.checkpoints = {0.25, 0.5, 0.75, 1.0, 1.5};
    auto ens = simulate_ensemble(m.rep, psi0, 2.0, 200, 77, opts, 1);
    for (const auto& tr : ens.trajectories) {
        for (const auto& c : tr.states) {
            CHECK(hermitian_eigen(c.psi).values(3) >= 1 - 1e-8);
            const auto w = record_weight(m.rep, psi0, tr.record, c.t);
            CHECK((w.phi / w.density - c.psi).norm() < 1e-6);
        }
    }
    auto again = simulate_ensemble(m.rep, psi0, 2.0, 200, 77, opts, 3);
    bool identical = true;
    for (size_t i = 0; i < ens.trajectories.size(); ++i) {
        identical &= ens.trajectories[i].record.events == again.trajectories[i].record.events;
        identical &= ens.trajectories[i].final_state() == again.trajectories[i].final_state();
    }
    CHECK(identical);
    CHECK(ens.fingerprint == again.fingerprint);
}

TEST_CASE("chi-squared two-sample test") {
    Histogram a, b;
    a[{0}] = 500;
    a[{1}] = 500;
    b[{0}] = 500;
    b[{1}] = 500;
    CHECK(two_sample_chi_squared(a, b).p_value == doctest::Approx(1.0));
    b[{0}] = 700;
    b[{1}] = 300;
    CHECK(two_sample_chi_squared(a, b).p_value < 1e-10);
    // rare bins are pooled
    a[{2}] = 3;
    b[{3}] = 4;
    auto c = two_sample_chi_squared(a, b);
    CHECK(c.bins == 2);
}

TEST_CASE("labelled symmetry of the swapped qubit jumps") {
    auto m = qubit_III();
    auto p = build_sjeds(m.rep);
    SymmetryTestOptions o;
    o.level = TestLevel::Full;
    o.N = 50000;
    o.T = 1.0;
    o.seed = 3;
    auto r = ensemble_symmetry_test(m.rep, p, SymmetryOperator::make(pauli::z()), generic_qubit(), o);
    CHECK(r.permutation == std::vector<int>{1, 0});
    CHECK(r.chi2.p_value > 0.01);
}

TEST_CASE("condition-II qubit: labels break the symmetry, SJEDs keep it") {
    auto m = qubit_II();
    auto p = build_sjeds(m.rep);
    auto Z = SymmetryOperator::make(pauli::z());
    SymmetryTestOptions o;
    o.N = 20000;
    o.T = 1.0;
    o.seed = 5;
    o.level = TestLevel::Full;
    CHECK_THROWS_AS(ensemble_symmetry_test(m.rep, p, Z, generic_qubit(), o), Error);
    auto best = best_permutation_test(m.rep, p, Z, generic_qubit(), o);
    CHECK(best.chi2.p_value < 1e-4);
    o.level = TestLevel::Coarse;
    auto coarse = ensemble_symmetry_test(m.rep, p, Z, generic_qubit(), o);
    CHECK(coarse.permutation == std::vector<int>{1, 0});
    CHECK(coarse.chi2.p_value > 0.01);
}

TEST_CASE("unlabelled level separates condition I from condition II") {
    auto Z = SymmetryOperator::make(pauli::z());
    SymmetryTestOptions o;
    o.level = TestLevel::Unlabelled;
    o.N = 20000;
    o.T = 1.0;
    o.seed = 8;
    auto ok = qubit_II();
    CHECK(ensemble_symmetry_test(ok.rep, build_sjeds(ok.rep), Z, generic_qubit(), o).chi2.p_value > 0.01);
    auto bad = qubit_I();
    CHECK(ensemble_symmetry_test(bad.rep, build_sjeds(bad.rep), Z, generic_qubit(), o).chi2.p_value < 1e-4);
}

TEST_CASE("transformed generator reproduces transformed paths") {
    for (const auto& name : {"qubit-I", "qubit-II"}) {
        auto m = example(name);
        SymmetryTestOptions o;
        o.N = 20000;
        o.T = 1.0;
        o.seed = 13;
        auto r = transformed_generator_test(m.rep, SymmetryOperator::make(pauli::z()), generic_qubit(), o);
        CHECK(r.chi2.p_value > 0.01);
    }
}

TEST_CASE("export formats") {
    auto d = dephasing_qubit();
    auto ens = simulate_ensemble(d.rep, generic_qubit(), 1.0, 3, 1);
    std::ostringstream js, csv;
    export_ensemble_jsonl(ens, js);
    export_count_histogram_csv(ens, 1, csv);
    int lines = 0;
    for (char c : js.str()) lines += c == '\n';
    CHECK(lines == 3);
    CHECK(js.str().rfind("{\"traj\":0,\"events\":[", 0) == 0);
    CHECK(csv.str().rfind("label,count,trajectories\n", 0) == 0);
}
