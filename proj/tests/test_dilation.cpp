#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <random>

#include "qsym/dilation.hpp"
#include "qsym/models.hpp"

using namespace qsym;

namespace {

const std::vector<double> kDts = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

SymmetryOperator Z() { return SymmetryOperator::make(pauli::z()); }

Representation random_rep(int d, int n, std::mt19937_64& rng) {
    Representation r;
    r.dim = d;
    r.H = random_hermitian(d, rng);
    for (int j = 0; j < n; ++j) r.jumps.push_back(random_matrix(d, d, rng) * 0.5);
    return r;
}

Mat ket_bra(int d, int i, int j) {
    Mat m = Mat::Zero(d, d);
    m(i, j) = 1;
    return m;
}

double min_eig(const Mat& H) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("time bin Ito table on the vacuum sector") {
    TimeBin bin{3};
    const double dt = 0.37;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            const Mat prod = bin.creation(j, dt).adjoint() * bin.creation(k, dt);
            const Mat expect = (j == k ? dt : 0.0) * bin.vacuum_projector();
            CHECK((prod - expect).norm() < 1e-15);
        }
    CHECK_THROWS_AS(bin.creation(3, dt), Error);
}

TEST_CASE("stochastic Hamiltonian construction") {
    Representation r;
    r.dim = 2;
    r.H = pauli::x();
    const JointStep s = stochastic_hamiltonian_step(r);
    CHECK(s.bin_dim == 1);
    CHECK((s.hamiltonian(0.1) - 0.1 * r.H).norm() < 1e-15);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const Representation q = random_rep(2 + t % 2, 1 + t % 3, rng);
        const Mat dH = stochastic_hamiltonian_step(q).hamiltonian(0.013);
        CHECK((dH - dH.adjoint()).norm() < 1e-13);
        // independent assembly from explicit time-bin operators
        TimeBin bin{q.num_jumps()};
        Mat ref = kron(q.H, Mat::Identity(bin.dim(), bin.dim())) * 0.013;
        for (int j = 0; j < q.num_jumps(); ++j) {
            const Mat c = bin.creation(j, 0.013);
            ref += kI * (kron(q.jumps[j], c) - kron(q.jumps[j].adjoint(), c.adjoint()));
        }
        CHECK((dH - ref).norm() < 1e-13);
    }
}

TEST_CASE("rotating frame step") {
    const Model m = qubit_weak();
    const JointStep a = stochastic_hamiltonian_step(m.rep);
    const JointStep b = rotating_frame_step(m.rep);
    CHECK((a.hamiltonian(0.01) - b.hamiltonian(0.01)).norm() < 1e-15);

    // J = sigma_- + 1: J' = sigma_-, H' = H + (i/2)(conj(c) J' - c J'^dag) with c = Tr J / d
    Representation r;
    r.dim = 2;
    r.H = 0.3 * pauli::z();
    const Mat sm = ket_bra(2, 1, 0);
    r.jumps = {sm + Mat::Identity(2, 2)};
    const Mat Hp = r.H + 0.5 * kI * (sm - sm.adjoint());
    Representation ref;
    ref.dim = 2;
    ref.H = Hp;
    ref.jumps = {sm};
    const JointStep s = rotating_frame_step(r);
    CHECK((s.hamiltonian(0.02) - stochastic_hamiltonian_step(ref).hamiltonian(0.02)).norm() < 1e-13);

    // J = |0><0| -> J' = diag(1/2, -1/2)
    r.jumps = {ket_bra(2, 0, 0)};
    const Representation t = traceless_representation(r);
    Mat half = Mat::Zero(2, 2);
    half(0, 0) = 0.5;
    half(1, 1) = -0.5;
    CHECK((t.jumps[0] - half).norm() < 1e-15);
}

TEST_CASE("displacement") {
    const Model m = qubit_weak();
    CHECK((displacement_step(m.rep, 0.01) - Mat::Identity(3, 3)).norm() < 1e-14);

    Representation r;
    r.dim = 2;
    r.H = Mat::Zero(2, 2);
    r.jumps = {ket_bra(2, 0, 0)};
    for (double dt : {0.01, 0.3}) {
        const Mat D = displacement_step(r, dt);
        const double th = std::sqrt(dt) / 2;
        Mat R = Mat::Zero(2, 2);
        R << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
        CHECK((D - R).norm() < 1e-13);
        CHECK(unitarity_defect(D) < 1e-12);
    }
    CHECK_THROWS_AS(displacement_step(r, -1.0), Error);
}

TEST_CASE("rotating frame convergence order") {
    const ConvergenceOrder flat = rotating_frame_convergence(qubit_weak().rep, kDts);
    for (double x : flat.residuals) CHECK(x <= 1e-14);

    Representation r;
    r.dim = 2;
    r.H = pauli::x();
    r.jumps = {ket_bra(2, 0, 0), ket_bra(2, 1, 0) + 0.4 * Mat::Identity(2, 2)};
    const ConvergenceOrder c = rotating_frame_convergence(r, kDts);
    CHECK(c.slope >= 1.4);
    CHECK(c.slope <= 1.6);
    // halving dt
    const ConvergenceOrder h = rotating_frame_convergence(r, {1e-3, 5e-4});
    const double ratio = h.residuals[0] / h.residuals[1];
    CHECK(ratio == doctest::Approx(std::pow(2.0, 1.5)).epsilon(0.1));
    // the operator form on the whole bin space only reaches order 1/2
    CHECK(c.operator_slope < 1.0);
}

TEST_CASE("trace recovery for every step kind") {
    for (const char* name : {"qubit-I", "qubit-II", "qubit-III"}) {
        const Model m = example(name);
        const SjedPartition p = build_sjeds(m.rep);
        Mat psi = Mat::Zero(2, 2);
        const Vec v = (Vec(2) << std::cos(0.3), std::polar(std::sin(0.3), 0.7)).finished();
        psi = v * v.adjoint();
        for (const JointStep& s : {stochastic_hamiltonian_step(m.rep), dephased_generator_step(m.rep),
                                   partially_dephased_generator_step(m.rep, p),
                                   coarse_grained_generator_step(m.rep, p)}) {
            const ConvergenceOrder o = trace_recovery(m.rep, s, psi, {1e-2, 1e-3, 1e-4});
            INFO(name << " " << to_string(s.kind));
            CHECK(o.slope >= 1.9);
        }
    }
}

TEST_CASE("generator steps") {
    const Model m = qubit_II();
    const SjedPartition p = build_sjeds(m.rep);
    const JointStep c = coarse_grained_generator_step(m.rep, p);
    CHECK(c.bin_dim == p.size() + 1);

    // singleton partition: Partial equals Dephased
    const SjedPartition single = make_partition(m.rep, {{0}, {1}, {2}});
    const JointStep a = partially_dephased_generator_step(m.rep, single);
    const JointStep b = dephased_generator_step(m.rep);
    CHECK(frobenius_distance(a.generator, b.generator) < 1e-13);

    // jump parts are completely positive
    for (const JointStep& s : {b, partially_dephased_generator_step(m.rep, p), c}) {
        SuperOp jump(s.dim());
        jump.terms.assign(s.generator.terms.begin() + 2, s.generator.terms.end());
        CHECK(min_eig(choi(jump)) > -1e-12);
    }
}

TEST_CASE("environment symmetry") {
    CHECK((environment_symmetry(Mat::Identity(2, 2)) - Mat::Identity(3, 3)).norm() < 1e-15);
    CHECK_THROWS_AS(environment_symmetry(2.0 * Mat::Identity(2, 2)), Error);
    std::mt19937_64 rng(3);
    const Mat U = random_unitary(3, rng);
    const Mat UE = environment_symmetry(U);
    CHECK(unitarity_defect(UE) < 1e-12);
    TimeBin bin{3};
    for (int j = 0; j < 3; ++j) {
        const Mat lhs = UE * bin.creation(j, 1.0).adjoint() * UE.adjoint();
        Mat rhs = Mat::Zero(4, 4);
        for (int k = 0; k < 3; ++k) rhs += U(j, k) * bin.creation(k, 1.0).adjoint();
        CHECK((lhs - rhs).norm() < 1e-12);
    }
    const Mat P = coarse_environment_symmetry({1, 0});
    CHECK(P(2, 1) == cplx(1.0));
    CHECK(P(1, 2) == cplx(1.0));
    CHECK_THROWS_AS(joint_symmetry_residual(dephased_generator_step(qubit_II().rep), pauli::z(), P), Error);
}

TEST_CASE("weakly symmetric qubit: every step symmetric") {
    const Model m = qubit_weak();
    const SjedPartition p = build_sjeds(m.rep);
    Mat X = Mat::Zero(2, 2);
    X(0, 0) = 1;
    X(1, 1) = -1;
    const Mat UE = environment_symmetry(X);
    CHECK(joint_symmetry_residual(rotating_frame_step(m.rep), pauli::z(), UE) <= 1e-10);
    CHECK(joint_symmetry_residual(dephased_generator_step(m.rep), pauli::z(), UE) <= 1e-10);
    CHECK(joint_symmetry_residual(partially_dephased_generator_step(m.rep, p), pauli::z(), UE) <= 1e-10);
    std::vector<int> id(p.size());
    std::iota(id.begin(), id.end(), 0);
    CHECK(joint_symmetry_residual(coarse_grained_generator_step(m.rep, p), pauli::z(),
                                  coarse_environment_symmetry(id)) <= 1e-10);
}

TEST_CASE("condition II representation: dephased fails, partial and coarse hold") {
    const Model m = qubit_II();
    const auto t = verify_joint(m.rep, Z(), build_sjeds(m.rep));
    REQUIRE(t.size() == 4);
    CHECK(t[0].certified);
    CHECK(t[0].residual <= 1e-10);
    CHECK_FALSE(t[1].certified);
    CHECK(t[1].residual > 1e-3);
    CHECK(t[1].candidates > 200);
    CHECK(t[2].certified);
    CHECK(t[2].residual <= 1e-10);
    CHECK(t[3].certified);
    CHECK(t[3].residual <= 1e-10);
}

TEST_CASE("condition I representation: only the rotating-frame Hamiltonian is symmetric") {
    const Model m = qubit_I();
    const auto t = verify_joint(m.rep, Z(), build_sjeds(m.rep));
    CHECK(t[0].certified);
    CHECK(t[0].residual <= 1e-10);
    for (int k = 1; k < 4; ++k) {
        CHECK_FALSE(t[k].certified);
        CHECK(t[k].residual > 1e-3);
    }
}

TEST_CASE("sufficiency and necessity across small models") {
    for (const std::string name : {"qubit-weak", "qubit-III", "qubit-II", "qubit-I", "qubit-nonunique",
                                   "twoqubit-weak", "twoqubit-III", "twoqubit-II", "twoqubit-I"}) {
        const Model m = example(name);
        const SymmetryOperator sym = SymmetryOperator::make(m.symmetries[0].U);
        const SjedPartition p = m.partition ? make_partition(m.rep, *m.partition) : build_sjeds(m.rep);
        const SymmetryReport r = check_symmetry(m.rep, sym, p);
        const auto t = verify_joint(m.rep, sym, p, 1e-9, 50);
        const bool holds[4] = {r.I.holds, r.III.holds, r.II.holds, r.II.holds};
        for (int k = 0; k < 4; ++k) {
            INFO(name << " " << to_string(t[k].kind));
            CHECK(t[k].certified == holds[k]);
            if (holds[k])
                CHECK(t[k].residual <= 1e-10);
            else
                CHECK(t[k].residual > 1e-3);
        }
    }
}

TEST_CASE("change of basis") {
    const Model a = qubit_weak();
    const SymmetryOperator sym = Z();
    const ConditionIII c = check_condition_III(a.rep, sym);
    REQUIRE(c.holds);

    const BasisChange same = change_of_basis_symmetry(a.rep, a.rep, Mat::Identity(2, 2), c.U, sym);
    CHECK((same.U_tilde - c.U).norm() < 1e-14);
    CHECK(same.residual <= 1e-10);

    Mat V(2, 2);
    V << 1, 1, 1, -1;
    V /= std::sqrt(2.0);
    Representation b = a.rep;
    b.jumps = {(a.rep.jumps[0] + a.rep.jumps[1]) / std::sqrt(2.0), (a.rep.jumps[0] - a.rep.jumps[1]) / std::sqrt(2.0)};
    const BasisChange sw = change_of_basis_symmetry(a.rep, b, V, c.U, sym);
    Mat swap = Mat::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1;
    CHECK((sw.U_tilde - swap).norm() < 1e-12);
    CHECK(sw.residual <= 1e-10);
    const ConditionIII cb = check_condition_III(b, sym);
    CHECK(cb.pi == std::vector<int>{1, 0});

    // duplicate one jump, split by sqrt 2
    Mat T = Mat::Zero(3, 2);
    T(0, 0) = T(1, 0) = 1 / std::sqrt(2.0);
    T(2, 1) = 1;
    Representation d = a.rep;
    d.jumps = {a.rep.jumps[0] / std::sqrt(2.0), a.rep.jumps[0] / std::sqrt(2.0), a.rep.jumps[1]};
    const BasisChange tall = change_of_basis_symmetry(a.rep, d, T, c.U, sym);
    CHECK(unitarity_defect(tall.U_tilde) < 1e-10);
    CHECK(tall.residual <= 1e-10);
    CHECK_THROWS_AS(change_of_basis_symmetry(a.rep, d, V, c.U, sym), Error);
}
