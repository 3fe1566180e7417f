#include "qsym/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qsym {

const char* to_string(StepKind k) {
    switch (k) {
        case StepKind::Unitary: return "unitary";
        case StepKind::Dephased: return "dephased";
        case StepKind::Partial: return "partial";
        case StepKind::Coarse: return "coarse";
    }
    return "?";
}

Mat TimeBin::creation(int j, double dt) const {
    if (j < 0 || j >= quanta) throw Error(ErrorKind::IndexError, "quantum index out of range");
    Mat c = Mat::Zero(dim(), dim());
    c(j + 1, 0) = std::sqrt(dt);
    return c;
}

Mat TimeBin::vacuum_projector() const {
    Mat p = Mat::Zero(dim(), dim());
    p(0, 0) = 1;
    return p;
}

Mat JointStep::hamiltonian(double dt) const { return dt * h_dt + std::sqrt(dt) * h_sqrt; }

namespace {

Mat raise(int bin_dim, int slot) {
    Mat c = Mat::Zero(bin_dim, bin_dim);
    c(slot + 1, 0) = 1;
    return c;
}

SuperOp drift_part(const Representation& rep, int bin_dim) {
    const Mat Heff = effective_hamiltonian(rep);
    const Mat I = Mat::Identity(rep.dim * bin_dim, rep.dim * bin_dim);
    const Mat Ib = Mat::Identity(bin_dim, bin_dim);
    SuperOp s(rep.dim * bin_dim);
    s.add(1.0, kron(-kI * Heff, Ib), I);
    s.add(1.0, I, kron(kI * Heff.adjoint(), Ib));
    return s;
}

JointStep generator_step(StepKind kind, const Representation& rep, int bin_dim) {
    JointStep st;
    st.kind = kind;
    st.sys_dim = rep.dim;
    st.bin_dim = bin_dim;
    st.generator = drift_part(rep, bin_dim);
    return st;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(std::max(y[i], 1e-300));
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        num += dx * (std::log(std::max(y[i], 1e-300)) - my);
        den += dx * dx;
    }
    return den > 0 ? num / den : 0.0;
}

Mat partial_trace_env(const Mat& R, int ds, int db) {
    Mat out = Mat::Zero(ds, ds);
    for (int i = 0; i < ds; ++i)
        for (int k = 0; k < ds; ++k)
            for (int e = 0; e < db; ++e) out(i, k) += R(i * db + e, k * db + e);
    return out;
}

}  // namespace

JointStep stochastic_hamiltonian_step(const Representation& rep) {
    JointStep st;
    st.kind = StepKind::Unitary;
    st.sys_dim = rep.dim;
    st.bin_dim = rep.num_jumps() + 1;
    st.h_dt = kron(rep.H, Mat::Identity(st.bin_dim, st.bin_dim));
    st.h_sqrt = Mat::Zero(st.dim(), st.dim());
    for (int j = 0; j < rep.num_jumps(); ++j) {
        const Mat c = raise(st.bin_dim, j);
        st.h_sqrt += kI * (kron(rep.jumps[j], c) - kron(rep.jumps[j].adjoint(), c.adjoint()));
    }
    return st;
}

JointStep rotating_frame_step(const Representation& rep) {
    return stochastic_hamiltonian_step(traceless_representation(rep));
}

JointStep dephased_generator_step(const Representation& rep) {
    JointStep st = generator_step(StepKind::Dephased, rep, rep.num_jumps() + 1);
    for (int j = 0; j < rep.num_jumps(); ++j) {
        const Mat A = kron(rep.jumps[j], raise(st.bin_dim, j));
        st.generator.add(1.0, A, A.adjoint());
    }
    return st;
}

JointStep partially_dephased_generator_step(const Representation& rep, const SjedPartition& p) {
    JointStep st = generator_step(StepKind::Partial, rep, rep.num_jumps() + 1);
    for (const auto& s : p.sets) {
        Mat A = Mat::Zero(st.dim(), st.dim());
        for (int j : s.members) A += kron(rep.jumps[j], raise(st.bin_dim, j));
        st.generator.add(1.0, A, A.adjoint());
    }
    return st;
}

JointStep coarse_grained_generator_step(const Representation& rep, const SjedPartition& p) {
    JointStep st = generator_step(StepKind::Coarse, rep, p.size() + 1);
    for (int a = 0; a < p.size(); ++a)
        for (int j : p.sets[a].members) {
            const Mat A = kron(rep.jumps[j], raise(st.bin_dim, a));
            st.generator.add(1.0, A, A.adjoint());
        }
    return st;
}

Mat displacement_step(const Representation& rep, double dt) {
    if (dt < 0) throw Error(ErrorKind::NegativeTime, "dt must be non-negative");
    const int nb = rep.num_jumps() + 1;
    Mat dQ = Mat::Zero(nb, nb);
    for (int j = 0; j < rep.num_jumps(); ++j) {
        const Mat c = std::sqrt(dt) * raise(nb, j);
        const cplx tr = rep.jumps[j].trace();
        dQ += (kI / double(rep.dim)) * (c.adjoint() * std::conj(tr) - c * tr);
    }
    return expm(-kI * dQ);
}

ConvergenceOrder rotating_frame_convergence(const Representation& rep, const std::vector<double>& dts) {
    ConvergenceOrder out;
    const JointStep a = stochastic_hamiltonian_step(rep);
    const JointStep b = rotating_frame_step(rep);
    const Mat vac = kron(Mat::Identity(rep.dim, rep.dim), Mat::Identity(a.bin_dim, a.bin_dim).col(0));
    for (double dt : dts) {
        const Mat D = kron(Mat::Identity(rep.dim, rep.dim), displacement_step(rep, dt));
        const Mat E = expm(-kI * a.hamiltonian(dt));
        const Mat Ep = expm(-kI * b.hamiltonian(dt));
        out.dts.push_back(dt);
        out.residuals.push_back(((D * E - Ep) * vac).norm());
        out.operator_residuals.push_back((D * E - Ep * D).norm());
    }
    out.slope = fit_slope(out.dts, out.residuals);
    out.operator_slope = fit_slope(out.dts, out.operator_residuals);
    return out;
}

ConvergenceOrder trace_recovery(const Representation& rep, const JointStep& step, const Mat& psi,
                                const std::vector<double>& dts) {
    ConvergenceOrder out;
    const int db = step.bin_dim;
    const Mat R0 = kron(psi, TimeBin{db - 1}.vacuum_projector());
    const Mat Lpsi = apply_master_operator(rep, psi);
    for (double dt : dts) {
        Mat R;
        if (step.kind == StepKind::Unitary) {
            const Mat E = expm(-kI * step.hamiltonian(dt));
            R = E * R0 * E.adjoint();
        } else {
            R = R0;
            Mat term = R0;
            for (int n = 1; n < 60; ++n) {
                term = step.generator.apply(term) * (dt / n);
                R += term;
                if (term.norm() < 1e-18 * R0.norm()) break;
            }
        }
        out.dts.push_back(dt);
        out.residuals.push_back((partial_trace_env(R, step.sys_dim, db) - psi - dt * Lpsi).norm());
    }
    out.slope = fit_slope(out.dts, out.residuals);
    return out;
}

Mat environment_symmetry(const Mat& U) {
    if (U.rows() != U.cols() || unitarity_defect(U) > 1e-9)
        throw Error(ErrorKind::NotUnitary, "environment mixing matrix must be unitary");
    const int d = static_cast<int>(U.rows());
    Mat UE = Mat::Zero(d + 1, d + 1);
    UE(0, 0) = 1;
    // column j+1 is U_E|j> = sum_k conj(U_jk)|k>
    UE.bottomRightCorner(d, d) = U.conjugate().transpose();
    return UE;
}

Mat coarse_environment_symmetry(const std::vector<int>& pi_c) {
    const int n = static_cast<int>(pi_c.size());
    Mat UE = Mat::Zero(n + 1, n + 1);
    UE(0, 0) = 1;
    for (int a = 0; a < n; ++a) UE(pi_c[a] + 1, a + 1) = 1;
    return UE;
}

double joint_symmetry_residual(const JointStep& step, const Mat& U, const Mat& UE) {
    if (U.rows() != step.sys_dim || UE.rows() != step.bin_dim)
        throw Error(ErrorKind::ShapeError, "symmetry shapes do not match the joint step");
    const Mat W = kron(U, UE);
    if (step.kind == StepKind::Unitary) {
        const double ref = step.h_dt.norm() + step.h_sqrt.norm();
        const double r = (W * step.h_dt * W.adjoint() - step.h_dt).norm() +
                         (W * step.h_sqrt * W.adjoint() - step.h_sqrt).norm();
        return ref > 0 ? r / ref : r;
    }
    const double ref = frobenius_norm(step.generator);
    const double r = frobenius_distance(conjugate(step.generator, W), step.generator);
    return ref > 0 ? r / ref : r;
}

NecessityScan necessity_scan(const JointStep& step, const Mat& U, const SjedPartition* partition,
                             int random_candidates, std::uint64_t seed) {
    NecessityScan out;
    out.min_residual = std::numeric_limits<double>::infinity();
    const int n = step.bin_dim - 1;
    auto consider = [&](const Mat& excited) {
        Mat UE = Mat::Zero(n + 1, n + 1);
        UE(0, 0) = 1;
        UE.bottomRightCorner(n, n) = excited;
        out.min_residual = std::min(out.min_residual, joint_symmetry_residual(step, U, UE));
        ++out.candidates;
    };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    // phases only matter for the coherent kinds
    const bool phases = step.kind == StepKind::Unitary || step.kind == StepKind::Partial;
    if (n <= 6) {
        do {
            const int grid = phases && n <= 4 ? 4 : 1;
            int combos = 1;
            for (int k = 0; k < n; ++k) combos *= grid;
            for (int c = 0; c < combos; ++c) {
                Mat P = Mat::Zero(n, n);
                int code = c;
                for (int k = 0; k < n; ++k) {
                    P(perm[k], k) = std::polar(1.0, kPi / 2 * (code % grid));
                    code /= grid;
                }
                consider(P);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::mt19937_64 rng(seed);
    if (step.kind == StepKind::Partial && partition) {
        // block unitaries: random unitaries inside every SJED, composed with set permutations
        std::vector<int> sets(partition->size());
        std::iota(sets.begin(), sets.end(), 0);
        for (int rep = 0; rep < 20; ++rep) {
            Mat B = Mat::Zero(n, n);
            for (const auto& s : partition->sets) {
                const int m = static_cast<int>(s.members.size());
                const Mat w = random_unitary(m, rng);
                for (int i = 0; i < m; ++i)
                    for (int k = 0; k < m; ++k) B(s.members[i], s.members[k]) = w(i, k);
            }
            consider(B);
        }
    }
    for (int r = 0; r < random_candidates; ++r) consider(random_unitary(n, rng));
    return out;
}

BasisChange change_of_basis_symmetry(const Representation& a, const Representation& b, const Mat& V,
                                     const Mat& U_a, const SymmetryOperator& sym, double tol) {
    if (V.rows() != b.num_jumps() || V.cols() != a.num_jumps())
        throw Error(ErrorKind::ShapeError, "V must map the jumps of a to the jumps of b");
    BasisChange out;
    Mat X = V * U_a * V.adjoint();
    if (V.rows() == V.cols()) {
        out.U_tilde = X;
    } else {
        const Representation tb = traceless_representation(b);
        out.U_tilde = unitary_completion(X, tb, build_sjeds(b, tol), tol).U;
    }
    const JointStep step = rotating_frame_step(b);
    out.residual = joint_symmetry_residual(step, sym.U, environment_symmetry(out.U_tilde));
    return out;
}

std::vector<JointResidual> verify_joint(const Representation& rep, const SymmetryOperator& sym,
                                        const SjedPartition& partition, double tol, int random_candidates) {
    if (rep.dim * (rep.num_jumps() + 1) > 96)
        throw Error(ErrorKind::ShapeError, "joint verification limited to system x bin dimension 96");
    const SymmetryReport r = check_symmetry(rep, sym, partition, tol);
    std::vector<JointResidual> out;
    auto row = [&](const JointStep& step, bool ok, const Mat& UE, const SjedPartition* p) {
        JointResidual j;
        j.kind = step.kind;
        if (ok) {
            j.certified = true;
            j.residual = joint_symmetry_residual(step, sym.U, UE);
            j.candidates = 1;
        } else {
            const NecessityScan s = necessity_scan(step, sym.U, p, random_candidates);
            j.residual = s.min_residual;
            j.candidates = s.candidates;
        }
        out.push_back(j);
    };
    const Mat none;
    row(rotating_frame_step(rep), r.I.holds, r.I.holds ? environment_symmetry(r.I.U) : none, nullptr);
    row(dephased_generator_step(rep), r.III.holds, r.III.holds ? environment_symmetry(r.III.U) : none, nullptr);
    row(partially_dephased_generator_step(rep, partition), r.II.holds,
        r.II.holds ? environment_symmetry(r.II.U) : none, &partition);
    row(coarse_grained_generator_step(rep, partition), r.II.holds,
        r.II.holds ? coarse_environment_symmetry(r.II.pi_c) : none, nullptr);
    return out;
}

}  // namespace qsym
