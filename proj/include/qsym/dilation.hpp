#pragma once

#include <vector>

#include "qsym/symmetry.hpp"

namespace qsym {

enum class StepKind { Unitary, Dephased, Partial, Coarse };

const char* to_string(StepKind k);

// One time bin attached to the system (system is the left tensor factor). Bin basis
// |vac>, |1>, ..., |n>; creation dB_j^dag = sqrt(dt) |j><vac|.
struct TimeBin {
    int quanta = 0;
    int dim() const { return quanta + 1; }
    Mat creation(int j, double dt) const;  // dB_j^dag
    Mat vacuum_projector() const;
};

// Steps are stored as coefficients of powers of dt so that symmetry residuals carry
// no discretisation error.
struct JointStep {
    StepKind kind = StepKind::Unitary;
    int sys_dim = 0, bin_dim = 0;
    Mat h_dt, h_sqrt;    // Unitary: dH = dt * h_dt + sqrt(dt) * h_sqrt
    SuperOp generator;   // generator kinds: step = dt * generator

    int dim() const { return sys_dim * bin_dim; }
    Mat hamiltonian(double dt) const;
};

JointStep stochastic_hamiltonian_step(const Representation& rep);
JointStep rotating_frame_step(const Representation& rep);  // traceless representation
JointStep dephased_generator_step(const Representation& rep);
JointStep partially_dephased_generator_step(const Representation& rep, const SjedPartition& partition);
JointStep coarse_grained_generator_step(const Representation& rep, const SjedPartition& partition);

// exp(-i dQ) on the bin, dQ = (i/d_s) sum_j [dB_j Tr(J_j^dag) - dB_j^dag Tr(J_j)].
Mat displacement_step(const Representation& rep, double dt);

struct ConvergenceOrder {
    std::vector<double> dts, residuals;
    double slope = 0.0;
    std::vector<double> operator_residuals;  // || D e^{-i dH} - e^{-i dH'} D || on the full joint space
    double operator_slope = 0.0;
};

// Residual || (D e^{-i dH} - e^{-i dH'}) (1 x |vac>) || against dt.
ConvergenceOrder rotating_frame_convergence(const Representation& rep, const std::vector<double>& dts);

// Tr_E[step(psi x |vac><vac|)] - psi - L(psi) dt against dt, for the given step.
ConvergenceOrder trace_recovery(const Representation& rep, const JointStep& step, const Mat& psi,
                                const std::vector<double>& dts);

// U_E |vac> = |vac>, U_E |j> = sum_k conj(U_jk) |k>.
Mat environment_symmetry(const Mat& U);
// U_E^C |vac> = |vac>, U_E^C |a> = |pi_c(a)>.
Mat coarse_environment_symmetry(const std::vector<int>& pi_c);

// || W step W^dag - step || / || step || with W = U x U_E.
double joint_symmetry_residual(const JointStep& step, const Mat& U, const Mat& UE);

struct NecessityScan {
    double min_residual = 0.0;
    int candidates = 0;
};

// Minimum residual over permutations (with phases on a quarter-turn grid), block
// unitaries (Partial), and random vacuum-fixing unitaries.
NecessityScan necessity_scan(const JointStep& step, const Mat& U, const SjedPartition* partition,
                             int random_candidates = 200, std::uint64_t seed = 17);

struct BasisChange {
    Mat U_tilde;
    double residual = 0.0;  // rotating-frame step of b under (U, U_E(U_tilde))
};

// b's traceless jumps = V a's traceless jumps; U_a is a's unitary certificate.
BasisChange change_of_basis_symmetry(const Representation& a, const Representation& b, const Mat& V,
                                     const Mat& U_a, const SymmetryOperator& sym, double tol = 1e-9);

struct JointResidual {
    StepKind kind = StepKind::Unitary;
    bool certified = false;  // residual from the condition's certificate, otherwise a candidate scan minimum
    double residual = 0.0;
    int candidates = 0;
};

// dH', dL, dL^P, dL^C residuals; certified rows use the U-matrix of Condition I, III, II and pi_c.
std::vector<JointResidual> verify_joint(const Representation& rep, const SymmetryOperator& sym,
                                        const SjedPartition& partition, double tol = 1e-9,
                                        int random_candidates = 200);

}  // namespace qsym
