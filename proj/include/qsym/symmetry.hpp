#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsym/sjed.hpp"

namespace qsym {

struct SymmetryOperator {
    Mat U;
    UnitaryEigen eig;  // U * eig.vectors = eig.vectors * diag(exp(i phases))
    int order = 0;     // smallest n <= 64 with U^n proportional to 1; 0 if unresolved

    static SymmetryOperator make(const Mat& U, double tol = 1e-10);
    int dim() const { return static_cast<int>(U.rows()); }
    Mat apply(const Mat& A) const { return U * A * U.adjoint(); }
};

struct ConditionI {
    bool holds = false;
    Mat X;  // U(J'_j) = sum_k X_jk J'_k on the traceless jumps
    Mat U;  // unitary certificate, empty if the completion failed
    double h_residual = 0.0, x_residual = 0.0, u_residual = 0.0;
    std::string note;
};

struct ConditionII {
    bool holds = false;
    std::vector<int> pi_c;  // set alpha -> set pi_c(alpha), U A_alpha U^dag = A_pi_c(alpha)
    double h_residual = 0.0, action_residual = 0.0;
    Mat U;                    // unitary from the block construction
    double block_residual = 0.0;  // mixing property of U restricted to SJED rows
};

struct ConditionIIR {
    bool holds = false;
    Mat X;  // block-structured, isometric blocks
    double x_residual = 0.0, isometry_residual = 0.0;
};

struct ConditionIII {
    bool holds = false;
    std::vector<int> pi;         // U(J_j) = exp(i phases_j) J_pi(j)
    std::vector<double> phases;  // in (-pi, pi]
    Mat U;                       // U_jk = exp(i phases_j) delta_{pi(j),k}
    bool ties = false;           // some jump matched more than one candidate
    int alternatives = 0;        // number of admissible permutations found (capped)
    double h_residual = 0.0, residual = 0.0;
};

struct SymmetryReport {
    std::string symmetry;
    ConditionI I;
    ConditionII II;
    ConditionIIR IIR;
    ConditionIII III;
    bool hierarchy_ok = true;
};

ConditionI check_condition_I(const Representation& rep, const SymmetryOperator& sym, double tol = 1e-9);
ConditionII check_condition_II(const Representation& rep, const SymmetryOperator& sym,
                               const SjedPartition& partition, double tol = 1e-9);
ConditionII check_condition_II(const Representation& rep, const SymmetryOperator& sym, double tol = 1e-9);
ConditionIIR check_condition_IIR(const Representation& rep, const SymmetryOperator& sym,
                                 const SjedPartition& partition, double tol = 1e-9);
ConditionIII check_condition_III(const Representation& rep, const SymmetryOperator& sym, double tol = 1e-9);

SymmetryReport check_symmetry(const Representation& rep, const SymmetryOperator& sym,
                              const std::optional<SjedPartition>& partition = std::nullopt, double tol = 1e-9);

struct Completion {
    Mat U;
    bool block_route = false;  // built from canonical SJED isometries
    std::vector<int> pi_c;     // set permutation detected by the block route
    double residual = 0.0;     // || U J - X J || / || J ||
};

// X relates the jumps of `rep` (raw or traceless) to their images. The partition
// must be built from the raw jumps with the same indexing.
Completion unitary_completion(const Mat& X, const Representation& rep, const SjedPartition& partition,
                              double tol = 1e-9);

// max over SJEDs and k of || sum_{j in S_a} conj(U_jk) U(J_j) - [k in S_pi_c(a)] J_k ||, relative.
double block_property_residual(const Mat& U, const Representation& rep, const SymmetryOperator& sym,
                               const SjedPartition& partition, const std::vector<int>& pi_c);

// Canonical SJED representation whose jumps are permuted (with phases) by the symmetry.
Representation lift_II_to_III(const Representation& rep, const SymmetryOperator& sym,
                              const SjedPartition& partition, double tol = 1e-9);

struct FourierResult {
    Representation rep;
    std::vector<double> eigenphases;  // U(J_l) = exp(i eigenphases_l) J_l
};

// Jump waves along every cycle of the condition-III permutation.
FourierResult fourier_symmetrize(const Representation& rep, const SymmetryOperator& sym,
                                 bool single_cycle_only = false, double tol = 1e-9);

// A^(k) = sum_j A_{pi_c^j(a0)} exp(-2 pi i k j / d_c); requires pi_c to be one cycle.
std::vector<SuperOp> wave_operators(const SjedPartition& partition, const std::vector<int>& pi_c);
std::vector<SuperOp> inverse_wave_operators(const std::vector<SuperOp>& waves, const std::vector<int>& pi_c);

// Tuples (a, b, c, d, ...) denote psi_ab psi_cd ... in the symmetry eigenbasis, with
// f(U psi U^dag) = lambda f(psi). Indices are 0-based.
std::vector<std::vector<int>> monomial_eigenfunctions(const SymmetryOperator& sym, int order, cplx lambda,
                                                     double tol = 1e-8);
cplx evaluate_monomial(const SymmetryOperator& sym, const std::vector<int>& tuple, const Mat& psi);

struct LinearEigenfunction {
    bool is_eigen = false;
    cplx lambda = 0.0;
    double residual = 0.0;
};

LinearEigenfunction check_linear_eigenfunction(const Representation& rep, const Mat& F, double tol = 1e-9,
                                               std::uint64_t seed = 1);

}  // namespace qsym
