#pragma once

#include <utility>
#include <vector>

#include "qsym/linalg.hpp"

namespace qsym {

// rho -> c * A rho B
struct SuperTerm {
    cplx c;
    Mat A;
    Mat B;
};

// Superoperator kept as a sum of sandwich terms. Dense Liouville and Choi
// matrices are only formed on request; norms and distances work on the factors,
// so d_s = 81 is fine.
struct SuperOp {
    int dim = 0;
    std::vector<SuperTerm> terms;

    SuperOp() = default;
    explicit SuperOp(int d) : dim(d) {}

    void add(cplx c, const Mat& A, const Mat& B);
    Mat apply(const Mat& rho) const;
    SuperOp scaled(cplx s) const;
    SuperOp adjoint() const;  // Hilbert-Schmidt adjoint
};

SuperOp operator+(const SuperOp& a, const SuperOp& b);
SuperOp operator-(const SuperOp& a, const SuperOp& b);

SuperOp identity_superop(int d);
SuperOp unitary_superop(const Mat& U);  // rho -> U rho U^dag
SuperOp sandwich_superop(const Mat& J);  // rho -> J rho J^dag

// U o Phi o U^dag: each term (c, A, B) -> (c, U A U^dag, U B U^dag).
SuperOp conjugate(const SuperOp& phi, const Mat& U);

// Dense forms (row stacking). Throws ShapeError above dim 64.
Mat liouville(const SuperOp& phi);
Mat choi(const SuperOp& phi);
Mat choi_from_liouville(const Mat& L, int d);
Mat liouville_from_choi(const Mat& C, int d);

// Frobenius norm of the Liouville (equivalently Choi) matrix, via QR of the factors.
double frobenius_norm(const SuperOp& phi);
double frobenius_distance(const SuperOp& a, const SuperOp& b);

struct BlockMass {
    double delta;  // phase-difference label in (-pi, pi]
    double mass;   // squared Frobenius norm
};

// Mass per phase-difference class Delta = delta_row - delta_col in the eigenbasis of U.
std::vector<BlockMass> block_support(const SuperOp& phi, const UnitaryEigen& sym, double tol = 1e-8);
std::vector<BlockMass> block_support_dense(const Mat& L, const UnitaryEigen& sym, double tol = 1e-8);

double off_block_fraction(const std::vector<BlockMass>& blocks, double tol = 1e-8);
double block_mass_at(const std::vector<BlockMass>& blocks, double delta, double tol = 1e-8);

}  // namespace qsym
