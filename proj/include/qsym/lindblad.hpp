#pragma once

#include <string>
#include <vector>

#include "qsym/superop.hpp"

namespace qsym {

struct Representation {
    int dim = 0;
    Mat H;
    std::vector<Mat> jumps;
    std::vector<std::string> labels;

    // Validates shapes, Hermiticity and nonzero jumps; fills default labels J1..Jd.
    static Representation make(const Mat& H, const std::vector<Mat>& jumps,
                               std::vector<std::string> labels = {}, double tol = 1e-9);
    int num_jumps() const { return static_cast<int>(jumps.size()); }
};

// ||H|| + sum ||J||^2: the reference size for relative tolerances.
double generator_scale(const Representation& rep);

Mat effective_hamiltonian(const Representation& rep);
Mat apply_master_operator(const Representation& rep, const Mat& rho);
Mat apply_adjoint_master_operator(const Representation& rep, const Mat& F);

SuperOp master_superop(const Representation& rep);
SuperOp jump_superop(const Representation& rep);  // rho -> sum J rho J^dag

Mat liouville_matrix(const Representation& rep);
Mat choi_matrix(const Representation& rep);

Representation traceless_representation(const Representation& rep);

// Image of the representation under rho -> U rho U^dag.
Representation transform_representation(const Representation& rep, const Mat& U);

Mat evolve_density(const Representation& rep, const Mat& rho0, double t);

bool representations_equal(const Representation& a, const Representation& b, double tol = 1e-9);
double liouville_distance(const Representation& a, const Representation& b);

struct RepresentationRelation {
    Mat V;              // jumps of b (traceless) = V * jumps of a (traceless)
    bool unique = true;  // false when the jumps of a are linearly dependent
    double residual = 0.0;
};

// Isometry relating the traceless jumps of two representations of the same master operator.
RepresentationRelation relate_representations(const Representation& a, const Representation& b, double tol = 1e-9);

// Least-norm X with T_j ~ sum_k X_jk J_k, plus a relative residual.
struct MixingSolution {
    Mat X;
    double residual = 0.0;
};
MixingSolution solve_mixing_matrix(const std::vector<Mat>& jumps, const std::vector<Mat>& transformed,
                                   double tol = 1e-10);

// Columns are vectors n with sum_k n_k J_k = 0.
Mat jump_null_space(const std::vector<Mat>& jumps, double tol = 1e-9);

// Hilbert-Schmidt inner product Tr(A^dag B).
inline cplx hs(const Mat& A, const Mat& B) { return (A.adjoint() * B).trace(); }

}  // namespace qsym
