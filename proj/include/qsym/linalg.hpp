#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qsym/error.hpp"

namespace qsym {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

struct HermitianEigen {
    RVec values;  // ascending
    Mat vectors;  // columns
};

struct UnitaryEigen {
    RVec phases;  // in [0, 2pi), ascending
    Mat vectors;
};

// Cyclic complex Jacobi. Throws NotHermitian / NoConvergence.
HermitianEigen hermitian_eigen(const Mat& A, double tol = 1e-12);

// Joint diagonalization of (U+U^dag)/2 and (U-U^dag)/2i.
UnitaryEigen unitary_eigen(const Mat& U, double tol = 1e-10);

// Orthonormal basis of ker M. Rank counts singular values above tol * sigma_max.
Mat null_space(const Mat& M, double tol = 1e-9);

// Scaling and squaring with a Pade-13 core.
Mat expm(const Mat& M);

bool is_isometry(const Mat& V, double tol = 1e-9);

// Column basis of the range of M (left singular vectors above tol * sigma_max).
Mat range_basis(const Mat& M, double tol = 1e-9);

// Moore-Penrose pseudo-inverse of a Hermitian positive semidefinite matrix.
Mat psd_pinv(const Mat& G, double tol = 1e-10);

Mat kron(const Mat& A, const Mat& B);
Mat identity(int d);

// Row stacking: vec(A)[m*d + n] = A(m, n).
Vec vec_rows(const Mat& A);
Mat unvec_rows(const Vec& v, int rows, int cols);

// Make the first component with modulus above eps of each column real positive.
void fix_column_phases(Mat& V, double eps = 1e-10);

double unitarity_defect(const Mat& U);
double hermiticity_defect(const Mat& A);

// Map an angle into [0, 2pi); values within eps of 2pi become 0.
double wrap_phase(double phi, double eps = 1e-11);

// Haar-ish random objects used by tests and necessity scans.
Mat random_unitary(int d, std::mt19937_64& rng);
Mat random_hermitian(int d, std::mt19937_64& rng);
Mat random_matrix(int rows, int cols, std::mt19937_64& rng);
Vec random_state(int d, std::mt19937_64& rng);

namespace pauli {
Mat x();
Mat y();
Mat z();
}  // namespace pauli

// Smallest n <= cap with U^n proportional to identity, or 0 if none.
int unitary_order(const Mat& U, int cap = 64, double tol = 1e-9);

}  // namespace qsym
