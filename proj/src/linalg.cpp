#include "qsym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsym {

namespace {

void require_square(const Mat& A, const char* who) {
    if (A.rows() != A.cols()) throw Error(ErrorKind::ShapeError, std::string(who) + ": matrix not square");
}

double one_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    return A.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

Mat identity(int d) { return Mat::Identity(d, d); }

double hermiticity_defect(const Mat& A) { return (A - A.adjoint()).norm(); }

double unitarity_defect(const Mat& U) {
    return (U.adjoint() * U - Mat::Identity(U.cols(), U.cols())).norm();
}

double wrap_phase(double phi, double eps) {
    double p = std::fmod(phi, 2 * kPi);
    if (p < 0) p += 2 * kPi;
    if (p > 2 * kPi - eps) p = 0.0;
    return p;
}

void fix_column_phases(Mat& V, double eps) {
    for (int j = 0; j < V.cols(); ++j) {
        double scale = V.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < V.rows(); ++i) {
            double a = std::abs(V(i, j));
            if (a > eps * std::max(scale, 1e-300)) {
                V.col(j) *= std::conj(V(i, j)) / a;
                V(i, j) = a;
                break;
            }
        }
    }
}

HermitianEigen hermitian_eigen(const Mat& A0, double tol) {
    require_square(A0, "hermitian_eigen");
    const int n = static_cast<int>(A0.rows());
    const double anorm = A0.norm();
    if (hermiticity_defect(A0) > tol * anorm) throw Error(ErrorKind::NotHermitian, "input is not Hermitian");

    Mat A = 0.5 * (A0 + A0.adjoint());
    const Mat Ah = A;
    Mat V = Mat::Identity(n, n);
    bool converged = n <= 1;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(A(p, q));
        if (std::sqrt(2 * off) <= 1e-15 * anorm || off == 0.0) {
            converged = true;
            break;
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx b = A(p, q);
                const double ab = std::abs(b);
                if (ab < 1e-300) continue;
                const cplx eith = b / ab;
                const cplx emith = std::conj(eith);
                const double tau = (A(q, q).real() - A(p, p).real()) / (2 * ab);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const cplx ap = A(k, p), aq = A(k, q);
                    A(k, p) = c * ap - s * emith * aq;
                    A(k, q) = s * ap + c * emith * aq;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx rp = A(p, k), rq = A(q, k);
                    A(p, k) = c * rp - s * eith * rq;
                    A(q, k) = s * rp + c * eith * rq;
                }
                A(p, q) = A(q, p) = 0.0;
                A(p, p) = A(p, p).real();
                A(q, q) = A(q, q).real();
                for (int k = 0; k < n; ++k) {
                    const cplx vp = V(k, p), vq = V(k, q);
                    V(k, p) = c * vp - s * emith * vq;
                    V(k, q) = s * vp + c * emith * vq;
                }
            }
        }
    }
    if (!converged) throw Error(ErrorKind::NoConvergence, "Jacobi sweep budget exhausted");

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return A(a, a).real() < A(b, b).real(); });
    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.values(i) = A(idx[i], idx[i]).real();
        out.vectors.col(i) = V.col(idx[i]);
    }
    fix_column_phases(out.vectors);

    const double res = (Ah * out.vectors - out.vectors * out.values.cast<cplx>().asDiagonal()).norm();
    if (res > 10 * std::max(tol, 1e-14) * std::max(anorm, 1e-300) && res > 1e-300)
        throw Error(ErrorKind::NoConvergence, "eigen residual above tolerance");
    return out;
}

UnitaryEigen unitary_eigen(const Mat& U, double tol) {
    require_square(U, "unitary_eigen");
    const int n = static_cast<int>(U.rows());
    if (unitarity_defect(U) > tol) throw Error(ErrorKind::NotUnitary, "input is not unitary");

    const Mat R = 0.5 * (U + U.adjoint());
    const Mat S = (U - U.adjoint()) / (2.0 * kI);
    HermitianEigen er = hermitian_eigen(R, 1e-12);
    Mat V = er.vectors;
    const double ctol = 1e-8;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && er.values(end) - er.values(end - 1) <= ctol) ++end;
        if (end - start > 1) {
            const Mat Vc = V.middleCols(start, end - start);
            Mat Sc = Vc.adjoint() * S * Vc;
            Sc = (0.5 * (Sc + Sc.adjoint())).eval();
            HermitianEigen es = hermitian_eigen(Sc, 1e-12);
            V.middleCols(start, end - start) = Vc * es.vectors;
        }
        start = end;
    }

    std::vector<double> ph(n);
    for (int i = 0; i < n; ++i) {
        const cplx z = V.col(i).dot(U * V.col(i));
        ph[i] = wrap_phase(std::arg(z));
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto key = [&](int i) { return std::llround(ph[i] * 1e9); };
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });

    UnitaryEigen out;
    out.phases.resize(n);
    out.vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.phases(i) = ph[idx[i]];
        out.vectors.col(i) = V.col(idx[i]);
    }
    fix_column_phases(out.vectors);

    Vec d(n);
    for (int i = 0; i < n; ++i) d(i) = std::polar(1.0, out.phases(i));
    const double res = (U * out.vectors - out.vectors * d.asDiagonal()).norm();
    if (res > 1e-8 * std::max(1.0, std::sqrt(double(n))))
        throw Error(ErrorKind::NoConvergence, "unitary eigendecomposition residual too large");
    return out;
}

Mat null_space(const Mat& M, double tol) {
    const int cols = static_cast<int>(M.cols());
    if (cols == 0) return Mat(0, 0);
    if (M.rows() == 0) return Mat::Identity(cols, cols);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * smax && s(i) > 0) ++rank;
    Mat N = svd.matrixV().rightCols(cols - rank);
    fix_column_phases(N);
    return N;
}

Mat range_basis(const Mat& M, double tol) {
    if (M.size() == 0) return Mat(M.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * smax && s(i) > 0) ++rank;
    return svd.matrixU().leftCols(rank);
}

Mat psd_pinv(const Mat& G, double tol) {
    const int n = static_cast<int>(G.rows());
    if (n == 0) return Mat(0, 0);
    Mat Gh = 0.5 * (G + G.adjoint());
    HermitianEigen e = hermitian_eigen(Gh, 1e-10);
    const double vmax = std::max(std::abs(e.values.minCoeff()), std::abs(e.values.maxCoeff()));
    Mat out = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (e.values(i) > tol * vmax && e.values(i) > 0)
            out += (1.0 / e.values(i)) * e.vectors.col(i) * e.vectors.col(i).adjoint();
    }
    return out;
}

namespace {

// Pade numerator/denominator coefficients from Higham (2005).
const double b3[] = {120, 60, 12, 1};
const double b5[] = {30240, 15120, 3360, 420, 30, 1};
const double b7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
const double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                     2162160.0,     110880.0,     3960.0,       90.0,        1.0};
const double b13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                      1187353796428800.0,  129060195264000.0,   10559470521600.0,
                      670442572800.0,      33522128640.0,       1323241920.0,
                      40840800.0,          960960.0,            16380.0,
                      182.0,               1.0};

Mat pade_low(const Mat& A, const double* b, int m) {
    const int n = static_cast<int>(A.rows());
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    Mat P = I;  // running even power
    Mat Uodd = b[1] * I;
    Mat Veven = b[0] * I;
    for (int k = 2; k <= m; k += 2) {
        P = P * A2;
        Uodd += b[k + 1] * P;
        Veven += b[k] * P;
    }
    const Mat Um = A * Uodd;
    return (Veven - Um).partialPivLu().solve(Veven + Um);
}

}  // namespace

Mat expm(const Mat& M) {
    require_square(M, "expm");
    const int n = static_cast<int>(M.rows());
    if (n == 0) return M;
    const double nrm = one_norm(M);
    if (nrm == 0.0) return Mat::Identity(n, n);
    if (nrm <= 1.495585217958292e-2) return pade_low(M, b3, 3);
    if (nrm <= 2.539398330063230e-1) return pade_low(M, b5, 5);
    if (nrm <= 9.504178996162932e-1) return pade_low(M, b7, 7);
    if (nrm <= 2.097847961257068) return pade_low(M, b9, 9);

    const double theta13 = 5.371920351148152;
    int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
    const Mat A = M / std::ldexp(1.0, s);
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A, A4 = A2 * A2, A6 = A4 * A2;
    const Mat Uin = A6 * (b13[13] * A6 + b13[11] * A4 + b13[9] * A2) + b13[7] * A6 + b13[5] * A4 +
                    b13[3] * A2 + b13[1] * I;
    const Mat Um = A * Uin;
    const Mat Vm = A6 * (b13[12] * A6 + b13[10] * A4 + b13[8] * A2) + b13[6] * A6 + b13[4] * A4 +
                   b13[2] * A2 + b13[0] * I;
    Mat R = (Vm - Um).partialPivLu().solve(Vm + Um);
    for (int i = 0; i < s; ++i) R = R * R;
    return R;
}

bool is_isometry(const Mat& V, double tol) {
    if (V.rows() < V.cols()) throw Error(ErrorKind::ShapeError, "is_isometry: rows < cols");
    return unitarity_defect(V) <= tol;
}

Mat kron(const Mat& A, const Mat& B) {
    Mat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Vec vec_rows(const Mat& A) {
    Vec v(A.size());
    for (int m = 0; m < A.rows(); ++m)
        for (int n = 0; n < A.cols(); ++n) v(m * A.cols() + n) = A(m, n);
    return v;
}

Mat unvec_rows(const Vec& v, int rows, int cols) {
    if (v.size() != rows * cols) throw Error(ErrorKind::ShapeError, "unvec_rows: size mismatch");
    Mat A(rows, cols);
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n) A(m, n) = v(m * cols + n);
    return A;
}

Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = cplx(g(rng), g(rng));
    return M;
}

Mat random_unitary(int d, std::mt19937_64& rng) {
    Mat Z = random_matrix(d, d, rng);
    Eigen::HouseholderQR<Mat> qr(Z);
    Mat Q = qr.householderQ() * Mat::Identity(d, d);
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const double a = std::abs(R(i, i));
        if (a > 0) Q.col(i) *= R(i, i) / a;
    }
    return Q;
}

Mat random_hermitian(int d, std::mt19937_64& rng) {
    Mat Z = random_matrix(d, d, rng);
    return 0.5 * (Z + Z.adjoint());
}

Vec random_state(int d, std::mt19937_64& rng) {
    Vec v = random_matrix(d, 1, rng).col(0);
    return v / v.norm();
}

int unitary_order(const Mat& U, int cap, double tol) {
    const int d = static_cast<int>(U.rows());
    if (d == 0) return 1;
    Mat P = Mat::Identity(d, d);
    for (int n = 1; n <= cap; ++n) {
        P = P * U;
        const cplx c = P.trace() / double(d);
        if (std::abs(std::abs(c) - 1.0) <= tol && (P - c * Mat::Identity(d, d)).norm() <= tol * std::sqrt(double(d)))
            return n;
    }
    return 0;
}

namespace pauli {
Mat x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Mat y() {
    Mat m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}
Mat z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

}  // namespace qsym
