#include "qsym/superop.hpp"

#include <algorithm>
#include <cmath>

namespace qsym {

void SuperOp::add(cplx c, const Mat& A, const Mat& B) {
    if (A.rows() != dim || A.cols() != dim || B.rows() != dim || B.cols() != dim)
        throw Error(ErrorKind::ShapeError, "SuperOp::add: operator dimension mismatch");
    terms.push_back({c, A, B});
}

Mat SuperOp::apply(const Mat& rho) const {
    if (rho.rows() != dim || rho.cols() != dim) throw Error(ErrorKind::ShapeError, "SuperOp::apply: bad shape");
    Mat out = Mat::Zero(dim, dim);
    for (const auto& t : terms) out.noalias() += t.c * (t.A * rho * t.B);
    return out;
}

SuperOp SuperOp::scaled(cplx s) const {
    SuperOp out = *this;
    for (auto& t : out.terms) t.c *= s;
    return out;
}

SuperOp SuperOp::adjoint() const {
    SuperOp out(dim);
    for (const auto& t : terms) out.terms.push_back({std::conj(t.c), t.A.adjoint(), t.B.adjoint()});
    return out;
}

SuperOp operator+(const SuperOp& a, const SuperOp& b) {
    if (a.dim != b.dim) throw Error(ErrorKind::ShapeError, "SuperOp sum: dimension mismatch");
    SuperOp out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

SuperOp operator-(const SuperOp& a, const SuperOp& b) { return a + b.scaled(-1.0); }

SuperOp identity_superop(int d) {
    SuperOp s(d);
    s.add(1.0, Mat::Identity(d, d), Mat::Identity(d, d));
    return s;
}

SuperOp unitary_superop(const Mat& U) {
    SuperOp s(static_cast<int>(U.rows()));
    s.add(1.0, U, U.adjoint());
    return s;
}

SuperOp sandwich_superop(const Mat& J) {
    SuperOp s(static_cast<int>(J.rows()));
    s.add(1.0, J, J.adjoint());
    return s;
}

SuperOp conjugate(const SuperOp& phi, const Mat& U) {
    SuperOp out(phi.dim);
    const Mat Ud = U.adjoint();
    for (const auto& t : phi.terms) out.terms.push_back({t.c, U * t.A * Ud, U * t.B * Ud});
    return out;
}

Mat liouville(const SuperOp& phi) {
    if (phi.dim > 64) throw Error(ErrorKind::ShapeError, "liouville: dense form limited to dimension 64");
    const int d = phi.dim;
    Mat L = Mat::Zero(d * d, d * d);
    for (const auto& t : phi.terms) L += t.c * kron(t.A, t.B.transpose());
    return L;
}

Mat choi_from_liouville(const Mat& L, int d) {
    Mat C(d * d, d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) C(m * d + n, k * d + l) = L(m * d + k, n * d + l);
    return C;
}

Mat liouville_from_choi(const Mat& C, int d) {
    Mat L(d * d, d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) L(m * d + k, n * d + l) = C(m * d + n, k * d + l);
    return L;
}

Mat choi(const SuperOp& phi) {
    if (phi.dim > 64) throw Error(ErrorKind::ShapeError, "choi: dense form limited to dimension 64");
    const int d = phi.dim;
    Mat C = Mat::Zero(d * d, d * d);
    for (const auto& t : phi.terms) C += t.c * vec_rows(t.A) * vec_rows(Mat(t.B.transpose())).transpose();
    return C;
}

namespace {

// Upper-triangular factor R of the thin QR of M (rows x k), padded to k x k.
Mat r_factor(const Mat& M) {
    const int k = static_cast<int>(M.cols());
    Mat R = Mat::Zero(k, k);
    if (M.rows() == 0 || k == 0) return R;
    Eigen::HouseholderQR<Mat> qr(M);
    const int r = static_cast<int>(std::min<Eigen::Index>(M.rows(), k));
    R.topRows(r) = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    return R;
}

// ||X Y^T||_F^2 without forming the product.
double factored_mass(const Mat& X, const Mat& Y) {
    if (X.cols() == 0) return 0.0;
    const Mat RX = r_factor(X);
    const Mat RY = r_factor(Y);
    return (RX * RY.transpose()).squaredNorm();
}

struct PhaseClasses {
    std::vector<cplx> reps;
    double tol;
    int find_or_add(cplx z) {
        for (size_t i = 0; i < reps.size(); ++i)
            if (std::abs(reps[i] - z) < tol) return static_cast<int>(i);
        reps.push_back(z);
        return static_cast<int>(reps.size()) - 1;
    }
};

std::vector<BlockMass> collect(const std::vector<std::pair<cplx, double>>& entries, double tol) {
    PhaseClasses cls{{}, tol};
    std::vector<double> mass;
    for (const auto& [z, m] : entries) {
        int i = cls.find_or_add(z);
        if (i >= static_cast<int>(mass.size())) mass.push_back(0.0);
        mass[i] += m;
    }
    std::vector<BlockMass> out;
    for (size_t i = 0; i < mass.size(); ++i) {
        double delta = std::arg(cls.reps[i]);
        if (delta <= -kPi + 1e-12) delta = kPi;
        out.push_back({delta, mass[i]});
    }
    std::sort(out.begin(), out.end(), [](const BlockMass& a, const BlockMass& b) { return a.delta < b.delta; });
    return out;
}

}  // namespace

double frobenius_norm(const SuperOp& phi) {
    const int T = static_cast<int>(phi.terms.size());
    if (T == 0) return 0.0;
    const int d2 = phi.dim * phi.dim;
    Mat P(d2, T), Q(d2, T);
    for (int t = 0; t < T; ++t) {
        P.col(t) = phi.terms[t].c * vec_rows(phi.terms[t].A);
        Q.col(t) = vec_rows(Mat(phi.terms[t].B.transpose()));
    }
    return std::sqrt(factored_mass(P, Q));
}

double frobenius_distance(const SuperOp& a, const SuperOp& b) { return frobenius_norm(a - b); }

std::vector<BlockMass> block_support(const SuperOp& phi, const UnitaryEigen& sym, double tol) {
    const int d = phi.dim;
    const Mat& V = sym.vectors;
    const int T = static_cast<int>(phi.terms.size());
    std::vector<Mat> At, Bt;
    for (const auto& t : phi.terms) {
        At.push_back(V.adjoint() * t.A * V);
        Bt.push_back(V.adjoint() * t.B * V);
    }
    // group index pairs (i, j) by e^{i(phi_i - phi_j)}
    PhaseClasses cls{{}, tol};
    std::vector<std::vector<std::pair<int, int>>> members;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            int c = cls.find_or_add(std::polar(1.0, sym.phases(i) - sym.phases(j)));
            if (c >= static_cast<int>(members.size())) members.emplace_back();
            members[c].push_back({i, j});
        }
    const int K = static_cast<int>(members.size());
    std::vector<Mat> X(K), Y(K);
    for (int c = 0; c < K; ++c) {
        const int n = static_cast<int>(members[c].size());
        X[c].resize(n, T);
        Y[c].resize(n, T);
        for (int r = 0; r < n; ++r) {
            const auto [i, j] = members[c][r];
            for (int t = 0; t < T; ++t) {
                X[c](r, t) = phi.terms[t].c * At[t](i, j);  // (m, k) pairs
                Y[c](r, t) = Bt[t](i, j);                   // (l, n) pairs
            }
        }
    }
    std::vector<std::pair<cplx, double>> entries;
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) entries.push_back({cls.reps[a] * cls.reps[b], factored_mass(X[a], Y[b])});
    return collect(entries, tol);
}

std::vector<BlockMass> block_support_dense(const Mat& L, const UnitaryEigen& sym, double tol) {
    const Mat& V = sym.vectors;
    const int d = static_cast<int>(V.rows());
    const Mat W = kron(V, V.conjugate());
    const Mat Lt = W.adjoint() * L * W;
    std::vector<std::pair<cplx, double>> entries;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const double ph = sym.phases(m) - sym.phases(n) - sym.phases(k) + sym.phases(l);
                    entries.push_back({std::polar(1.0, ph), std::norm(Lt(m * d + n, k * d + l))});
                }
    return collect(entries, tol);
}

double off_block_fraction(const std::vector<BlockMass>& blocks, double tol) {
    double total = 0.0, off = 0.0;
    for (const auto& b : blocks) {
        total += b.mass;
        if (std::abs(b.delta) > tol) off += b.mass;
    }
    return total > 0 ? off / total : 0.0;
}

double block_mass_at(const std::vector<BlockMass>& blocks, double delta, double tol) {
    const cplx z = std::polar(1.0, delta);
    double m = 0.0;
    for (const auto& b : blocks)
        if (std::abs(std::polar(1.0, b.delta) - z) < tol) m += b.mass;
    return m;
}

}  // namespace qsym
