#include "qsym/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace qsym {

Representation Representation::make(const Mat& H, const std::vector<Mat>& jumps, std::vector<std::string> labels,
                                     double tol) {
    if (H.rows() != H.cols()) throw Error(ErrorKind::ShapeError, "Hamiltonian not square");
    const int d = static_cast<int>(H.rows());
    if (hermiticity_defect(H) > tol * std::max(H.norm(), 1.0)) throw Error(ErrorKind::NotHermitian, "Hamiltonian");
    for (size_t j = 0; j < jumps.size(); ++j) {
        if (jumps[j].rows() != d || jumps[j].cols() != d)
            throw Error(ErrorKind::ShapeError, "jump " + std::to_string(j + 1) + " has wrong shape");
        if (jumps[j].norm() == 0.0) throw Error(ErrorKind::ZeroJump, "jump " + std::to_string(j + 1) + " is zero");
    }
    if (labels.empty())
        for (size_t j = 0; j < jumps.size(); ++j) labels.push_back("J" + std::to_string(j + 1));
    if (labels.size() != jumps.size()) throw Error(ErrorKind::SizeMismatch, "label count differs from jump count");
    Representation r;
    r.dim = d;
    r.H = 0.5 * (H + H.adjoint());
    r.jumps = jumps;
    r.labels = std::move(labels);
    return r;
}

double generator_scale(const Representation& rep) {
    double s = rep.H.norm();
    for (const auto& J : rep.jumps) s += J.squaredNorm();
    return s;
}

Mat effective_hamiltonian(const Representation& rep) {
    Mat Heff = rep.H.cast<cplx>();
    for (const auto& J : rep.jumps) Heff -= 0.5 * kI * (J.adjoint() * J);
    return Heff;
}

Mat apply_master_operator(const Representation& rep, const Mat& rho) {
    if (rho.rows() != rep.dim || rho.cols() != rep.dim) throw Error(ErrorKind::ShapeError, "density shape");
    Mat out = -kI * (rep.H * rho - rho * rep.H);
    for (const auto& J : rep.jumps) {
        const Mat JdJ = J.adjoint() * J;
        out += J * rho * J.adjoint() - 0.5 * (JdJ * rho + rho * JdJ);
    }
    return out;
}

Mat apply_adjoint_master_operator(const Representation& rep, const Mat& F) {
    if (F.rows() != rep.dim || F.cols() != rep.dim) throw Error(ErrorKind::ShapeError, "observable shape");
    Mat out = kI * (rep.H * F - F * rep.H);
    for (const auto& J : rep.jumps) {
        const Mat JdJ = J.adjoint() * J;
        out += J.adjoint() * F * J - 0.5 * (JdJ * F + F * JdJ);
    }
    return out;
}

SuperOp jump_superop(const Representation& rep) {
    SuperOp s(rep.dim);
    for (const auto& J : rep.jumps) s.add(1.0, J, J.adjoint());
    return s;
}

SuperOp master_superop(const Representation& rep) {
    const int d = rep.dim;
    const Mat Heff = effective_hamiltonian(rep);
    const Mat I = Mat::Identity(d, d);
    SuperOp s(d);
    s.add(1.0, -kI * Heff, I);
    s.add(1.0, I, kI * Heff.adjoint());
    for (const auto& J : rep.jumps) s.add(1.0, J, J.adjoint());
    return s;
}

Mat liouville_matrix(const Representation& rep) { return liouville(master_superop(rep)); }
Mat choi_matrix(const Representation& rep) { return choi(master_superop(rep)); }

Representation traceless_representation(const Representation& rep) {
    const int d = rep.dim;
    Representation out = rep;
    Mat Hp = rep.H;
    for (size_t j = 0; j < rep.jumps.size(); ++j) {
        const Mat& J = rep.jumps[j];
        const cplx tr = J.trace();
        Hp += (kI / (2.0 * d)) * (J * std::conj(tr) - J.adjoint() * tr);
        out.jumps[j] = J - (tr / double(d)) * Mat::Identity(d, d);
    }
    out.H = 0.5 * (Hp + Hp.adjoint());
    return out;
}

Representation transform_representation(const Representation& rep, const Mat& U) {
    Representation out = rep;
    const Mat Ud = U.adjoint();
    out.H = U * rep.H * Ud;
    out.H = (0.5 * (out.H + out.H.adjoint())).eval();
    for (auto& J : out.jumps) J = U * J * Ud;
    return out;
}

Mat evolve_density(const Representation& rep, const Mat& rho0, double t) {
    if (t < 0) throw Error(ErrorKind::NegativeTime, "evolve_density: t < 0");
    if (rho0.rows() != rep.dim || rho0.cols() != rep.dim) throw Error(ErrorKind::ShapeError, "density shape");
    if (t == 0) return rho0;
    const Mat L = liouville_matrix(rep);
    const Vec v = expm(t * L) * vec_rows(rho0);
    Mat rho = unvec_rows(v, rep.dim, rep.dim);
    return 0.5 * (rho + rho.adjoint());
}

double liouville_distance(const Representation& a, const Representation& b) {
    if (a.dim != b.dim) throw Error(ErrorKind::ShapeError, "representations act on different dimensions");
    return frobenius_distance(master_superop(a), master_superop(b));
}

bool representations_equal(const Representation& a, const Representation& b, double tol) {
    const double dist = liouville_distance(a, b);
    const double ref = std::max(frobenius_norm(master_superop(a)), frobenius_norm(master_superop(b)));
    return dist <= tol * ref;
}

Mat jump_null_space(const std::vector<Mat>& jumps, double tol) {
    if (jumps.empty()) return Mat(0, 0);
    const int d2 = static_cast<int>(jumps[0].size());
    Mat M(d2, jumps.size());
    for (size_t k = 0; k < jumps.size(); ++k) M.col(k) = vec_rows(jumps[k]);
    if (M.norm() == 0.0) return Mat::Identity(jumps.size(), jumps.size());
    return null_space(M, tol);
}

MixingSolution solve_mixing_matrix(const std::vector<Mat>& jumps, const std::vector<Mat>& transformed, double tol) {
    const int d = static_cast<int>(jumps.size());
    const int dt = static_cast<int>(transformed.size());
    MixingSolution out;
    out.X = Mat::Zero(dt, d);
    if (d == 0 || dt == 0) {
        double tn = 0.0;
        for (const auto& T : transformed) tn += T.squaredNorm();
        out.residual = tn > 0 ? 1.0 : 0.0;
        return out;
    }
    const int d2 = static_cast<int>(jumps[0].size());
    Mat M(d2, d), T(d2, dt);
    for (int k = 0; k < d; ++k) M.col(k) = vec_rows(jumps[k]);
    for (int j = 0; j < dt; ++j) T.col(j) = vec_rows(transformed[j]);
    // Gram pseudo-inverse G^+ M^dag T computed through the SVD of M, which has the
    // same least-norm solution without squaring the condition number.
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(std::max(tol, 1e-14));
    const Mat coeffs = svd.solve(T);  // d x dt
    out.X = coeffs.transpose();
    const double ref = std::max({M.norm(), T.norm(), 1e-300});
    out.residual = (T - M * coeffs).norm() / ref;
    return out;
}

RepresentationRelation relate_representations(const Representation& a, const Representation& b, double tol) {
    if (a.dim != b.dim) throw Error(ErrorKind::ShapeError, "representations act on different dimensions");
    if (b.num_jumps() < a.num_jumps())
        throw Error(ErrorKind::ShapeError, "relate_representations expects the second representation to have at least as many jumps");
    if (!representations_equal(a, b, tol)) throw Error(ErrorKind::NotSame, "Liouville matrices differ");
    const Representation ta = traceless_representation(a);
    const Representation tb = traceless_representation(b);
    MixingSolution sol = solve_mixing_matrix(ta.jumps, tb.jumps, tol);
    RepresentationRelation rel;
    rel.V = sol.X;
    const Mat N = jump_null_space(ta.jumps, tol);
    const int nnull = static_cast<int>(N.cols());
    if (nnull > 0) {
        rel.unique = false;
        const Mat W = null_space(sol.X.adjoint(), tol);
        if (W.cols() < nnull) throw Error(ErrorKind::NotSame, "no isometric completion");
        rel.V += W.leftCols(nnull) * N.transpose();
    }
    double res = 0.0, ref = 0.0;
    for (int j = 0; j < b.num_jumps(); ++j) {
        Mat acc = Mat::Zero(a.dim, a.dim);
        for (int k = 0; k < a.num_jumps(); ++k) acc += rel.V(j, k) * ta.jumps[k];
        res += (acc - tb.jumps[j]).squaredNorm();
        ref += tb.jumps[j].squaredNorm();
    }
    rel.residual = std::sqrt(res / std::max(ref, 1e-300));
    if (unitarity_defect(rel.V) > 1e-7) throw Error(ErrorKind::NotSame, "relating matrix is not an isometry");
    return rel;
}

}  // namespace qsym
