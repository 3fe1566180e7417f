#include "qsym/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace qsym {

namespace {

double signed_phase(double phi) {
    double p = std::remainder(phi, 2 * kPi);
    if (p <= -kPi + 1e-12) p += 2 * kPi;
    return p;
}

double scale_of(const Representation& rep) {
    const double s = generator_scale(rep);
    return s > 0 ? s : 1.0;
}

double total_norm(const std::vector<Mat>& js) {
    double n = 0.0;
    for (const auto& J : js) n += J.squaredNorm();
    return std::sqrt(n);
}

std::vector<Mat> images(const SymmetryOperator& sym, const std::vector<Mat>& js) {
    std::vector<Mat> out;
    out.reserve(js.size());
    for (const auto& J : js) out.push_back(sym.apply(J));
    return out;
}

// sum_k M_jk J_k for each row j
std::vector<Mat> mix(const Mat& M, const std::vector<Mat>& js) {
    std::vector<Mat> out;
    const int d0 = js.empty() ? 0 : static_cast<int>(js[0].rows());
    for (int j = 0; j < M.rows(); ++j) {
        Mat acc = Mat::Zero(d0, d0);
        for (int k = 0; k < M.cols(); ++k)
            if (M(j, k) != cplx(0.0)) acc += M(j, k) * js[k];
        out.push_back(acc);
    }
    return out;
}

double relation_residual(const Mat& M, const std::vector<Mat>& js, const std::vector<Mat>& targets) {
    if (js.empty()) return 0.0;
    const auto got = mix(M, js);
    double r = 0.0;
    for (size_t j = 0; j < got.size(); ++j) r += (got[j] - targets[j]).squaredNorm();
    const double ref = std::max(total_norm(targets), total_norm(js));
    return ref > 0 ? std::sqrt(r) / ref : std::sqrt(r);
}

std::vector<std::vector<int>> cycles_of(const std::vector<int>& pi) {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(pi.size(), false);
    for (size_t s = 0; s < pi.size(); ++s) {
        if (seen[s]) continue;
        std::vector<int> c;
        for (int j = static_cast<int>(s); !seen[j]; j = pi[j]) {
            seen[j] = true;
            c.push_back(j);
        }
        out.push_back(c);
    }
    return out;
}

void require_dim(const Representation& rep, const SymmetryOperator& sym) {
    if (rep.dim != sym.dim())
        throw Error(ErrorKind::DimensionMismatch, "symmetry acts on dimension " + std::to_string(sym.dim()) +
                                                      ", representation on " + std::to_string(rep.dim));
}

struct BlockLayout {
    Mat V;                               // d x D, block diagonal canonical isometry
    std::vector<std::vector<int>> cols;  // canonical indices per set
};

BlockLayout block_layout(const Representation& rep, const SjedPartition& p, double tol) {
    const CanonicalSjed can = canonical_sjed_representation(rep, p, tol);
    BlockLayout b;
    const int d = rep.num_jumps();
    const int D = can.rep.num_jumps();
    b.V = Mat::Zero(d, D);
    b.cols = can.groups;
    for (int a = 0; a < p.size(); ++a) {
        const auto& rows = p.sets[a].members;
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t c = 0; c < b.cols[a].size(); ++c) b.V(rows[i], b.cols[a][c]) = can.isometries[a](i, c);
    }
    return b;
}

// K_i = sum_k conj(V_ki) J_k
std::vector<Mat> contract(const Mat& V, const std::vector<Mat>& js) { return mix(V.adjoint(), js); }

std::vector<Mat> pick(const std::vector<Mat>& js, const std::vector<int>& idx) {
    std::vector<Mat> out;
    for (int i : idx) out.push_back(js[i]);
    return out;
}

}  // namespace

SymmetryOperator SymmetryOperator::make(const Mat& U, double tol) {
    if (U.rows() != U.cols() || U.rows() == 0) throw Error(ErrorKind::ShapeError, "symmetry must be a square matrix");
    if (unitarity_defect(U) > 1e-8) throw Error(ErrorKind::NotUnitary, "symmetry operator is not unitary");
    SymmetryOperator s;
    s.U = U;
    s.eig = unitary_eigen(U, tol);
    s.order = unitary_order(U);
    return s;
}

Completion unitary_completion(const Mat& X, const Representation& rep, const SjedPartition& partition, double tol) {
    const int d = rep.num_jumps();
    Completion out;
    if (d == 0) {
        out.U = Mat(0, 0);
        return out;
    }
    if (X.rows() != d || X.cols() != d) throw Error(ErrorKind::ShapeError, "mixing matrix must be d x d");
    const std::vector<Mat> targets = mix(X, rep.jumps);
    const double accept = std::max(1e-7, 100 * tol);

    // Blockwise: canonical jumps of each SJED are orthogonal, so the symmetry acts on
    // them through a unitary that can be lifted back with the isometries.
    try {
        const BlockLayout b = block_layout(rep, partition, tol);
        const int D = static_cast<int>(b.V.cols());
        const auto K = contract(b.V, rep.jumps);
        const auto KU = contract(b.V, targets);
        const int dc = partition.size();
        std::vector<int> pi(dc, -1);
        std::vector<bool> taken(dc, false);
        Mat Xt = Mat::Zero(D, D);
        bool ok = true;
        for (int a = 0; a < dc && ok; ++a) {
            const auto imgs = pick(KU, b.cols[a]);
            int best = -1;
            double best_res = accept;
            Mat best_coef;
            for (int c = 0; c < dc; ++c) {
                if (taken[c] || b.cols[c].size() != b.cols[a].size()) continue;
                const auto sol = solve_mixing_matrix(pick(K, b.cols[c]), imgs, tol);
                if (sol.residual < best_res) {
                    best_res = sol.residual;
                    best = c;
                    best_coef = sol.X;
                }
            }
            if (best < 0) {
                ok = false;
                break;
            }
            taken[best] = true;
            pi[a] = best;
            for (size_t i = 0; i < b.cols[a].size(); ++i)
                for (size_t l = 0; l < b.cols[best].size(); ++l) Xt(b.cols[a][i], b.cols[best][l]) = best_coef(i, l);
        }
        if (ok && unitarity_defect(Xt) <= accept) {
            Mat U = b.V * Xt * b.V.adjoint() + Mat::Identity(d, d) - b.V * b.V.adjoint();
            const double res = relation_residual(U, rep.jumps, targets);
            if (unitarity_defect(U) <= accept && res <= accept) {
                out.U = U;
                out.block_route = true;
                out.pi_c = pi;
                out.residual = res;
                return out;
            }
        }
    } catch (const Error&) {
        // fall through to the generic completion
    }

    const Mat N = jump_null_space(rep.jumps, tol);
    Mat U = X;
    if (N.cols() > 0) {
        const Mat W = null_space(X.adjoint(), tol);
        if (W.cols() != N.cols())
            throw Error(ErrorKind::CompletionFailed, "range of the mixing matrix has the wrong dimension for a unitary completion");
        U += W * N.transpose();
    }
    const double res = relation_residual(U, rep.jumps, targets);
    if (unitarity_defect(U) > accept || res > accept)
        throw Error(ErrorKind::CompletionFailed, "no unitary completion within tolerance");
    out.U = U;
    out.residual = res;
    return out;
}

double block_property_residual(const Mat& U, const Representation& rep, const SymmetryOperator& sym,
                               const SjedPartition& partition, const std::vector<int>& pi_c) {
    const auto img = images(sym, rep.jumps);
    double ref = 0.0;
    for (const auto& J : rep.jumps) ref = std::max(ref, J.norm());
    if (ref == 0.0) return 0.0;
    double worst = 0.0;
    for (int a = 0; a < partition.size(); ++a) {
        for (int k = 0; k < rep.num_jumps(); ++k) {
            Mat s = Mat::Zero(rep.dim, rep.dim);
            for (int j : partition.sets[a].members) s += std::conj(U(j, k)) * img[j];
            if (partition.set_of[k] == pi_c[a]) s -= rep.jumps[k];
            worst = std::max(worst, s.norm() / ref);
        }
    }
    return worst;
}

ConditionI check_condition_I(const Representation& rep, const SymmetryOperator& sym, double tol) {
    require_dim(rep, sym);
    ConditionI out;
    const Representation tr = traceless_representation(rep);
    const double scale = scale_of(rep);
    out.h_residual = (sym.apply(tr.H) - tr.H).norm() / scale;
    const auto timg = images(sym, tr.jumps);
    const MixingSolution sol = solve_mixing_matrix(tr.jumps, timg, tol);
    out.X = sol.X;
    out.x_residual = sol.residual;
    if (out.h_residual > tol) {
        out.note = "traceless Hamiltonian is not invariant";
        return out;
    }
    if (out.x_residual > tol) {
        out.note = "transformed traceless jumps leave the span of the jumps";
        return out;
    }
    if (rep.num_jumps() == 0) {
        out.U = Mat(0, 0);
        out.holds = true;
        return out;
    }
    const SjedPartition p = build_sjeds(rep, tol);
    std::optional<Completion> c;
    // Raw jumps first: when the symmetry maps them into their own span the block
    // construction applies and the same U also relates the traceless jumps.
    const auto raw = solve_mixing_matrix(rep.jumps, images(sym, rep.jumps), tol);
    if (raw.residual <= tol) {
        try {
            c = unitary_completion(raw.X, rep, p, tol);
            if (relation_residual(c->U, tr.jumps, timg) > std::max(1e-7, 100 * tol)) c.reset();
        } catch (const Error&) {
            c.reset();
        }
    }
    if (!c) {
        try {
            c = unitary_completion(sol.X, tr, p, tol);
        } catch (const Error& e) {
            out.note = e.what();
            return out;
        }
    }
    out.U = c->U;
    out.u_residual = relation_residual(out.U, tr.jumps, timg);
    out.holds = out.u_residual <= std::max(1e-7, 100 * tol) && unitarity_defect(out.U) <= 1e-7;
    return out;
}

ConditionII check_condition_II(const Representation& rep, const SymmetryOperator& sym, const SjedPartition& p,
                               double tol) {
    require_dim(rep, sym);
    ConditionII out;
    const double scale = scale_of(rep);
    out.h_residual = (sym.apply(rep.H) - rep.H).norm() / scale;
    std::vector<SuperOp> A, T;
    for (int a = 0; a < p.size(); ++a) {
        A.push_back(composite_superop(p, a));
        T.push_back(conjugate(A.back(), sym.U));
    }
    const auto pi = match_composite_actions(T, A, tol * scale);
    if (!pi) {
        // distance to the nearest action, for reporting
        double worst = 0.0;
        for (const auto& t : T) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& a : A) best = std::min(best, frobenius_distance(t, a));
            worst = std::max(worst, best);
        }
        out.action_residual = worst / scale;
        return out;
    }
    out.pi_c = *pi;
    double worst = 0.0;
    for (int a = 0; a < p.size(); ++a) worst = std::max(worst, frobenius_distance(T[a], A[(*pi)[a]]));
    out.action_residual = worst / scale;
    out.holds = out.h_residual <= tol;
    if (!out.holds || rep.num_jumps() == 0) return out;
    const auto raw = solve_mixing_matrix(rep.jumps, images(sym, rep.jumps), tol);
    try {
        const Completion c = unitary_completion(raw.X, rep, p, tol);
        out.U = c.U;
        out.block_residual = block_property_residual(out.U, rep, sym, p, out.pi_c);
    } catch (const Error&) {
        out.block_residual = std::numeric_limits<double>::infinity();
    }
    return out;
}

ConditionII check_condition_II(const Representation& rep, const SymmetryOperator& sym, double tol) {
    return check_condition_II(rep, sym, build_sjeds(rep, tol), tol);
}

ConditionIIR check_condition_IIR(const Representation& rep, const SymmetryOperator& sym, const SjedPartition& p,
                                 double tol) {
    ConditionIIR out;
    const ConditionII II = check_condition_II(rep, sym, p, tol);
    const int d = rep.num_jumps();
    out.X = Mat::Zero(d, d);
    if (!II.holds) return out;
    const BlockLayout b = block_layout(rep, p, tol);
    const auto K = contract(b.V, rep.jumps);
    const auto KU = images(sym, K);
    double iso = 0.0;
    for (int a = 0; a < p.size(); ++a) {
        const int c = II.pi_c[a];
        const auto& Sa = p.sets[a].members;
        const auto& Sc = p.sets[c].members;
        const auto sol = solve_mixing_matrix(pick(K, b.cols[c]), pick(KU, b.cols[a]), tol);
        const Mat Va = b.V(Sa, b.cols[a]);
        const Mat Vc = b.V(Sc, b.cols[c]);
        Mat block = Va * sol.X * Vc.adjoint();
        const Mat Na = null_space(Va.adjoint(), tol);
        const Mat Nc = null_space(Vc.adjoint(), tol);
        if (Na.cols() > 0 && Nc.cols() > 0) {
            const Mat Q = Mat::Identity(Na.cols(), Nc.cols());
            block += Na * Q * Nc.adjoint();
        }
        for (size_t i = 0; i < Sa.size(); ++i)
            for (size_t k = 0; k < Sc.size(); ++k) out.X(Sa[i], Sc[k]) = block(i, k);
        const Mat G = Sa.size() <= Sc.size() ? Mat(block * block.adjoint()) : Mat(block.adjoint() * block);
        iso = std::max(iso, (G - Mat::Identity(G.rows(), G.cols())).norm());
    }
    out.isometry_residual = iso;
    out.x_residual = relation_residual(out.X, rep.jumps, images(sym, rep.jumps));
    const double accept = std::max(1e-7, 100 * tol);
    out.holds = iso <= accept && out.x_residual <= accept;
    return out;
}

ConditionIII check_condition_III(const Representation& rep, const SymmetryOperator& sym, double tol) {
    require_dim(rep, sym);
    ConditionIII out;
    const int d = rep.num_jumps();
    out.h_residual = (sym.apply(rep.H) - rep.H).norm() / scale_of(rep);
    const auto img = images(sym, rep.jumps);
    const double mod_tol = std::max(1e-8, tol);
    struct Cand {
        int k;
        cplx r;
        double res;
    };
    std::vector<std::vector<Cand>> cands(d);
    for (int j = 0; j < d; ++j) {
        const double nj = rep.jumps[j].norm();
        for (int k = 0; k < d; ++k) {
            const cplx r = hs(rep.jumps[k], img[j]) / rep.jumps[k].squaredNorm();
            const double res = (img[j] - r * rep.jumps[k]).norm();
            if (res <= tol * nj && std::abs(std::abs(r) - 1.0) <= mod_tol) cands[j].push_back({k, r, res / nj});
        }
        if (cands[j].size() > 1) out.ties = true;
    }
    std::vector<int> cur(d, -1), first;
    std::vector<bool> used(d, false);
    const int cap = 64;
    std::function<void(int)> search = [&](int j) {
        if (out.alternatives >= cap) return;
        if (j == d) {
            if (out.alternatives++ == 0) first = cur;
            return;
        }
        for (const auto& c : cands[j]) {
            if (used[c.k]) continue;
            used[c.k] = true;
            cur[j] = c.k;
            search(j + 1);
            used[c.k] = false;
        }
    };
    search(0);
    if (first.empty() && d > 0) return out;
    out.pi = first;
    out.U = Mat::Zero(d, d);
    double worst = 0.0;
    for (int j = 0; j < d; ++j) {
        for (const auto& c : cands[j])
            if (c.k == first[j]) {
                out.phases.push_back(signed_phase(std::arg(c.r)));
                worst = std::max(worst, c.res);
            }
        out.U(j, first[j]) = std::polar(1.0, out.phases[j]);
    }
    out.residual = worst;
    out.holds = out.h_residual <= tol;
    return out;
}

SymmetryReport check_symmetry(const Representation& rep, const SymmetryOperator& sym,
                              const std::optional<SjedPartition>& partition, double tol) {
    SymmetryReport r;
    const SjedPartition p = partition ? *partition : build_sjeds(rep, tol);
    r.I = check_condition_I(rep, sym, tol);
    r.II = check_condition_II(rep, sym, p, tol);
    r.IIR = check_condition_IIR(rep, sym, p, tol);
    r.III = check_condition_III(rep, sym, tol);
    r.hierarchy_ok = (!r.III.holds || r.II.holds) && (!r.II.holds || r.I.holds) && (r.II.holds == r.IIR.holds);
    return r;
}

Representation lift_II_to_III(const Representation& rep, const SymmetryOperator& sym, const SjedPartition& p,
                              double tol) {
    const ConditionII II = check_condition_II(rep, sym, p, tol);
    if (!II.holds) throw Error(ErrorKind::NotConditionII, "representation does not satisfy condition II");
    const CanonicalSjed can = canonical_sjed_representation(rep, p, tol);
    std::vector<std::vector<Mat>> Ks;
    for (const auto& g : can.groups) Ks.push_back(pick(can.rep.jumps, g));

    for (const auto& cyc : cycles_of(II.pi_c)) {
        const int a0 = cyc.front();
        auto propagate = [&]() {
            for (size_t m = 1; m < cyc.size(); ++m) Ks[cyc[m]] = images(sym, Ks[cyc[m - 1]]);
        };
        propagate();
        const auto closing = images(sym, Ks[cyc.back()]);
        const int r = static_cast<int>(Ks[a0].size());
        if (r > 1) {
            Mat W(r, r);
            for (int i = 0; i < r; ++i)
                for (int l = 0; l < r; ++l) W(i, l) = hs(Ks[a0][l], closing[i]) / Ks[a0][l].squaredNorm();
            const UnitaryEigen e = unitary_eigen(W, 1e-8);
            Ks[a0] = mix(e.vectors.adjoint(), Ks[a0]);
            propagate();
        }
    }
    std::vector<Mat> jumps;
    std::vector<std::string> labels;
    for (size_t a = 0; a < Ks.size(); ++a)
        for (size_t i = 0; i < Ks[a].size(); ++i) {
            jumps.push_back(Ks[a][i]);
            labels.push_back("K" + std::to_string(a + 1) + (Ks[a].size() > 1 ? "." + std::to_string(i + 1) : ""));
        }
    return Representation::make(rep.H, jumps, labels);
}

FourierResult fourier_symmetrize(const Representation& rep, const SymmetryOperator& sym, bool single_cycle_only,
                                 double tol) {
    const ConditionIII III = check_condition_III(rep, sym, tol);
    if (!III.holds) throw Error(ErrorKind::NotConditionIII, "representation does not satisfy condition III");
    const auto cycles = cycles_of(III.pi);
    if (single_cycle_only && cycles.size() > 1) throw Error(ErrorKind::NotSingleCycle, "permutation has several cycles");
    FourierResult out;
    std::vector<Mat> jumps;
    std::vector<std::string> labels;
    for (size_t ci = 0; ci < cycles.size(); ++ci) {
        const auto& cyc = cycles[ci];
        const int n = static_cast<int>(cyc.size());
        std::vector<double> beta(n + 1, 0.0);
        for (int k = 0; k < n; ++k) beta[k + 1] = beta[k] + III.phases[cyc[k]];
        const double Delta = beta[n];
        if (sym.order > 0 && sym.order % n == 0) {
            const double total = Delta * (sym.order / n);
            if (std::abs(std::remainder(total, 2 * kPi)) > 1e-6)
                throw Error(ErrorKind::PhaseSumNotInteger, "cycle phases are inconsistent with the symmetry order");
        }
        for (int l = 0; l < n; ++l) {
            const double theta = (2 * kPi * l + Delta) / n;
            Mat Jh = Mat::Zero(rep.dim, rep.dim);
            for (int k = 0; k < n; ++k) Jh += std::polar(1.0, beta[k] - theta * k) * rep.jumps[cyc[k]];
            Jh /= std::sqrt(double(n));
            jumps.push_back(Jh);
            out.eigenphases.push_back(signed_phase(theta));
            labels.push_back("W" + std::to_string(ci + 1) + "." + std::to_string(l));
        }
    }
    // Zero waves are legitimate (e.g. equal jumps on a cycle) but not valid jumps.
    std::vector<Mat> kept;
    std::vector<std::string> kept_labels;
    std::vector<double> kept_phases;
    const double ref = total_norm(rep.jumps);
    for (size_t i = 0; i < jumps.size(); ++i) {
        if (jumps[i].norm() <= 1e-14 * ref) continue;
        kept.push_back(jumps[i]);
        kept_labels.push_back(labels[i]);
        kept_phases.push_back(out.eigenphases[i]);
    }
    out.rep = Representation::make(rep.H, kept, kept_labels);
    out.eigenphases = kept_phases;
    return out;
}

std::vector<SuperOp> wave_operators(const SjedPartition& p, const std::vector<int>& pi_c) {
    const int dc = p.size();
    if (static_cast<int>(pi_c.size()) != dc) throw Error(ErrorKind::SizeMismatch, "permutation size differs from SJED count");
    const auto cycles = cycles_of(pi_c);
    if (cycles.size() != 1) throw Error(ErrorKind::NotSingleCycle, "set permutation is not a single cycle");
    const auto& orbit = cycles.front();
    std::vector<SuperOp> A;
    for (int j = 0; j < dc; ++j) A.push_back(composite_superop(p, orbit[j]));
    std::vector<SuperOp> out;
    for (int k = 0; k < dc; ++k) {
        SuperOp w(p.dim);
        for (int j = 0; j < dc; ++j) w = w + A[j].scaled(std::polar(1.0, -2 * kPi * k * j / dc));
        out.push_back(w);
    }
    return out;
}

std::vector<SuperOp> inverse_wave_operators(const std::vector<SuperOp>& waves, const std::vector<int>& pi_c) {
    const int dc = static_cast<int>(waves.size());
    const auto cycles = cycles_of(pi_c);
    if (cycles.size() != 1 || static_cast<int>(pi_c.size()) != dc)
        throw Error(ErrorKind::NotSingleCycle, "set permutation is not a single cycle");
    std::vector<SuperOp> out(dc, SuperOp(waves.front().dim));
    for (int j = 0; j < dc; ++j) {
        SuperOp a(waves.front().dim);
        for (int k = 0; k < dc; ++k) a = a + waves[k].scaled(std::polar(1.0 / dc, 2 * kPi * k * j / dc));
        out[cycles.front()[j]] = a;
    }
    return out;
}

std::vector<std::vector<int>> monomial_eigenfunctions(const SymmetryOperator& sym, int order, cplx lambda, double tol) {
    if (order < 1 || order > 3) throw Error(ErrorKind::ShapeError, "monomial order must be 1, 2 or 3");
    const int d = sym.dim();
    const int npairs = d * d;
    std::vector<std::vector<int>> out;
    std::vector<int> codes(order, 0);
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == order) {
            double s = 0.0;
            for (int c : codes) s += sym.eig.phases(c / d) - sym.eig.phases(c % d);
            if (std::abs(std::polar(1.0, s) - lambda) <= tol) {
                std::vector<int> t;
                for (int c : codes) {
                    t.push_back(c / d);
                    t.push_back(c % d);
                }
                out.push_back(t);
            }
            return;
        }
        for (int c = from; c < npairs; ++c) {
            codes[pos] = c;
            rec(pos + 1, c);
        }
    };
    rec(0, 0);
    return out;
}

cplx evaluate_monomial(const SymmetryOperator& sym, const std::vector<int>& tuple, const Mat& psi) {
    const Mat p = sym.eig.vectors.adjoint() * psi * sym.eig.vectors;
    cplx f = 1.0;
    for (size_t i = 0; i + 1 < tuple.size(); i += 2) f *= p(tuple[i], tuple[i + 1]);
    return f;
}

LinearEigenfunction check_linear_eigenfunction(const Representation& rep, const Mat& F, double tol,
                                               std::uint64_t seed) {
    LinearEigenfunction out;
    if (F.rows() != rep.dim || F.cols() != rep.dim) throw Error(ErrorKind::DimensionMismatch, "F has the wrong shape");
    const double nF = F.norm();
    if (nF == 0.0) return out;
    const Mat G = apply_adjoint_master_operator(rep, F);
    out.lambda = hs(F, G) / (nF * nF);
    const double scale = scale_of(rep);
    out.residual = (G - out.lambda * F).norm() / (scale * nF);
    out.is_eigen = out.residual <= tol;
    if (!out.is_eigen) return out;
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 20; ++t) {
        const Vec v = random_state(rep.dim, rng);
        const Mat psi = v * v.adjoint();
        const cplx lhs = (F * apply_master_operator(rep, psi)).trace();
        const cplx rhs = out.lambda * (F * psi).trace();
        if (std::abs(lhs - rhs) > 1e-8 * scale * nF) {
            out.is_eigen = false;
            break;
        }
    }
    return out;
}

}  // namespace qsym
