#include "qsym/sjed.hpp"

#include <algorithm>
#include <cmath>

namespace qsym {

namespace {

struct JumpShape {
    bool rank1 = false;
    Vec chi;  // left singular vector (phase fixed) when rank1
};

JumpShape analyze(const Mat& J, double tol) {
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    JumpShape out;
    out.rank1 = s.size() < 2 || s(1) <= tol * s(0);
    if (out.rank1) {
        Mat u = svd.matrixU().col(0);
        fix_column_phases(u);
        out.chi = u.col(0);
    }
    return out;
}

bool proportional(const Mat& Ji, const Mat& Jj, double tol) {
    const cplx r = hs(Jj, Ji) / Jj.squaredNorm();
    return (Ji - r * Jj).norm() <= tol * Ji.norm();
}

Sjed make_set(const std::vector<Mat>& jumps, std::vector<int> members, bool reset, const Vec& chi) {
    std::sort(members.begin(), members.end());
    Sjed s;
    s.members = members;
    if (reset) {
        s.kind = SjedKind::Reset;
        s.chi = chi;
        const int d = static_cast<int>(chi.size());
        s.gamma = Mat::Zero(d, d);
        for (int k : members) {
            const Vec w = jumps[k].adjoint() * chi;
            s.gamma += w * w.adjoint();
        }
    } else {
        s.kind = SjedKind::Proportional;
        s.base = jumps[members.front()];
        const double n2 = s.base.squaredNorm();
        for (int k : members) s.lambda.push_back(hs(s.base, jumps[k]) / n2);
    }
    return s;
}

SjedPartition finish(const Representation& rep, std::vector<Sjed> sets) {
    std::sort(sets.begin(), sets.end(), [](const Sjed& a, const Sjed& b) { return a.members.front() < b.members.front(); });
    SjedPartition p;
    p.dim = rep.dim;
    p.jumps = rep.jumps;
    p.sets = std::move(sets);
    p.set_of.assign(rep.jumps.size(), -1);
    for (int a = 0; a < p.size(); ++a)
        for (int k : p.sets[a].members) p.set_of[k] = a;
    return p;
}

}  // namespace

std::vector<std::vector<int>> SjedPartition::groups() const {
    std::vector<std::vector<int>> g;
    for (const auto& s : sets) g.push_back(s.members);
    return g;
}

SjedPartition build_sjeds(const Representation& rep, double tol) {
    const int d = rep.num_jumps();
    std::vector<JumpShape> shape;
    for (int j = 0; j < d; ++j) {
        if (rep.jumps[j].norm() == 0.0) throw Error(ErrorKind::ZeroJump, "jump " + std::to_string(j + 1) + " is zero");
        shape.push_back(analyze(rep.jumps[j], tol));
    }
    std::vector<bool> used(d, false);
    std::vector<Sjed> sets;
    // reset jumps sharing a destination
    for (int j = 0; j < d; ++j) {
        if (used[j] || !shape[j].rank1) continue;
        std::vector<int> members{j};
        used[j] = true;
        for (int k = j + 1; k < d; ++k) {
            if (used[k] || !shape[k].rank1) continue;
            if (std::abs(shape[j].chi.dot(shape[k].chi)) >= 1 - tol) {
                members.push_back(k);
                used[k] = true;
            }
        }
        sets.push_back(make_set(rep.jumps, members, true, shape[j].chi));
    }
    // proportional families among the rest; leftovers become singletons
    for (int j = 0; j < d; ++j) {
        if (used[j]) continue;
        std::vector<int> members{j};
        used[j] = true;
        for (int k = j + 1; k < d; ++k) {
            if (used[k]) continue;
            if (proportional(rep.jumps[k], rep.jumps[j], tol)) {
                members.push_back(k);
                used[k] = true;
            }
        }
        sets.push_back(make_set(rep.jumps, members, false, Vec()));
    }
    return finish(rep, std::move(sets));
}

SjedPartition make_partition(const Representation& rep, const std::vector<std::vector<int>>& groups, double tol) {
    const int d = rep.num_jumps();
    std::vector<int> seen(d, 0);
    for (const auto& g : groups) {
        if (g.empty()) throw Error(ErrorKind::SizeMismatch, "empty jump group");
        for (int k : g) {
            if (k < 0 || k >= d) throw Error(ErrorKind::IndexError, "jump index out of range in partition");
            ++seen[k];
        }
    }
    for (int k = 0; k < d; ++k)
        if (seen[k] != 1) throw Error(ErrorKind::SizeMismatch, "partition must cover every jump exactly once");

    std::vector<Sjed> sets;
    for (const auto& g : groups) {
        std::vector<JumpShape> shape;
        for (int k : g) {
            if (rep.jumps[k].norm() == 0.0) throw Error(ErrorKind::ZeroJump, "zero jump in partition");
            shape.push_back(analyze(rep.jumps[k], tol));
        }
        bool reset = std::all_of(shape.begin(), shape.end(), [](const JumpShape& s) { return s.rank1; });
        if (reset)
            for (size_t i = 1; i < shape.size(); ++i)
                if (std::abs(shape[0].chi.dot(shape[i].chi)) < 1 - tol) reset = false;
        if (!reset) {
            for (size_t i = 1; i < g.size(); ++i)
                if (!proportional(rep.jumps[g[i]], rep.jumps[g[0]], tol))
                    throw Error(ErrorKind::SizeMismatch, "group mixes jumps with different destinations");
        }
        sets.push_back(make_set(rep.jumps, g, reset, reset ? shape[0].chi : Vec()));
    }
    return finish(rep, std::move(sets));
}

SuperOp composite_superop(const SjedPartition& p, int alpha) {
    if (alpha < 0 || alpha >= p.size()) throw Error(ErrorKind::IndexError, "SJED index out of range");
    SuperOp s(p.dim);
    for (int k : p.sets[alpha].members) s.add(1.0, p.jumps[k], p.jumps[k].adjoint());
    return s;
}

Mat composite_action(const SjedPartition& p, int alpha, const Mat& psi) { return composite_superop(p, alpha).apply(psi); }

std::optional<std::vector<int>> match_composite_actions(const std::vector<SuperOp>& b, const std::vector<SuperOp>& a,
                                                        double abs_tol) {
    if (a.size() != b.size()) return std::nullopt;
    const int n = static_cast<int>(a.size());
    std::vector<int> pi(n, -1);
    std::vector<bool> taken(n, false);
    for (int i = 0; i < n; ++i) {
        int found = -1;
        for (int j = 0; j < n; ++j) {
            if (frobenius_distance(b[i], a[j]) <= abs_tol) {
                if (found >= 0) return std::nullopt;  // composite actions must be distinct
                found = j;
            }
        }
        if (found < 0 || taken[found]) return std::nullopt;
        taken[found] = true;
        pi[i] = found;
    }
    return pi;
}

GeneratorMatch same_unravelled_generator(const Representation& a, const SjedPartition& pa, const Representation& b,
                                         const SjedPartition& pb, double tol) {
    GeneratorMatch out;
    if (a.dim != b.dim) return out;
    const int d = a.dim;
    const double scale = std::max({generator_scale(a), generator_scale(b), 1e-300});
    const Mat dH = b.H - a.H;
    out.shift = dH.trace().real() / d;
    const double hres = (dH - out.shift * Mat::Identity(d, d)).norm();
    out.residual = hres / scale;
    if (hres > tol * scale) return out;
    if (pa.size() != pb.size()) return out;
    std::vector<SuperOp> ca, cb;
    for (int i = 0; i < pa.size(); ++i) ca.push_back(composite_superop(pa, i));
    for (int i = 0; i < pb.size(); ++i) cb.push_back(composite_superop(pb, i));
    auto pi = match_composite_actions(cb, ca, tol * scale);
    if (!pi) return out;
    double worst = hres;
    for (int i = 0; i < pb.size(); ++i) worst = std::max(worst, frobenius_distance(cb[i], ca[(*pi)[i]]));
    out.residual = worst / scale;
    out.same = true;
    out.pi_c = *pi;
    return out;
}

GeneratorMatch same_unravelled_generator(const Representation& a, const Representation& b, double tol) {
    if (a.dim != b.dim) return {};
    return same_unravelled_generator(a, build_sjeds(a, tol), b, build_sjeds(b, tol), tol);
}

CanonicalSjed canonical_sjed_representation(const Representation& rep, const SjedPartition& p, double tol) {
    CanonicalSjed out;
    std::vector<Mat> jumps;
    std::vector<std::string> labels;
    for (int a = 0; a < p.size(); ++a) {
        const Sjed& s = p.sets[a];
        const int m = static_cast<int>(s.members.size());
        std::vector<int> group;
        if (s.kind == SjedKind::Proportional) {
            double n2 = 0.0;
            for (const auto& l : s.lambda) n2 += std::norm(l);
            const double sc = std::sqrt(n2);
            Mat V(m, 1);
            for (int k = 0; k < m; ++k) V(k, 0) = s.lambda[k] / sc;
            group.push_back(static_cast<int>(jumps.size()));
            jumps.push_back(sc * s.base);
            labels.push_back("K" + std::to_string(a + 1));
            out.isometries.push_back(V);
        } else {
            HermitianEigen e = hermitian_eigen(s.gamma, 1e-10);
            const int d = static_cast<int>(e.values.size());
            const double gmax = e.values.maxCoeff();
            std::vector<int> keep;
            for (int i = d - 1; i >= 0; --i)
                if (e.values(i) > tol * gmax) keep.push_back(i);
            Mat V(m, keep.size());
            for (size_t c = 0; c < keep.size(); ++c) {
                const double g = e.values(keep[c]);
                const Vec xi = e.vectors.col(keep[c]);
                for (int k = 0; k < m; ++k) {
                    const Vec w = p.jumps[s.members[k]].adjoint() * s.chi;
                    V(k, c) = w.dot(xi) / std::sqrt(g);
                }
                group.push_back(static_cast<int>(jumps.size()));
                jumps.push_back(std::sqrt(g) * s.chi * xi.adjoint());
                labels.push_back("K" + std::to_string(a + 1) + "." + std::to_string(c + 1));
            }
            out.isometries.push_back(V);
        }
        out.groups.push_back(group);
    }
    out.rep = Representation::make(rep.H, jumps, labels);
    return out;
}

}  // namespace qsym
