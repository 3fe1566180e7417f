#pragma once

#include <optional>
#include <vector>

#include "qsym/lindblad.hpp"

namespace qsym {

enum class SjedKind { Proportional, Reset };

struct Sjed {
    std::vector<int> members;  // 0-based jump indices, ascending
    SjedKind kind = SjedKind::Proportional;
    // Proportional: J_k = lambda_k * base
    Mat base;
    std::vector<cplx> lambda;
    // Reset: J_k = |chi><w_k|, Gamma = sum_k |w_k><w_k|
    Vec chi;
    Mat gamma;
};

struct SjedPartition {
    int dim = 0;
    std::vector<Mat> jumps;  // copy of the jumps the partition was built from
    std::vector<Sjed> sets;  // ordered by smallest member
    std::vector<int> set_of;  // jump index -> set index

    int size() const { return static_cast<int>(sets.size()); }
    std::vector<std::vector<int>> groups() const;
};

SjedPartition build_sjeds(const Representation& rep, double tol = 1e-9);

// Validates a user-supplied grouping (a refinement or coarsening the caller vouches
// for): each group must be either pairwise proportional or rank-1 with a shared
// destination.
SjedPartition make_partition(const Representation& rep, const std::vector<std::vector<int>>& groups,
                             double tol = 1e-9);

SuperOp composite_superop(const SjedPartition& p, int alpha);
Mat composite_action(const SjedPartition& p, int alpha, const Mat& psi);

struct GeneratorMatch {
    bool same = false;
    std::vector<int> pi_c;  // set of B -> set of A
    double shift = 0.0;
    double residual = 0.0;
};

// True when the unravelled (jump-resolved) generators of a and b coincide.
GeneratorMatch same_unravelled_generator(const Representation& a, const Representation& b, double tol = 1e-9);
GeneratorMatch same_unravelled_generator(const Representation& a, const SjedPartition& pa, const Representation& b,
                                         const SjedPartition& pb, double tol = 1e-9);

struct CanonicalSjed {
    Representation rep;
    std::vector<Mat> isometries;  // per set: J_k = sum_i V_ki K_i for k in the set
    std::vector<std::vector<int>> groups;  // canonical jump indices per set
};

CanonicalSjed canonical_sjed_representation(const Representation& rep, const SjedPartition& p,
                                            double tol = 1e-9);

// Match each set of `b` to a set of `a` by Choi distance of composite actions.
// Returns nullopt unless the assignment is a bijection.
std::optional<std::vector<int>> match_composite_actions(const std::vector<SuperOp>& b,
                                                        const std::vector<SuperOp>& a, double abs_tol);

}  // namespace qsym
