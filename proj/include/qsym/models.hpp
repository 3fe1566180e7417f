#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsym/lindblad.hpp"

namespace qsym {

struct NamedSymmetry {
    std::string name;
    Mat U;
};

struct Expectation {
    std::string symmetry;
    bool I = false, II = false, III = false;
};

struct Model {
    std::string name;
    std::string description;
    Representation rep;
    std::vector<NamedSymmetry> symmetries;
    std::optional<std::vector<std::vector<int>>> partition;  // 0-based declared SJED grouping
    std::map<std::string, double> parameters;
    std::vector<Expectation> expect;

    const NamedSymmetry& symmetry(const std::string& name) const;
};

struct QubitParams {
    double omega = 1.0, gz = 1.0, gx = 1.0;
    cplx c1 = 0.5, c2 = 0.5;        // condition-II representation, |c1|^2+|c2|^2 = 1/2
    cplx a = 0.8, b = 0.6;          // condition-I representation, |a|^2+|b|^2 = 1
    double theta = 0.4;             // non-unique example, c = (cos, sin)/sqrt2
};

Model qubit_weak(const QubitParams& p = {});
Model qubit_III(const QubitParams& p = {});
Model qubit_II(const QubitParams& p = {});
Model qubit_I(const QubitParams& p = {});
Model qubit_nonunique(const QubitParams& p = {});
Model dephasing_qubit(double gamma = 1.0);

struct TwoQubitParams {
    double omega1 = 1.0, omega2 = 1.4142135623730951;
    cplx a1 = 0.8, a2 = 0.6, b1 = 0.28, b2 = 0.96;  // condition-II representation
    cplx ia1 = 0.8, ia2 = 0.8, ib1 = 0.6, ib2 = 0.6;  // condition-I representation
};

Model twoqubit_weak(const TwoQubitParams& p = {});
Model twoqubit_III(const TwoQubitParams& p = {});
Model twoqubit_II(const TwoQubitParams& p = {});
// `literal` uses sigma_2^+ in J3, J4, which breaks the weak symmetry.
Model twoqubit_I(const TwoQubitParams& p = {}, bool literal = false);

struct QutritChainParams {
    int L = 4;
    std::vector<double> theta_deg = {0.0, 30.0, 60.0, 90.0};
    double theta_ref_deg = 0.0;  // common target angle for the rotation symmetry
    double omega = 1.0, kappa = 0.3, V = 0.5;
};

Model qutrit_chain(const QutritChainParams& p = {});
Mat qutrit_translation(int L);
Mat qutrit_rotation(const std::vector<double>& angles_rad);

std::vector<std::string> example_names();
Model example(const std::string& name);

}  // namespace qsym
