#include "qsym/models.hpp"

#include <cmath>

namespace qsym {

const NamedSymmetry& Model::symmetry(const std::string& n) const {
    for (const auto& s : symmetries)
        if (s.name == n) return s;
    throw Error(ErrorKind::IndexError, "model " + name + " has no symmetry named " + n);
}


namespace {

Model qubit_base(const std::string& name, const QubitParams& p) {
    Model m;
    m.name = name;
    m.symmetries = {{"Z", pauli::z()}};
    m.parameters = {{"omega", p.omega}, {"gz", p.gz}, {"gx", p.gx}};
    return m;
}

Mat qubit_K(const QubitParams& p, double sign) {
    return std::sqrt(p.gz) * pauli::z() + sign * std::sqrt(p.gx) * pauli::x();
}

}  // namespace

Model qubit_weak(const QubitParams& p) {
    Model m = qubit_base("qubit-weak", p);
    m.description = "Single qubit, weakly symmetric jumps sigma_z and sigma_x.";
    m.rep = Representation::make(p.omega * pauli::z(), {std::sqrt(p.gz) * pauli::z(), std::sqrt(p.gx) * pauli::x()});
    m.expect = {{"Z", true, true, true}};
    return m;
}

Model qubit_III(const QubitParams& p) {
    Model m = qubit_base("qubit-III", p);
    m.description = "Single qubit, jumps swapped by the parity symmetry.";
    const double r = 1 / std::sqrt(2.0);
    m.rep = Representation::make(p.omega * pauli::z(), {r * qubit_K(p, 1), r * qubit_K(p, -1)});
    m.expect = {{"Z", true, true, true}};
    return m;
}

Model qubit_II(const QubitParams& p) {
    Model m = qubit_base("qubit-II", p);
    m.description = "Single qubit, two proportional jumps plus one partner; only the SJED actions are permuted.";
    m.parameters["c1"] = p.c1.real();
    m.parameters["c2"] = p.c2.real();
    m.rep = Representation::make(p.omega * pauli::z(),
                                 {p.c1 * qubit_K(p, 1), p.c2 * qubit_K(p, 1), qubit_K(p, -1) / std::sqrt(2.0)});
    m.expect = {{"Z", true, true, false}};
    return m;
}

Model qubit_I(const QubitParams& p) {
    Model m = qubit_base("qubit-I", p);
    m.description = "Single qubit, generic unitary remix of the weak jumps (|a| != |b|).";
    m.parameters["a"] = p.a.real();
    m.parameters["b"] = p.b.real();
    const Mat Z = std::sqrt(p.gz) * pauli::z(), X = std::sqrt(p.gx) * pauli::x();
    m.rep = Representation::make(p.omega * pauli::z(), {p.a * Z + p.b * X, std::conj(p.b) * Z - std::conj(p.a) * X});
    m.expect = {{"Z", true, false, false}};
    return m;
}

Model qubit_nonunique(const QubitParams& p) {
    Model m = qubit_base("qubit-nonunique", p);
    m.description = "Single qubit, two proportional pairs; the unitary mixing matrix is not unique.";
    m.parameters["theta"] = p.theta;
    const cplx c1 = std::cos(p.theta) / std::sqrt(2.0), c2 = std::sin(p.theta) / std::sqrt(2.0);
    m.rep = Representation::make(p.omega * pauli::z(),
                                 {c1 * qubit_K(p, 1), c2 * qubit_K(p, 1), c1 * qubit_K(p, -1), c2 * qubit_K(p, -1)});
    m.expect = {{"Z", true, true, true}};
    return m;
}

Model dephasing_qubit(double gamma) {
    Model m;
    m.name = "dephasing-qubit";
    m.description = "H = 0, single jump sqrt(gamma) sigma_z.";
    m.parameters = {{"gamma", gamma}};
    m.rep = Representation::make(Mat::Zero(2, 2), {std::sqrt(gamma) * pauli::z()});
    m.symmetries = {{"Z", pauli::z()}};
    m.expect = {{"Z", true, true, true}};
    return m;
}

namespace {

// Single-qubit basis ordered |1>, |0>.
Mat sp() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}
Mat sm() {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}
Mat num() {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}
Mat nbar() {
    Mat m = Mat::Zero(2, 2);
    m(1, 1) = 1;
    return m;
}

Model twoqubit_base(const std::string& name, const TwoQubitParams& p) {
    Model m;
    m.name = name;
    const Mat I = Mat::Identity(2, 2);
    m.rep.H = p.omega1 * kron(pauli::x(), I) + p.omega2 * kron(I, pauli::x());
    m.symmetries = {{"XX", kron(pauli::x(), pauli::x())}};
    m.parameters = {{"omega1", p.omega1}, {"omega2", p.omega2}};
    return m;
}

}  // namespace

Model twoqubit_weak(const TwoQubitParams& p) {
    Model m = twoqubit_base("twoqubit-weak", p);
    m.description = "Two qubits, weakly symmetric jumps (phases 0, 180, 0, 180 degrees).";
    const Mat a = kron(sm(), nbar()), b = kron(sp(), num()), c = kron(nbar(), sm()), d = kron(num(), sp());
    m.rep = Representation::make(m.rep.H, {a + b, a - b, c + d, c - d});
    m.expect = {{"XX", true, true, true}};
    return m;
}

Model twoqubit_III(const TwoQubitParams& p) {
    Model m = twoqubit_base("twoqubit-III", p);
    m.description = "Two qubits, reset jumps swapped in two 2-cycles.";
    m.rep = Representation::make(m.rep.H, {kron(sm(), nbar()), kron(sp(), num()), kron(nbar(), sm()), kron(num(), sp())});
    m.expect = {{"XX", true, true, true}};
    return m;
}

Model twoqubit_II(const TwoQubitParams& p) {
    Model m = twoqubit_base("twoqubit-II", p);
    m.description = "Two qubits, two reset SJEDs (destinations |00>, |11>) swapped by the symmetry.";
    m.parameters.insert({{"a1", p.a1.real()}, {"a2", p.a2.real()}, {"b1", p.b1.real()}, {"b2", p.b2.real()}});
    const Mat s1m = kron(sm(), nbar()), s2m = kron(nbar(), sm()), s2p = kron(num(), sp()), s1p = kron(sp(), num());
    m.rep = Representation::make(m.rep.H, {p.a1 * s1m + p.a2 * s2m, std::conj(p.a2) * s1m - std::conj(p.a1) * s2m,
                                           p.b1 * s2p + p.b2 * s1p, std::conj(p.b2) * s2p - std::conj(p.b1) * s1p});
    m.expect = {{"XX", true, true, false}};
    return m;
}

Model twoqubit_I(const TwoQubitParams& p, bool literal) {
    Model m = twoqubit_base(literal ? "twoqubit-I-literal" : "twoqubit-I", p);
    m.description = literal ? "Two qubits, condition-I family with sigma_2^+ in J3, J4."
                            : "Two qubits, reset jumps with superposed destinations; only condition I holds.";
    m.parameters.insert({{"a1", p.ia1.real()}, {"a2", p.ia2.real()}, {"b1", p.ib1.real()}, {"b2", p.ib2.real()}});
    const Mat s1m = kron(sm(), nbar()), n1s2p = kron(num(), sp()), s1p = kron(sp(), num());
    const Mat nb1s2 = literal ? kron(nbar(), sp()) : kron(nbar(), sm());
    m.rep = Representation::make(
        m.rep.H, {p.ia1 * s1m + p.ib1 * n1s2p, std::conj(p.ib1) * s1m - std::conj(p.ia1) * n1s2p,
                  p.ia2 * nb1s2 + p.ib2 * s1p, std::conj(p.ib2) * nb1s2 - std::conj(p.ia2) * s1p});
    m.expect = {{"XX", true, false, false}};
    if (literal) m.expect = {{"XX", false, false, false}};
    return m;
}

namespace {

Mat site_op(const Mat& op, int site, int L) {
    Mat out = Mat::Identity(1, 1);
    for (int a = 0; a < L; ++a) out = kron(out, a == site ? op : Mat(Mat::Identity(3, 3)));
    return out;
}

Mat qutrit_u(double t) {
    Mat u = Mat::Zero(3, 3);
    u(0, 0) = 1;
    u(1, 1) = u(2, 2) = std::cos(t);
    u(2, 1) = std::sin(t);
    u(1, 2) = -std::sin(t);
    return u;
}

int ipow3(int L) {
    int d = 1;
    for (int a = 0; a < L; ++a) d *= 3;
    return d;
}

}  // namespace

Mat qutrit_translation(int L) {
    const int d = ipow3(L);
    Mat U = Mat::Zero(d, d);
    std::vector<int> digits(L);
    for (int s = 0; s < d; ++s) {
        int r = s;
        for (int a = L - 1; a >= 0; --a) {
            digits[a] = r % 3;
            r /= 3;
        }
        // site a content moves to site a+1
        int t = 0;
        for (int a = 0; a < L; ++a) t = 3 * t + digits[(a + L - 1) % L];
        U(t, s) = 1;
    }
    return U;
}

Mat qutrit_rotation(const std::vector<double>& angles) {
    Mat out = Mat::Identity(1, 1);
    for (double t : angles) out = kron(out, qutrit_u(t));
    return out;
}

Model qutrit_chain(const QutritChainParams& p) {
    if (static_cast<int>(p.theta_deg.size()) != p.L) throw Error(ErrorKind::SizeMismatch, "need one angle per site");
    const int L = p.L, d = ipow3(L);
    const double deg = kPi / 180.0;
    Model m;
    m.name = "qutrit-chain";
    m.description = "Qutrit ring with reset jumps to the vacuum; translation, rotation and combined symmetries.";
    m.parameters = {{"L", double(L)}, {"omega", p.omega}, {"kappa", p.kappa}, {"V", p.V}, {"theta", p.theta_ref_deg}};
    for (int a = 0; a < L; ++a) m.parameters["theta" + std::to_string(a + 1)] = p.theta_deg[a];

    Mat n = Mat::Zero(3, 3), G = Mat::Zero(3, 3), c1 = Mat::Zero(3, 3), c2 = Mat::Zero(3, 3);
    n(1, 1) = n(2, 2) = 1;
    G(2, 1) = kI;
    G(1, 2) = -kI;
    c1(0, 1) = 1;
    c2(0, 2) = 1;
    Mat H = Mat::Zero(d, d);
    for (int a = 0; a < L; ++a) {
        H += p.omega * site_op(n, a, L) + p.kappa * site_op(G, a, L);
        H += p.V * site_op(n, a, L) * site_op(n, (a + 1) % L, L);
    }
    Mat vac = Mat::Zero(d, d);
    vac(0, 0) = 1;
    std::vector<Mat> jumps;
    std::vector<std::string> labels;
    std::vector<std::vector<int>> groups;
    for (int a = 0; a < L; ++a) {
        const double t = p.theta_deg[a] * deg;
        const Mat A1 = site_op(c1, a, L), A2 = site_op(c2, a, L);
        groups.push_back({2 * a, 2 * a + 1});
        jumps.push_back(vac * (A1 * std::cos(t) + A2 * std::sin(t)));
        jumps.push_back(vac * (A1 * std::sin(t) - A2 * std::cos(t)));
        labels.push_back("J" + std::to_string(a + 1) + ".1");
        labels.push_back("J" + std::to_string(a + 1) + ".2");
    }
    m.rep = Representation::make(H, jumps, labels);
    m.partition = groups;

    std::vector<double> vartheta(L), shifted(L);
    for (int a = 0; a < L; ++a) {
        vartheta[a] = (p.theta_ref_deg - p.theta_deg[a]) * deg;
        shifted[a] = (p.theta_deg[(a + 1) % L] - p.theta_deg[a]) * deg;
    }
    const Mat UT = qutrit_translation(L);
    const Mat Urot = qutrit_rotation(vartheta);
    m.symmetries = {
        {"T", UT},
        {"R", Urot},
        // rotate every site to the common angle, translate, rotate back
        {"TR", Urot.adjoint() * UT * Urot},
        {"TR-shift", UT * qutrit_rotation(shifted)},
        {"TR-literal", UT * Urot},
    };
    m.expect = {{"T", true, true, false},
                {"R", true, true, false},
                {"TR", true, true, true},
                {"TR-shift", true, true, true},
                {"TR-literal", true, true, false}};
    return m;
}

std::vector<std::string> example_names() {
    return {"qubit-weak",    "qubit-III",     "qubit-II",     "qubit-I",     "qubit-nonunique",
            "twoqubit-weak", "twoqubit-III",  "twoqubit-II",  "twoqubit-I",  "qutrit-chain"};
}

Model example(const std::string& name) {
    if (name == "qubit-weak") return qubit_weak();
    if (name == "qubit-III") return qubit_III();
    if (name == "qubit-II") return qubit_II();
    if (name == "qubit-I") return qubit_I();
    if (name == "qubit-nonunique") return qubit_nonunique();
    if (name == "twoqubit-weak") return twoqubit_weak();
    if (name == "twoqubit-III") return twoqubit_III();
    if (name == "twoqubit-II") return twoqubit_II();
    if (name == "twoqubit-I") return twoqubit_I();
    if (name == "qutrit-chain") return qutrit_chain();
    if (name == "dephasing-qubit") return dephasing_qubit();
    std::string list;
    for (const auto& n : example_names()) list += " " + n;
    throw Error(ErrorKind::UnknownExample, "unknown example '" + name + "'; available:" + list);
}

}  // namespace qsym
