#include "qsym/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "qsym/dilation.hpp"
#include "qsym/modelfile.hpp"
#include "qsym/symmetry.hpp"

namespace qsym {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

json one_based(const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(x + 1);
    return a;
}

json matrix_or_null(const Mat& M) { return M.size() ? matrix_to_json(M) : json(nullptr); }

std::vector<NamedSymmetry> selected(const Model& m, const std::optional<std::string>& name) {
    if (!name) return m.symmetries;
    return {m.symmetry(*name)};
}

const Expectation* expectation_for(const Model& m, const std::string& sym) {
    for (const auto& e : m.expect)
        if (e.symmetry == sym) return &e;
    return nullptr;
}

json sjed_summary(const SjedPartition& p) {
    json sets = json::array();
    for (const auto& s : p.sets)
        sets.push_back({{"members", one_based(s.members)},
                        {"kind", s.kind == SjedKind::Reset ? "reset" : "proportional"}});
    return sets;
}

}  // namespace

Mat default_initial_state(int dim) {
    Vec v(dim);
    if (dim == 2) {
        v << std::cos(0.3), std::polar(std::sin(0.3), 0.7);
    } else {
        for (int k = 0; k < dim; ++k) v(k) = std::polar(1.0 + 0.1 * k, 0.7 * k);
        v.normalize();
    }
    return v * v.adjoint();
}

SjedPartition model_partition(const Model& m, double tol) {
    return m.partition ? make_partition(m.rep, *m.partition, tol) : build_sjeds(m.rep, tol);
}

TestLevel parse_level(const std::string& s) {
    if (s == "full") return TestLevel::Full;
    if (s == "coarse") return TestLevel::Coarse;
    if (s == "unlabelled" || s == "unlabeled") return TestLevel::Unlabelled;
    throw Error(ErrorKind::ParseError, "unknown level " + s + " (full, coarse, unlabelled)");
}

const char* to_string(TestLevel level) {
    switch (level) {
        case TestLevel::Full: return "full";
        case TestLevel::Coarse: return "coarse";
        case TestLevel::Unlabelled: return "unlabelled";
    }
    return "?";
}

json check_report(const Model& m, const CheckOptions& opts) {
    json timings = json::object();
    auto t0 = Clock::now();
    const SjedPartition p = model_partition(m, opts.tol);
    timings["sjeds"] = ms_since(t0);

    json report;
    report["tool"] = "qsym";
    report["version"] = kVersion;
    report["command"] = "check";
    report["model"] = m.name;
    report["input"] = model_to_json(m);
    report["seed"] = nullptr;
    report["tol"] = opts.tol;
    report["sjeds"] = sjed_summary(p);

    json syms = json::array();
    for (const auto& ns : selected(m, opts.symmetry)) {
        t0 = Clock::now();
        const SymmetryOperator sym = SymmetryOperator::make(ns.U);
        const SymmetryReport r = check_symmetry(m.rep, sym, p, opts.tol);
        json s;
        s["name"] = ns.name;
        s["order"] = sym.order;
        s["verdicts"] = {{"I", r.I.holds}, {"II", r.II.holds}, {"III", r.III.holds}};
        s["hierarchy_ok"] = r.hierarchy_ok;
        s["condition_I"] = {{"holds", r.I.holds},
                            {"h_residual", r.I.h_residual},
                            {"x_residual", r.I.x_residual},
                            {"u_residual", r.I.u_residual},
                            {"X", matrix_or_null(r.I.X)},
                            {"U", matrix_or_null(r.I.U)},
                            {"note", r.I.note}};
        s["condition_II"] = {{"holds", r.II.holds},
                             {"pi_c", one_based(r.II.pi_c)},
                             {"h_residual", r.II.h_residual},
                             {"action_residual", r.II.action_residual},
                             {"block_residual", r.II.block_residual},
                             {"U", matrix_or_null(r.II.U)}};
        s["condition_IIR"] = {{"holds", r.IIR.holds},
                              {"x_residual", r.IIR.x_residual},
                              {"isometry_residual", r.IIR.isometry_residual},
                              {"X", matrix_or_null(r.IIR.X)}};
        s["condition_III"] = {{"holds", r.III.holds},
                              {"pi", one_based(r.III.pi)},
                              {"phases", r.III.phases},
                              {"ties", r.III.ties},
                              {"alternatives", r.III.alternatives},
                              {"h_residual", r.III.h_residual},
                              {"residual", r.III.residual},
                              {"U", matrix_or_null(r.III.U)}};
        if (r.I.holds && r.I.X.size()) {
            try {
                const Completion c = unitary_completion(r.I.X, traceless_representation(m.rep), p, opts.tol);
                s["completion"] = {{"block_route", c.block_route}, {"residual", c.residual}, {"U", matrix_to_json(c.U)}};
            } catch (const Error& e) {
                s["completion"] = {{"error", e.what()}};
            }
        }
        timings[ns.name + ".conditions"] = ms_since(t0);
        if (opts.block_support) {
            t0 = Clock::now();
            const auto blocks = block_support(master_superop(m.rep), sym.eig, 1e-8);
            json b = json::array();
            for (const auto& bm : blocks) b.push_back({{"delta", bm.delta}, {"mass", bm.mass}});
            s["block_support"] = {{"blocks", b}, {"off_block_fraction", off_block_fraction(blocks, 1e-8)}};
            timings[ns.name + ".block_support"] = ms_since(t0);
        }
        if (const Expectation* e = expectation_for(m, ns.name)) {
            s["expect"] = {{"I", e->I}, {"II", e->II}, {"III", e->III}};
            s["matches"] = e->I == r.I.holds && e->II == r.II.holds && e->III == r.III.holds;
        }
        syms.push_back(s);
    }
    report["symmetries"] = syms;
    report["timings_ms"] = timings;
    report["consistent"] = report_consistent(report);
    return report;
}

json joint_report(const Model& m, const CheckOptions& opts, int random_candidates) {
    const auto t0 = Clock::now();
    const SjedPartition p = model_partition(m, opts.tol);
    json report;
    report["tool"] = "qsym";
    report["version"] = kVersion;
    report["command"] = "verify-joint";
    report["model"] = m.name;
    report["input"] = model_to_json(m);
    report["seed"] = 17;
    json syms = json::array();
    for (const auto& ns : selected(m, opts.symmetry)) {
        const SymmetryOperator sym = SymmetryOperator::make(ns.U);
        const auto rows = verify_joint(m.rep, sym, p, opts.tol, random_candidates);
        json table = json::array();
        bool consistent = true;
        for (const auto& r : rows) {
            const bool ok = r.certified ? r.residual <= 1e-10 : r.residual > 1e-3;
            consistent = consistent && ok;
            table.push_back({{"step", to_string(r.kind)},
                             {"symmetric", r.certified},
                             {"residual", r.residual},
                             {"candidates", r.candidates},
                             {"consistent", ok}});
        }
        syms.push_back({{"name", ns.name}, {"table", table}, {"matches", consistent}});
    }
    report["symmetries"] = syms;
    report["timings_ms"] = {{"total", ms_since(t0)}};
    report["consistent"] = report_consistent(report);
    return report;
}

json simulate_report(const Model& m, const SimulateOptions& opts) {
    const auto t0 = Clock::now();
    const SjedPartition p = model_partition(m);
    const NamedSymmetry& ns = m.symmetry(opts.symmetry);
    const SymmetryOperator sym = SymmetryOperator::make(ns.U);
    const SymmetryReport cond = check_symmetry(m.rep, sym, p);
    const Mat psi0 = default_initial_state(m.rep.dim);

    SymmetryTestOptions to;
    to.level = opts.level;
    to.T = opts.T;
    to.N = opts.N;
    to.seed = opts.seed;
    to.alpha = opts.alpha;
    to.threads = opts.threads;
    std::string note;
    SymmetryTestResult res;
    try {
        res = ensemble_symmetry_test(m.rep, p, sym, psi0, to);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::MissingPermutation) throw;
        const int n = opts.level == TestLevel::Full ? m.rep.num_jumps() : p.size();
        std::vector<int> id(n);
        for (int k = 0; k < n; ++k) id[k] = k;
        to.permutation = id;
        note = "no certificate permutation; identity labels used";
        res = ensemble_symmetry_test(m.rep, p, sym, psi0, to);
    }
    const bool expected = opts.level == TestLevel::Full ? cond.III.holds : cond.II.holds;

    json report;
    report["tool"] = "qsym";
    report["version"] = kVersion;
    report["command"] = "simulate";
    report["model"] = m.name;
    report["input"] = model_to_json(m);
    report["seed"] = opts.seed;
    report["threads"] = resolve_threads(opts.threads);
    report["symmetry"] = ns.name;
    report["level"] = to_string(opts.level);
    report["N"] = opts.N;
    report["horizon"] = opts.T;
    report["alpha"] = opts.alpha;
    report["permutation"] = one_based(res.permutation);
    if (!note.empty()) report["note"] = note;
    report["chi2"] = {{"statistic", res.chi2.statistic},
                      {"dof", res.chi2.dof},
                      {"p_value", res.chi2.p_value},
                      {"bins", res.chi2.bins}};
    report["symmetric"] = res.symmetric;
    report["expected_symmetric"] = expected;

    if (!opts.times.empty() || opts.out_dir) {
        SampleOptions so;
        so.checkpoints = opts.times;
        const TrajectoryEnsemble ens = simulate_ensemble(m.rep, psi0, opts.T, opts.N, opts.seed, so, opts.threads);
        json avg = json::array();
        for (double t : opts.times) {
            const EnsembleAverage a = ensemble_average(m.rep, ens, t);
            const Mat exact = evolve_density(m.rep, psi0, t);
            double worst = 0.0;
            for (int i = 0; i < m.rep.dim; ++i)
                for (int k = 0; k < m.rep.dim; ++k) {
                    const cplx dev = a.mean(i, k) - exact(i, k);
                    const cplx se = a.stderr_(i, k);
                    worst = std::max(worst, std::abs(dev.real()) / std::max(se.real(), 1e-12));
                    worst = std::max(worst, std::abs(dev.imag()) / std::max(se.imag(), 1e-12));
                }
            avg.push_back({{"t", t}, {"mean", matrix_to_json(a.mean)}, {"exact", matrix_to_json(exact)},
                           {"max_sigma", worst}});
        }
        report["ensemble_average"] = avg;
        if (opts.out_dir) {
            namespace fs = std::filesystem;
            fs::create_directories(*opts.out_dir);
            std::ofstream jl(fs::path(*opts.out_dir) / "ensemble.jsonl");
            export_ensemble_jsonl(ens, jl);
            std::ofstream csv(fs::path(*opts.out_dir) / "counts.csv");
            export_count_histogram_csv(ens, m.rep.num_jumps(), csv);
            report["files"] = {"ensemble.jsonl", "counts.csv", "report.json"};
        }
    }
    report["timings_ms"] = {{"total", ms_since(t0)}};
    report["consistent"] = res.symmetric == expected;
    if (opts.out_dir) {
        std::ofstream out(std::filesystem::path(*opts.out_dir) / "report.json");
        out << report.dump(2) << "\n";
    }
    return report;
}

bool report_consistent(const json& report) {
    if (report.contains("consistent") && report["command"] == "simulate") return report["consistent"].get<bool>();
    for (const auto& s : report.value("symmetries", json::array()))
        if (s.contains("matches") && !s["matches"].get<bool>()) return false;
    return true;
}

}  // namespace qsym
