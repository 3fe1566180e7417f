#include "qsym/trajectories.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numeric>
#include <ostream>
#include <thread>

namespace qsym {

void MeasurementRecord::validate(int num_labels) const {
    double prev = -1.0;
    for (const auto& e : events) {
        if (!(e.t >= 0.0) || e.t > horizon || e.t <= prev)
            throw Error(ErrorKind::ShapeError, "record times must be increasing and inside [0, T]");
        if (e.label < 0 || e.label >= num_labels) throw Error(ErrorKind::IndexError, "record label out of range");
        prev = e.t;
    }
}

std::vector<int> MeasurementRecord::counts(int num_labels) const {
    std::vector<int> c(num_labels, 0);
    for (const auto& e : events) {
        if (e.label < 0 || e.label >= num_labels) throw Error(ErrorKind::IndexError, "record label out of range");
        ++c[e.label];
    }
    return c;
}

Stream::Stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x71u};
    gen_.seed(seq);
}

double Stream::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

Mat drift(const Representation& rep, const Mat& psi) {
    const Mat Heff = effective_hamiltonian(rep);
    const Mat B = -kI * Heff * psi + kI * psi * Heff.adjoint();
    return B - psi * B.trace();
}

std::vector<JumpRate> jump_rates(const Representation& rep, const Mat& psi, double tol) {
    std::vector<JumpRate> out;
    for (int j = 0; j < rep.num_jumps(); ++j) {
        const Mat D = rep.jumps[j] * psi * rep.jumps[j].adjoint();
        const double r = D.trace().real();
        if (r > tol) out.push_back({j, r, D / r});
    }
    return out;
}

namespace {

Mat propagate(const Mat& Heff, const Mat& phi, double t) {
    if (t == 0.0) return phi;
    const Mat G = expm(-kI * t * Heff);
    return G * phi * G.adjoint();
}

template <class JumpFn>
RecordWeight replay(const Representation& rep, const Mat& psi0, const MeasurementRecord& record, double t,
                    JumpFn&& apply_jump) {
    if (t < 0 || t > record.horizon + 1e-15) throw Error(ErrorKind::NegativeTime, "evaluation time outside the record window");
    const Mat Heff = effective_hamiltonian(rep);
    Mat phi = psi0;
    double now = 0.0;
    for (const auto& e : record.events) {
        if (e.t > t) break;
        phi = propagate(Heff, phi, e.t - now);
        phi = apply_jump(e.label, phi);
        now = e.t;
    }
    phi = propagate(Heff, phi, t - now);
    return {phi, phi.trace().real()};
}

}  // namespace

RecordWeight record_weight(const Representation& rep, const Mat& psi0, const MeasurementRecord& record,
                           std::optional<double> t) {
    record.validate(rep.num_jumps());
    return replay(rep, psi0, record, t.value_or(record.horizon), [&](int j, const Mat& phi) -> Mat {
        return rep.jumps[j] * phi * rep.jumps[j].adjoint();
    });
}

RecordWeight coarse_record_weight(const Representation& rep, const SjedPartition& partition, const Mat& psi0,
                                  const MeasurementRecord& record, std::optional<double> t) {
    record.validate(partition.size());
    std::vector<SuperOp> A;
    for (int a = 0; a < partition.size(); ++a) A.push_back(composite_superop(partition, a));
    return replay(rep, psi0, record, t.value_or(record.horizon),
                  [&](int a, const Mat& phi) -> Mat { return A[a].apply(phi); });
}

MeasurementRecord coarse_record(const MeasurementRecord& full, const SjedPartition& partition) {
    MeasurementRecord out = full;
    out.granularity = Granularity::Coarse;
    for (auto& e : out.events) {
        if (e.label < 0 || e.label >= static_cast<int>(partition.set_of.size()))
            throw Error(ErrorKind::IndexError, "record label out of range");
        e.label = partition.set_of[e.label];
    }
    return out;
}

MeasurementRecord transform_record(const MeasurementRecord& record, const std::vector<int>& permutation) {
    const int n = static_cast<int>(permutation.size());
    std::vector<bool> hit(n, false);
    for (int p : permutation) {
        if (p < 0 || p >= n || hit[p]) throw Error(ErrorKind::SizeMismatch, "not a permutation");
        hit[p] = true;
    }
    MeasurementRecord out = record;
    for (auto& e : out.events) {
        if (e.label < 0 || e.label >= n) throw Error(ErrorKind::SizeMismatch, "permutation does not cover the record labels");
        e.label = permutation[e.label];
    }
    return out;
}

namespace {

Vec leading_vector(const Mat& psi) {
    const HermitianEigen e = hermitian_eigen(0.5 * (psi + psi.adjoint()));
    const int last = static_cast<int>(e.values.size()) - 1;
    if (e.values(last) < 1 - 1e-8 || std::abs(psi.trace() - cplx(1.0)) > 1e-8)
        throw Error(ErrorKind::ShapeError, "initial state must be a pure density matrix");
    return e.vectors.col(last);
}

Vec rk4(const Mat& A, const Vec& y, double h) {
    const Vec k1 = A * y;
    const Vec k2 = A * (y + 0.5 * h * k1);
    const Vec k3 = A * (y + 0.5 * h * k2);
    const Vec k4 = A * (y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Step doubling with local extrapolation.
Vec doubled(const Mat& A, const Vec& y, double h, double* err) {
    const Vec full = rk4(A, y, h);
    const Vec half = rk4(A, rk4(A, y, 0.5 * h), 0.5 * h);
    if (err) *err = (half - full).norm() / 15.0;
    return half + (half - full) / 15.0;
}

}  // namespace

Trajectory sample_trajectory(const Representation& rep, const Mat& psi0, double T, Stream& rng,
                             const SampleOptions& opts) {
    if (T < 0) throw Error(ErrorKind::NegativeTime, "horizon must be non-negative");
    Trajectory tr;
    tr.psi0 = psi0;
    tr.record.horizon = T;
    tr.record.granularity = Granularity::Full;

    std::vector<double> marks;
    for (double c : opts.checkpoints)
        if (c >= 0 && c < T) marks.push_back(c);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    marks.push_back(T);

    const Mat A = -kI * effective_hamiltonian(rep);
    const double anorm = A.norm();
    double h = anorm > 0 ? 1e-3 / anorm : std::max(T, 1e-300);
    const double hmin = 1e-15 * std::max(T, 1.0);
    const double t_tol = 1e-9 * std::max(T, 1e-300);

    Vec y = leading_vector(psi0);
    double t = 0.0;
    double u = rng.uniform();
    size_t next_mark = 0;
    while (true) {
        while (next_mark < marks.size() && marks[next_mark] <= t) {
            const Vec n = y / y.norm();
            tr.states.push_back({marks[next_mark], n * n.adjoint()});
            ++next_mark;
        }
        if (next_mark == marks.size()) break;
        const double target = marks[next_mark];
        const double step = std::min(h, target - t);
        double err = 0.0;
        const Vec trial = doubled(A, y, step, &err);
        const double scale = opts.rk_tol * std::max(y.norm(), 1e-300);
        if (err > scale) {
            h = step * std::max(0.1, 0.9 * std::pow(scale / err, 0.2));
            if (h < hmin) throw Error(ErrorKind::StiffnessError, "step size underflow in the no-jump evolution");
            continue;
        }
        if (step == h) h = step * (err == 0.0 ? 4.0 : std::min(4.0, std::max(0.2, 0.9 * std::pow(scale / err, 0.2))));
        if (trial.squaredNorm() > u) {
            y = trial;
            t = (step == target - t) ? target : t + step;
            continue;
        }
        // Threshold crossed inside this step: bisect the crossing time.
        double lo = 0.0, hi = step;
        while (hi - lo > t_tol) {
            const double mid = 0.5 * (lo + hi);
            if (doubled(A, y, mid, nullptr).squaredNorm() > u)
                lo = mid;
            else
                hi = mid;
        }
        y = doubled(A, y, hi, nullptr);
        t += hi;
        if (t >= target) t = std::nextafter(target, 0.0);
        y /= y.norm();
        std::vector<double> rates(rep.num_jumps());
        double total = 0.0;
        for (int j = 0; j < rep.num_jumps(); ++j) total += rates[j] = (rep.jumps[j] * y).squaredNorm();
        if (total > 0) {
            double pick = rng.uniform() * total;
            int j = 0;
            while (j + 1 < rep.num_jumps() && pick >= rates[j]) pick -= rates[j++];
            while (rates[j] == 0.0) --j;  // guard against round-off at the top end
            y = rep.jumps[j] * y;
            y /= y.norm();
            if (!tr.record.events.empty() && t <= tr.record.events.back().t) t = std::nextafter(tr.record.events.back().t, T);
            tr.record.events.push_back({t, j});
        }
        u = rng.uniform();
    }
    return tr;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QSYM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string fingerprint(const Representation& rep) {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&](const Mat& M) {
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j)
                for (double part : {M(i, j).real(), M(i, j).imag()}) {
                    std::uint64_t bits;
                    std::memcpy(&bits, &part, sizeof bits);
                    for (int b = 0; b < 8; ++b) {
                        h ^= (bits >> (8 * b)) & 0xff;
                        h *= 1099511628211ULL;
                    }
                }
    };
    eat(rep.H);
    for (const auto& J : rep.jumps) eat(J);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

TrajectoryEnsemble simulate_ensemble(const Representation& rep, const Mat& psi0, double T, int N, std::uint64_t seed,
                                     const SampleOptions& opts, int threads) {
    if (N < 0) throw Error(ErrorKind::ShapeError, "ensemble size must be non-negative");
    TrajectoryEnsemble ens;
    ens.fingerprint = fingerprint(rep);
    ens.seed = seed;
    ens.horizon = T;
    ens.trajectories.resize(N);
    const int workers = std::min(resolve_threads(threads), std::max(N, 1));
    auto run = [&](int w, std::exception_ptr* failure) {
        try {
            for (int i = w; i < N; i += workers) {
                Stream s(seed, static_cast<std::uint64_t>(i));
                ens.trajectories[i] = sample_trajectory(rep, psi0, T, s, opts);
            }
        } catch (...) {
            *failure = std::current_exception();
        }
    };
    std::vector<std::exception_ptr> failures(workers);
    if (workers == 1) {
        run(0, &failures[0]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w, &failures[w]);
        for (auto& th : pool) th.join();
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    return ens;
}

EnsembleAverage ensemble_average(const Representation& rep, const TrajectoryEnsemble& ens, double t, int resamples,
                                 std::uint64_t seed) {
    if (t < 0 || t > ens.horizon) throw Error(ErrorKind::NegativeTime, "time outside the ensemble horizon");
    const int N = static_cast<int>(ens.trajectories.size());
    if (N == 0) throw Error(ErrorKind::ShapeError, "empty ensemble");
    std::vector<Mat> states(N);
    for (int i = 0; i < N; ++i) {
        const auto& tr = ens.trajectories[i];
        const Checkpoint* hit = nullptr;
        for (const auto& c : tr.states)
            if (std::abs(c.t - t) <= 1e-12 * std::max(1.0, t)) hit = &c;
        if (hit) {
            states[i] = hit->psi;
        } else {
            const Mat phi = record_weight(rep, tr.psi0, tr.record, t).phi;
            states[i] = phi / phi.trace();
        }
    }
    EnsembleAverage out;
    out.mean = Mat::Zero(states[0].rows(), states[0].cols());
    for (const auto& s : states) out.mean += s;
    out.mean /= N;
    const int d2 = static_cast<int>(out.mean.size());
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(2 * d2, resamples);
    Stream rng(seed, 0);
    for (int b = 0; b < resamples; ++b) {
        Mat acc = Mat::Zero(out.mean.rows(), out.mean.cols());
        for (int i = 0; i < N; ++i) acc += states[rng.next() % N];
        acc /= N;
        for (int k = 0; k < d2; ++k) {
            sums(k, b) = acc(k).real();
            sums(d2 + k, b) = acc(k).imag();
        }
    }
    out.stderr_ = Mat::Zero(out.mean.rows(), out.mean.cols());
    if (resamples > 1) {
        for (int k = 0; k < d2; ++k) {
            auto sd = [&](int row) {
                const double m = sums.row(row).mean();
                return std::sqrt((sums.row(row).array() - m).square().sum() / (resamples - 1));
            };
            out.stderr_(k) = cplx(sd(k), sd(d2 + k));
        }
    }
    return out;
}

ChiSquared two_sample_chi_squared(const Histogram& a, const Histogram& b, long min_pooled) {
    long NA = 0, NB = 0;
    for (const auto& [k, v] : a) NA += v;
    for (const auto& [k, v] : b) NB += v;
    ChiSquared out;
    if (NA == 0 || NB == 0) return out;
    std::map<std::vector<long>, std::pair<long, long>> pooled;
    for (const auto& [k, v] : a) pooled[k].first += v;
    for (const auto& [k, v] : b) pooled[k].second += v;
    std::vector<std::pair<long, long>> bins;
    std::pair<long, long> rare{0, 0};
    for (const auto& [k, v] : pooled) {
        if (v.first + v.second < min_pooled) {
            rare.first += v.first;
            rare.second += v.second;
        } else {
            bins.push_back(v);
        }
    }
    if (rare.first + rare.second > 0) {
        if (rare.first + rare.second >= min_pooled || bins.empty()) {
            bins.push_back(rare);
        } else {
            auto smallest = std::min_element(bins.begin(), bins.end(), [](const auto& x, const auto& y) {
                return x.first + x.second < y.first + y.second;
            });
            smallest->first += rare.first;
            smallest->second += rare.second;
        }
    }
    out.bins = static_cast<int>(bins.size());
    if (bins.size() < 2) return out;
    const double ra = std::sqrt(double(NB) / NA), rb = std::sqrt(double(NA) / NB);
    for (const auto& [x, y] : bins) {
        const double diff = ra * x - rb * y;
        out.statistic += diff * diff / double(x + y);
    }
    out.dof = out.bins - 1;
    out.p_value = boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
    return out;
}

namespace {

long coordinate_bin(double v, double lo, double hi, int nbins) {
    // offset edges so that symmetric values never sit on a boundary
    const double x = (v - lo) / (hi - lo) * nbins + 0.1234;
    return std::clamp(static_cast<long>(std::floor(x)), 0L, static_cast<long>(nbins - 1));
}

struct StateBinner {
    int d;
    std::vector<Mat> observables;
    std::vector<std::pair<double, double>> ranges;

    explicit StateBinner(int dim) : d(dim) {
        if (d == 2) {
            observables = {pauli::x(), pauli::y(), pauli::z()};
            ranges.assign(3, {-1.0, 1.0});
            return;
        }
        for (int i = 0; i < d; ++i) {
            Mat P = Mat::Zero(d, d);
            P(i, i) = 1;
            observables.push_back(P);
            ranges.push_back({0.0, 1.0});
        }
        std::mt19937_64 rng(20240611);
        for (int k = 0; k < 2; ++k) {
            Mat O = random_hermitian(d, rng);
            const auto e = hermitian_eigen(O);
            observables.push_back(O);
            ranges.push_back({e.values(0), e.values(d - 1)});
        }
    }

    void append(const Mat& psi, std::vector<long>& key) const {
        for (size_t i = 0; i < observables.size(); ++i)
            key.push_back(coordinate_bin((observables[i] * psi).trace().real(), ranges[i].first, ranges[i].second, 6));
    }
};

}  // namespace

Histogram symmetry_histogram(const TrajectoryEnsemble& ens, const Representation& rep, const SjedPartition& partition,
                             const SymmetryOperator* sym, TestLevel level, const std::vector<int>& permutation) {
    Histogram h;
    if (ens.trajectories.empty()) return h;
    const StateBinner binner(rep.dim);
    for (const auto& tr : ens.trajectories) {
        std::vector<long> key;
        if (level != TestLevel::Unlabelled) {
            const bool coarse = level == TestLevel::Coarse;
            const int n = coarse ? partition.size() : rep.num_jumps();
            if (static_cast<int>(permutation.size()) != n)
                throw Error(ErrorKind::SizeMismatch, "permutation size does not match the label count");
            const MeasurementRecord rec = coarse ? coarse_record(tr.record, partition) : tr.record;
            const auto c = rec.counts(n);
            std::vector<long> mapped(n, 0);
            for (int j = 0; j < n; ++j) mapped[permutation[j]] = c[j];
            key.insert(key.end(), mapped.begin(), mapped.end());
        }
        binner.append(sym ? sym->apply(tr.final_state()) : tr.final_state(), key);
        ++h[key];
    }
    return h;
}

namespace {

std::uint64_t partner_seed(std::uint64_t seed) { return seed ^ 0xD1B54A32D192ED03ULL; }

std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

}  // namespace

SymmetryTestResult ensemble_symmetry_test(const Representation& rep, const SjedPartition& partition,
                                          const SymmetryOperator& sym, const Mat& psi0,
                                          const SymmetryTestOptions& opts) {
    SymmetryTestResult out;
    if (opts.permutation) {
        out.permutation = *opts.permutation;
    } else if (opts.level == TestLevel::Full) {
        const auto III = check_condition_III(rep, sym);
        if (!III.holds) throw Error(ErrorKind::MissingPermutation, "condition III fails: no label permutation");
        out.permutation = III.pi;
    } else if (opts.level == TestLevel::Coarse) {
        const auto II = check_condition_II(rep, sym, partition);
        if (!II.holds) throw Error(ErrorKind::MissingPermutation, "condition II fails: no SJED permutation");
        out.permutation = II.pi_c;
    }
    const auto A = simulate_ensemble(rep, psi0, opts.T, opts.N, opts.seed, {}, opts.threads);
    const auto B = simulate_ensemble(rep, sym.apply(psi0), opts.T, opts.N, partner_seed(opts.seed), {}, opts.threads);
    const std::vector<int> id = identity_perm(static_cast<int>(out.permutation.size()));
    out.chi2 = two_sample_chi_squared(symmetry_histogram(A, rep, partition, &sym, opts.level, out.permutation),
                                      symmetry_histogram(B, rep, partition, nullptr, opts.level, id));
    out.symmetric = out.chi2.p_value >= opts.alpha;
    return out;
}

SymmetryTestResult best_permutation_test(const Representation& rep, const SjedPartition& partition,
                                         const SymmetryOperator& sym, const Mat& psi0,
                                         const SymmetryTestOptions& opts) {
    if (opts.level == TestLevel::Unlabelled) return ensemble_symmetry_test(rep, partition, sym, psi0, opts);
    const int n = opts.level == TestLevel::Full ? rep.num_jumps() : partition.size();
    if (n > 8) throw Error(ErrorKind::SizeMismatch, "permutation scan limited to 8 labels");
    const auto A = simulate_ensemble(rep, psi0, opts.T, opts.N, opts.seed, {}, opts.threads);
    const auto B = simulate_ensemble(rep, sym.apply(psi0), opts.T, opts.N, partner_seed(opts.seed), {}, opts.threads);
    std::vector<int> perm = identity_perm(n);
    const Histogram hb = symmetry_histogram(B, rep, partition, nullptr, opts.level, perm);
    SymmetryTestResult best;
    best.chi2.p_value = -1.0;
    do {
        const auto c = two_sample_chi_squared(symmetry_histogram(A, rep, partition, &sym, opts.level, perm), hb);
        if (c.p_value > best.chi2.p_value) {
            best.chi2 = c;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.symmetric = best.chi2.p_value >= opts.alpha;
    return best;
}

SymmetryTestResult transformed_generator_test(const Representation& rep, const SymmetryOperator& sym,
                                              const Mat& psi0, const SymmetryTestOptions& opts) {
    const Representation moved = transform_representation(rep, sym.U);
    const auto A = simulate_ensemble(rep, psi0, opts.T, opts.N, opts.seed, {}, opts.threads);
    const auto B = simulate_ensemble(moved, sym.apply(psi0), opts.T, opts.N, partner_seed(opts.seed), {}, opts.threads);
    const SjedPartition p = build_sjeds(rep);
    SymmetryTestResult out;
    out.permutation = identity_perm(rep.num_jumps());
    out.chi2 = two_sample_chi_squared(symmetry_histogram(A, rep, p, &sym, TestLevel::Full, out.permutation),
                                      symmetry_histogram(B, moved, p, nullptr, TestLevel::Full, out.permutation));
    out.symmetric = out.chi2.p_value >= opts.alpha;
    return out;
}

void export_ensemble_jsonl(const TrajectoryEnsemble& ens, std::ostream& out) {
    out.precision(17);
    for (size_t i = 0; i < ens.trajectories.size(); ++i) {
        const auto& tr = ens.trajectories[i];
        out << "{\"traj\":" << i << ",\"events\":[";
        for (size_t k = 0; k < tr.record.events.size(); ++k)
            out << (k ? "," : "") << "[" << tr.record.events[k].t << "," << tr.record.events[k].label << "]";
        out << "],\"final\":[";
        const Mat& f = tr.final_state();
        for (int r = 0; r < f.rows(); ++r)
            for (int c = 0; c < f.cols(); ++c)
                out << ((r || c) ? "," : "") << "[" << f(r, c).real() << "," << f(r, c).imag() << "]";
        out << "]}\n";
    }
}

void export_count_histogram_csv(const TrajectoryEnsemble& ens, int num_labels, std::ostream& out) {
    std::map<std::pair<int, int>, long> hist;
    for (const auto& tr : ens.trajectories) {
        const auto c = tr.record.counts(num_labels);
        for (int j = 0; j < num_labels; ++j) ++hist[{j, c[j]}];
    }
    out << "label,count,trajectories\n";
    for (const auto& [k, v] : hist) out << k.first + 1 << "," << k.second << "," << v << "\n";
}

}  // namespace qsym
