#include "levy/claw.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "levy/quadrature.hpp"

namespace levy {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void cfg_fail(int line, const std::string& what) {
    throw DomainError("config line " + std::to_string(line) + ": " + what);
}

// Plain double, "a/b" fraction, or inf (any sign).
double parse_number(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s.empty()) cfg_fail(line, "empty numeric value");
    std::string low = s;
    std::transform(low.begin(), low.end(), low.begin(), ::tolower);
    if (low == "inf" || low == "+inf" || low == "infinity")
        return std::numeric_limits<double>::infinity();
    if (low == "-inf") return -std::numeric_limits<double>::infinity();
    auto strict = [&](const std::string& u) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(u, &pos);
        } catch (const std::exception&) {
            cfg_fail(line, "cannot parse number '" + s + "'");
        }
        if (pos != u.size()) cfg_fail(line, "cannot parse number '" + s + "'");
        return v;
    };
    std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        double num = strict(trim(s.substr(0, slash)));
        double den = strict(trim(s.substr(slash + 1)));
        if (den == 0.0) cfg_fail(line, "zero denominator in '" + s + "'");
        return num / den;
    }
    return strict(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

std::vector<double> parse_list(const std::string& s, int line) {
    std::vector<double> out;
    for (const auto& piece : split(s, ',')) out.push_back(parse_number(piece, line));
    if (out.empty()) cfg_fail(line, "empty list");
    return out;
}

std::vector<StableComponent> parse_components(const std::string& s, int line) {
    std::vector<StableComponent> out;
    for (const auto& piece : split(s, ',')) {
        auto f = split(piece, ':');
        if (f.size() != 3)
            cfg_fail(line, "component '" + trim(piece) + "' is not alpha:beta:gamma");
        out.push_back({parse_number(f[0], line), parse_number(f[1], line),
                       parse_number(f[2], line)});
    }
    return out;
}

bool parse_bool(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    cfg_fail(line, "expected true or false, got '" + s + "'");
}

// --- spectral workspace ---------------------------------------------------

// Transforms for one grid size.  FFTW_ESTIMATE keeps the plan choice
// deterministic; buffers are owned here so callers pass plain vectors.
struct Spectral {
    int n;
    std::vector<double> real;
    std::vector<cplx> spec;
    fftw_plan fwd, bwd;

    explicit Spectral(int n_) : n(n_), real(n_), spec(n_ / 2 + 1) {
        fwd = fftw_plan_dft_r2c_1d(
            n, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
            FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(
            n, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
            FFTW_ESTIMATE);
        if (!fwd || !bwd) throw NumericError("spectral setup: planning failed");
    }
    ~Spectral() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    void forward(const std::vector<double>& u, std::vector<cplx>& uhat) {
        std::copy(u.begin(), u.end(), real.begin());
        fftw_execute(fwd);
        uhat.assign(spec.begin(), spec.end());
    }
    // Includes the 1/n normalization, so forward . inverse = identity.
    void inverse(const std::vector<cplx>& uhat, std::vector<double>& u) {
        std::copy(uhat.begin(), uhat.end(), spec.begin());
        fftw_execute(bwd);
        u.resize(n);
        const double s = 1.0 / n;
        for (int i = 0; i < n; ++i) u[i] = real[i] * s;
    }
};

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2.  The direct forms
// cancel near z = 0; below |z| = 1/4 a 13-term Taylor polynomial holds both
// to full double precision.
constexpr int kPhiTerms = 13;

cplx phi1(cplx z) {
    if (std::abs(z) < 0.25) {
        cplx s = 0.0;
        double fact = 1.0;
        for (int k = 2; k <= kPhiTerms + 1; ++k) fact *= k;  // (kPhiTerms+1)!
        for (int k = kPhiTerms; k >= 0; --k) {
            s = s * z + 1.0 / fact;
            if (k > 0) fact /= k + 1;
        }
        return s;
    }
    return (std::exp(z) - 1.0) / z;
}

cplx phi2(cplx z) {
    if (std::abs(z) < 0.25) {
        cplx s = 0.0;
        double fact = 1.0;
        for (int k = 2; k <= kPhiTerms + 2; ++k) fact *= k;  // (kPhiTerms+2)!
        for (int k = kPhiTerms; k >= 0; --k) {
            s = s * z + 1.0 / fact;
            if (k > 0) fact /= k + 2;
        }
        return s;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

// Per-step-size factors of the two-stage exponential scheme.
struct StepCoef {
    double tau = -1.0;
    std::vector<cplx> E;   // e^{tau psi~}
    std::vector<cplx> f1;  // tau phi1(tau psi~)
    std::vector<cplx> f2;  // tau phi2(tau psi~)

    void fill(const std::vector<cplx>& symbol, double tau_) {
        tau = tau_;
        std::size_t m = symbol.size();
        E.resize(m);
        f1.resize(m);
        f2.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            cplx z = tau * symbol[k];
            E[k] = std::exp(z);
            f1[k] = tau * phi1(z);
            f2[k] = tau * phi2(z);
        }
    }
};

// Fraction of spectral energy in the top third of the frequency range.
double tail_energy_fraction(const std::vector<cplx>& uhat, int n) {
    double tot = 0.0, tail = 0.0;
    const int cut = n / 3;
    for (int k = 0; k <= n / 2; ++k) {
        double w = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        double e = w * std::norm(uhat[k]);
        tot += e;
        if (k >= cut) tail += e;
    }
    return tot > 0.0 ? tail / tot : 0.0;
}

SnapshotStats snapshot_stats(const std::vector<double>& u, double dx) {
    SnapshotStats s;
    s.min = u[0];
    s.max = u[0];
    for (double v : u) {
        s.mass += v;
        s.l1 += std::abs(v);
        s.l2 += v * v;
        s.linf = std::max(s.linf, std::abs(v));
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mass *= dx;
    s.l1 *= dx;
    s.l2 = std::sqrt(s.l2 * dx);
    return s;
}

// Conjugate symbol psi(-omega_k): the synthesis convention of the
// real-to-complex transform pairs coefficient k with e^{+i omega_k x}, which
// carries the characteristic exponent at -omega_k.
std::vector<cplx> solver_symbol(const MultiscaleSpec& spec, int n, double L) {
    std::vector<cplx> sym(n / 2 + 1);
    sym[0] = 0.0;
    for (int k = 1; k <= n / 2; ++k)
        sym[k] = std::conj(char_exponent(spec, kPi * k / L));
    return sym;
}

// Least-squares slope of ln(y) against ln(1 + t) over times >= t_min.
double decay_slope(const std::vector<double>& t, const std::vector<double>& y,
                   double t_min) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_min || !(y[i] > 0.0)) continue;
        double X = std::log1p(t[i]), Y = std::log(y[i]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double heat_kernel(double t, double x) {
    return std::exp(-x * x / (4.0 * t)) / (2.0 * std::sqrt(kPi * t));
}

// t = 1 mass of the printed source form as a function of its constant K.
double printed_mass(double K) {
    auto f = [K](double x) {
        return std::exp(-0.25 * x * x) /
               (K - 0.5 * kSqrtPi * std::erf(0.25 * x));
    };
    return gl16_composite(f, -20.0, 20.0, 120);
}

const double kPrintedFloor = 0.5 * kSqrtPi + 1e-9;

}  // namespace

// --- flux and configuration ----------------------------------------------

double Nonlinearity::flux(double u) const {
    if (custom) return custom(u);
    if (c == 0.0) return 0.0;
    if (r == 2.0) return c * u * std::abs(u);
    return c * u * std::pow(std::abs(u), r - 1.0);
}

double SolverConfig::min_alpha() const {
    double m = 2.0;
    for (const auto& c : spec.components) m = std::min(m, c.alpha);
    return m;
}

bool SolverConfig::supercritical() const {
    if (g.custom || g.c == 0.0) return false;
    return g.r > std::max(min_alpha(), 1.0);
}

double linear_tail_mass(const MultiscaleSpec& spec, double t, double L) {
    if (spec.components.empty())
        throw DomainError("linear_tail_mass: empty component list");
    if (!(t > 0.0) || !(L > 0.0))
        throw DomainError("linear_tail_mass: t and L must be positive");
    double m = 0.0;
    for (const auto& c : spec.components) {
        c.validate();
        if (c.alpha == 2.0) {
            m += std::erfc(L / (2.0 * std::sqrt(c.gamma * t)));
        } else {
            m += 2.0 * t * c.gamma * std::tgamma(c.alpha) *
                 std::sin(0.5 * kPi * c.alpha) / kPi * std::pow(L, -c.alpha);
        }
    }
    return m;
}

void SolverConfig::validate() const {
    spec.validate();
    if (!(half_width > 0.0))
        throw DomainError("config: half_width must be positive");
    if (n_modes < 64 || !power_of_two(n_modes))
        throw DomainError("config: n_modes must be a power of two, at least 64");
    if (!(dt > 0.0)) throw DomainError("config: dt must be positive");
    if (!(t_end > 0.0)) throw DomainError("config: t_end must be positive");
    if (dt > t_end) throw DomainError("config: dt exceeds t_end");
    if (!g.custom) {
        if (!(g.r > 1.0))
            throw DomainError("config: flux exponent r must exceed 1");
        if (!std::isfinite(g.c))
            throw DomainError("config: flux coefficient must be finite");
    }
    double prev = 0.0;
    for (double t : output_times) {
        if (!(t > prev))
            throw DomainError("config: output_times must be strictly increasing and positive");
        if (t > t_end * (1.0 + 1e-12))
            throw DomainError("config: output time exceeds t_end");
        prev = t;
    }
    if (!(tail_budget > 0.0))
        throw DomainError("config: tail_budget must be positive");
    double tail = linear_tail_mass(spec, t_end, half_width);
    if (tail > tail_budget) {
        std::ostringstream os;
        os << "config: estimated linear-kernel tail mass " << tail
           << " beyond the domain exceeds the budget " << tail_budget
           << " at t_end; enlarge half_width or raise tail_budget";
        throw DomainError(os.str());
    }
}

// --- grid helpers ---------------------------------------------------------

std::vector<double> grid_points(int n_modes, double L) {
    if (n_modes < 2 || !(L > 0.0)) throw DomainError("grid_points: bad grid");
    std::vector<double> x(n_modes);
    const double dx = 2.0 * L / n_modes;
    for (int j = 0; j < n_modes; ++j) x[j] = -L + j * dx;
    return x;
}

double grid_norm(const std::vector<double>& u, double dx, double p) {
    if (!(p >= 1.0)) throw DomainError("grid_norm: p must be at least 1");
    if (u.empty() || !(dx > 0.0)) throw DomainError("grid_norm: bad grid");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    if (p == 1.0) {
        for (double v : u) s += std::abs(v);
        return s * dx;
    }
    if (p == 2.0) {
        for (double v : u) s += v * v;
        return std::sqrt(s * dx);
    }
    for (double v : u) s += std::pow(std::abs(v), p);
    return std::pow(s * dx, 1.0 / p);
}

std::vector<double> gaussian_bump(int n_modes, double L, double mass,
                                  double width, double center) {
    if (!(width > 0.0)) throw DomainError("gaussian_bump: width must be positive");
    auto x = grid_points(n_modes, L);
    std::vector<double> u(n_modes);
    const double a = mass / (width * kSqrt2Pi);
    for (int j = 0; j < n_modes; ++j) {
        double z = (x[j] - center) / width;
        u[j] = a * std::exp(-0.5 * z * z);
    }
    return u;
}

// --- linear part ----------------------------------------------------------

std::vector<cplx> linear_propagator(const MultiscaleSpec& spec, double tau,
                                    int n_modes, double L) {
    if (!(tau >= 0.0)) throw DomainError("linear_propagator: tau must be nonnegative");
    if (n_modes < 2 || n_modes % 2 != 0 || !(L > 0.0))
        throw DomainError("linear_propagator: bad grid");
    if (spec.components.empty())
        throw DomainError("linear_propagator: empty component list");
    for (const auto& c : spec.components) c.validate();
    std::vector<cplx> mult(n_modes / 2 + 1);
    mult[0] = 1.0;
    for (int k = 1; k <= n_modes / 2; ++k)
        mult[k] = std::exp(tau * char_exponent(spec, kPi * k / L));
    return mult;
}

// --- time stepping --------------------------------------------------------

namespace {

// -(i omega) (g(u))^ with the 2/3-rule mask; the top mode always drops (an
// odd derivative has no meaningful coefficient there).
void flux_divergence_hat(Spectral& sp, const std::vector<double>& u,
                         const Nonlinearity& g, double L, bool dealias,
                         std::vector<double>& work, std::vector<cplx>& out) {
    const int n = sp.n;
    work.resize(n);
    for (int j = 0; j < n; ++j) work[j] = g.flux(u[j]);
    sp.forward(work, out);
    const int cap = dealias ? n / 3 : n / 2 - 1;
    for (int k = 0; k <= n / 2; ++k) {
        if (k > cap) {
            out[k] = 0.0;
        } else {
            out[k] *= cplx(0.0, -(kPi * k / L));
        }
    }
}

}  // namespace

Trajectory solve(const std::vector<double>& u0, const SolverConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_modes;
    const double L = cfg.half_width;
    const double dx = 2.0 * L / n;
    if (static_cast<int>(u0.size()) != n)
        throw DomainError("solve: u0 does not live on the configured grid");
    for (double v : u0)
        if (!std::isfinite(v)) throw DomainError("solve: u0 must be finite");

    // Edge-mass precondition: outer 1/32 of the domain on each side.
    {
        double tot = 0.0, edge = 0.0;
        const int m = n / 32;
        for (int j = 0; j < n; ++j) {
            double a = std::abs(u0[j]);
            tot += a;
            if (j < m || j >= n - m) edge += a;
        }
        if (tot > 0.0 && edge > 1e-8 * tot)
            throw DomainError("solve: initial data carries mass near the domain edge");
    }

    // Recording times: t = 0 and t_end always, plus the configured list.
    std::vector<double> rec = cfg.output_times;
    if (rec.empty() || rec.back() < cfg.t_end * (1.0 - 1e-12))
        rec.push_back(cfg.t_end);

    const auto symbol = solver_symbol(cfg.spec, n, L);
    Spectral sp(n);

    std::vector<double> u = u0, ua, work;
    std::vector<cplx> uhat, a, n1, n2;
    sp.forward(u, uhat);

    Trajectory traj;
    traj.dx = dx;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
        traj.stats.push_back(snapshot_stats(u, dx));
        double tf = tail_energy_fraction(uhat, n);
        traj.tail_energy_peak = std::max(traj.tail_energy_peak, tf);
        if (tf > 1e-6) traj.aliasing_warning = true;
    };
    record(0.0);

    double linf0 = 0.0;
    for (double v : u0) linf0 = std::max(linf0, std::abs(v));

    StepCoef coef;
    double t = 0.0;
    std::size_t next = 0;
    while (next < rec.size()) {
        const double target = rec[next];
        const double tau = std::min(cfg.dt, target - t);
        const bool lands = (tau >= target - t - 1e-15 * target);
        if (coef.tau != tau) coef.fill(symbol, tau);

        flux_divergence_hat(sp, u, cfg.g, L, cfg.dealias, work, n1);
        a.resize(uhat.size());
        for (std::size_t k = 0; k < uhat.size(); ++k)
            a[k] = coef.E[k] * uhat[k] + coef.f1[k] * n1[k];
        sp.inverse(a, ua);
        flux_divergence_hat(sp, ua, cfg.g, L, cfg.dealias, work, n2);
        for (std::size_t k = 0; k < uhat.size(); ++k)
            uhat[k] = a[k] + coef.f2[k] * (n2[k] - n1[k]);
        sp.inverse(uhat, u);

        t = lands ? target : t + tau;

        if (linf0 > 0.0) {
            double linf = 0.0;
            for (double v : u) linf = std::max(linf, std::abs(v));
            if (linf > 2.0 * linf0) {
                std::ostringstream os;
                os << "solve: max|u| " << linf << " exceeded twice its initial value "
                   << linf0 << " at t = " << t;
                throw BlowUpError(os.str());
            }
        }

        if (lands) {
            record(t);
            ++next;
        }
    }
    return traj;
}

// --- reports --------------------------------------------------------------

namespace {

void check_report_grid(const Trajectory& traj, const SolverConfig& cfg) {
    if (traj.times.empty() || traj.snapshots.size() != traj.times.size())
        throw DomainError("report: empty or inconsistent trajectory");
    if (traj.times.front() != 0.0)
        throw DomainError("report: trajectory must start at t = 0");
    const int n = cfg.n_modes;
    if (static_cast<int>(traj.snapshots.front().size()) != n ||
        std::abs(traj.dx - 2.0 * cfg.half_width / n) > 1e-12)
        throw DomainError("report: trajectory grid does not match the configuration");
}

double gap_exponent(double p, double alpha) {
    if (std::isinf(p)) return 1.0 / alpha;
    return (1.0 - 1.0 / p) / alpha;
}

}  // namespace

AsymptoticsReport asymptotics_report(const Trajectory& traj,
                                     const SolverConfig& cfg, double p,
                                     double fit_t_min) {
    if (!(p >= 1.0)) throw DomainError("asymptotics_report: p must be at least 1");
    check_report_grid(traj, cfg);
    const int n = cfg.n_modes;
    const double alpha = cfg.min_alpha();
    const double e = gap_exponent(p, alpha);

    Spectral sp(n);
    std::vector<cplx> uhat0, prop;
    sp.forward(traj.snapshots.front(), uhat0);
    const auto symbol = solver_symbol(cfg.spec, n, cfg.half_width);

    AsymptoticsReport rep;
    rep.p = p;
    rep.decay_reference = -e;
    std::vector<double> ulin(n), diff(n);
    prop.resize(uhat0.size());
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        for (std::size_t k = 0; k < uhat0.size(); ++k)
            prop[k] = std::exp(t * symbol[k]) * uhat0[k];
        sp.inverse(prop, ulin);
        const auto& u = traj.snapshots[i];
        for (int j = 0; j < n; ++j) diff[j] = u[j] - ulin[j];
        rep.times.push_back(t);
        rep.scaled_gap.push_back(std::pow(t, e) * grid_norm(diff, traj.dx, p));
        rep.norms.push_back(grid_norm(u, traj.dx, p));
    }
    rep.decay_fit = decay_slope(rep.times, rep.norms, fit_t_min);
    return rep;
}

// --- sharp-source solutions -----------------------------------------------

double burgers_source_mass_cap() { return printed_mass(kPrintedFloor); }

double burgers_source_k(double mass) {
    if (!(mass > 0.0))
        throw DomainError("burgers_source_k: mass must be positive");
    const double cap = printed_mass(kPrintedFloor);
    if (mass >= cap) {
        std::ostringstream os;
        os << "burgers_source_k: mass " << mass
           << " is outside the representable range (cap " << cap << ")";
        throw DomainError(os.str());
    }
    double lo = kPrintedFloor, hi = std::max(2.0, 2.0 * kPrintedFloor);
    int guard = 0;
    while (printed_mass(hi) > mass) {
        hi *= 2.0;
        if (++guard > 60)
            throw NumericError("burgers_source_k: bracketing failed");
    }
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        (printed_mass(mid) > mass ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double burgers_source(double mass, double t, double x, BurgersVariant variant) {
    if (!(t > 0.0)) throw DomainError("burgers_source: t must be positive");
    if (mass == 0.0) return 0.0;
    if (variant == BurgersVariant::printed) {
        const double K = burgers_source_k(mass);  // rejects mass <= 0 and cap
        const double z = x / (2.0 * std::sqrt(t));
        return std::exp(-x * x / (4.0 * t)) / std::sqrt(t) /
               (K - 0.5 * kSqrtPi * std::erf(0.5 * z));
    }
    if (std::abs(mass) > 300.0)
        throw DomainError("burgers_source: |mass| too large for stable evaluation");
    const double em = std::exp(-mass);
    const double phi = em + (1.0 - em) * 0.5 * std::erfc(x / (2.0 * std::sqrt(t)));
    return (1.0 - em) * heat_kernel(t, x) / phi;
}

AsymptoticsReport critical_asymptotics_report(const Trajectory& traj,
                                              const SolverConfig& cfg, double p,
                                              double source_time_offset) {
    if (!(p >= 1.0))
        throw DomainError("critical_asymptotics_report: p must be at least 1");
    check_report_grid(traj, cfg);
    const auto& comps = cfg.spec.components;
    const bool classical = comps.size() == 1 && comps[0].alpha == 2.0 &&
                           comps[0].beta == 0.0 && comps[0].gamma == 1.0 &&
                           !cfg.g.custom && cfg.g.r == 2.0 && cfg.g.c == 1.0;
    if (!classical)
        throw NotImplementedError(
            "critical_asymptotics_report: only the single-component (2, 0, 1) "
            "operator with quadratic flux is supported; sharp-source profiles "
            "for fractional operators are not implemented");
    if (!(source_time_offset >= 0.0))
        throw DomainError("critical_asymptotics_report: negative time offset");

    const int n = cfg.n_modes;
    const double mass = traj.stats.front().mass;
    const double e = gap_exponent(p, 2.0);
    const auto x = grid_points(n, cfg.half_width);

    AsymptoticsReport rep;
    rep.p = p;
    rep.decay_reference = -e;
    std::vector<double> diff(n);
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double ts = t + source_time_offset;
        const auto& u = traj.snapshots[i];
        for (int j = 0; j < n; ++j)
            diff[j] = u[j] - burgers_source(mass, ts, x[j], BurgersVariant::hopf_cole);
        rep.times.push_back(t);
        rep.scaled_gap.push_back(std::pow(t, e) * grid_norm(diff, traj.dx, p));
        rep.norms.push_back(grid_norm(u, traj.dx, p));
    }
    rep.decay_fit = decay_slope(rep.times, rep.norms, 5.0);
    return rep;
}

// --- configuration files --------------------------------------------------

std::vector<double> RunPlan::build_initial() const {
    if (u0_kind != "gaussian")
        throw DomainError("run plan: unsupported u0_kind '" + u0_kind + "'");
    return gaussian_bump(cfg.n_modes, cfg.half_width, u0_mass, u0_width,
                         u0_center);
}

RunPlan parse_run_config(std::istream& is) {
    RunPlan plan;
    std::set<std::string> seen;
    std::set<std::string> required = {"half_width", "n_modes", "dt", "t_end",
                                      "components"};
    std::string line;
    int ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) cfg_fail(ln, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) cfg_fail(ln, "empty key");
        if (val.empty()) cfg_fail(ln, "empty value for key '" + key + "'");
        if (!seen.insert(key).second) cfg_fail(ln, "duplicate key '" + key + "'");
        required.erase(key);

        if (key == "half_width") {
            plan.cfg.half_width = parse_number(val, ln);
        } else if (key == "n_modes") {
            double v = parse_number(val, ln);
            if (v != std::floor(v)) cfg_fail(ln, "n_modes must be an integer");
            plan.cfg.n_modes = static_cast<int>(v);
        } else if (key == "dt") {
            plan.cfg.dt = parse_number(val, ln);
        } else if (key == "t_end") {
            plan.cfg.t_end = parse_number(val, ln);
        } else if (key == "dealias") {
            plan.cfg.dealias = parse_bool(val, ln);
        } else if (key == "tail_budget") {
            plan.cfg.tail_budget = parse_number(val, ln);
        } else if (key == "components") {
            plan.cfg.spec.components = parse_components(val, ln);
        } else if (key == "flux_r") {
            plan.cfg.g.r = parse_number(val, ln);
        } else if (key == "flux_c") {
            plan.cfg.g.c = parse_number(val, ln);
        } else if (key == "u0_kind") {
            if (val != "gaussian") cfg_fail(ln, "unsupported u0_kind '" + val + "'");
            plan.u0_kind = val;
        } else if (key == "u0_mass") {
            plan.u0_mass = parse_number(val, ln);
        } else if (key == "u0_width") {
            plan.u0_width = parse_number(val, ln);
        } else if (key == "u0_center") {
            plan.u0_center = parse_number(val, ln);
        } else if (key == "output_times") {
            plan.cfg.output_times = parse_list(val, ln);
        } else if (key == "report") {
            if (val != "none" && val != "supercritical" && val != "critical")
                cfg_fail(ln, "report must be none, supercritical, or critical");
            plan.report = val;
        } else if (key == "report_p") {
            plan.report_p = parse_list(val, ln);
        } else if (key == "fit_t_min") {
            plan.fit_t_min = parse_number(val, ln);
        } else {
            cfg_fail(ln, "unknown key '" + key + "'");
        }
    }
    if (!required.empty())
        throw DomainError("config: missing required key '" + *required.begin() + "'");
    plan.cfg.validate();
    return plan;
}

RunPlan parse_run_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DomainError("config: cannot open '" + path + "'");
    return parse_run_config(is);
}

}  // namespace levy
