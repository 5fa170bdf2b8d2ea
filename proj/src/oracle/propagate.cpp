#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/oracle/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>

namespace pf {

using cplx = std::complex<double>;

std::vector<double> Grid1D::points() const
{
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = x(i);
    return p;
}

void Grid1D::validate() const
{
    require(x_max > x_min, "grid: x_max must exceed x_min");
    require(n >= 1024 && std::has_single_bit(n), "grid: n must be a power of two >= 1024");
}

Grid1D Grid1D::make(double x_min, double x_max, std::size_t min_points)
{
    Grid1D g{x_min, x_max, std::bit_ceil(std::max<std::size_t>(min_points, 1024))};
    g.validate();
    return g;
}

double WavefunctionFrame::norm() const
{
    double s = 0;
    for (auto& a : psi)
        s += std::norm(a);
    return s * grid.dx();
}

std::vector<double> WavefunctionFrame::density() const
{
    std::vector<double> d(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        d[i] = std::norm(psi[i]);
    return d;
}

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Fft {
public:
    explicit Fft(std::vector<cplx>& buf) : n_(buf.size())
    {
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n_), p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(n_), p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~Fft()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::vector<cplx>& b) const { fftw_execute_dft(fwd_, cast(b), cast(b)); }
    void backward(std::vector<cplx>& b) const { fftw_execute_dft(bwd_, cast(b), cast(b)); }

private:
    static fftw_complex* cast(std::vector<cplx>& b) { return reinterpret_cast<fftw_complex*>(b.data()); }
    std::size_t n_;
    fftw_plan fwd_, bwd_;
};

using PotentialFn = std::function<double(double)>;

struct StepPotentials {
    PotentialFn step0, step2, step4;
    PotentialFn force2; // -dV/dx of the pulse
};

StepPotentials potentials(const ProtocolParams& p, double mass, PotentialMode mode, double wavelength)
{
    StepPotentials s;
    const double k = 2.0 * pi / wavelength;
    const auto pulse = make_pulse(p.omega_p, p.phi2, wavelength);
    const double u2 = pulse.u2(mass), u3 = pulse.u3(mass);
    const double w0 = p.omega0, wp = p.omega_p, w4 = p.omega4, phi = p.phi2;
    if (mode == PotentialMode::polynomial) {
        s.step0 = [=](double x) { return 0.5 * mass * w0 * w0 * x * x; };
        s.step2 = [=](double x) { return u2 * x * x + u3 * x * x * x; };
        s.force2 = [=](double x) { return -(2.0 * u2 * x + 3.0 * u3 * x * x); };
        s.step4 = [=](double x) { return -0.5 * mass * w4 * w4 * x * x; };
    } else {
        const double a0 = mass * w0 * w0 / (4.0 * k * k);
        const double ap = mass * wp * wp / (4.0 * k * k);
        const double a4 = mass * w4 * w4 / (4.0 * k * k);
        const double F = mass * wp * wp / (2.0 * k) * std::sin(2.0 * phi);
        s.step0 = [=](double x) { return a0 * (1.0 - std::cos(2.0 * k * x)); };
        s.step2 = [=](double x) { return F * x - ap * (std::cos(2.0 * k * x - 2.0 * phi) - std::cos(2.0 * phi)); };
        s.force2 = [=](double x) { return -(F + 2.0 * k * ap * std::sin(2.0 * k * x - 2.0 * phi)); };
        s.step4 = [=](double x) { return -a4 * (1.0 - std::cos(2.0 * k * x)); };
    }
    return s;
}

struct Envelope {
    double x = 0; // largest |x| over all step boundaries
    double p = 0; // largest |p|
    double p_pulse = 0;
    double x_pulse = 0;
};

Envelope classical_envelope(const ProtocolParams& pr, double mass, const StepPotentials& V, int last_step)
{
    const double xzp = zero_point_motion(mass, pr.omega0);
    const double pzp = hbar / (2.0 * xzp);
    Envelope env;
    auto track = [&](double x, double p) {
        env.x = std::max(env.x, std::fabs(x));
        env.p = std::max(env.p, std::fabs(p));
    };
    for (int r = 1; r <= 8; ++r) {
        for (int a = 0; a < 96; ++a) {
            double th = 2.0 * pi * a / 96.0;
            double x = 8.0 * xzp * r / 8.0 * std::cos(th), p = 8.0 * pzp * r / 8.0 * std::sin(th);
            track(x, p);
            if (last_step >= 1) {
                x += p * pr.tau1 / mass;
                track(x, p);
            }
            if (last_step >= 2) {
                env.x_pulse = std::max(env.x_pulse, std::fabs(x));
                p += V.force2(x) * pr.tau2;
                track(x, p);
                env.p_pulse = std::max(env.p_pulse, std::fabs(p));
            }
            if (last_step >= 3) {
                x += p * pr.tau3 / mass;
                track(x, p);
            }
            if (last_step >= 4 && pr.omega4 > 0 && pr.tau4 > 0) {
                double c = std::cosh(pr.omega4 * pr.tau4), s = std::sinh(pr.omega4 * pr.tau4);
                double xn = x * c + p / (mass * pr.omega4) * s;
                double pn = p * c + mass * pr.omega4 * x * s;
                track(xn, pn);
            }
        }
    }
    return env;
}

double reference_map(const ProtocolParams& p, double mass, int last_step)
{
    if (last_step >= 4 && p.omega4 > 0 && p.tau4 > 0)
        return position_map_coefficient(mass, p.tau3, p.omega4, p.tau4);
    return p.tau3 / mass;
}

void check_oracle_params(const ProtocolParams& p, const OracleOptions& opt)
{
    p.validate();
    require(p.nbar == 0, "the oracle propagates the pure ground state; nbar must be 0");
    require(opt.last_step >= 0 && opt.last_step <= 4, "last_step must lie in [0, 4]");
    if (opt.last_step >= 4)
        require(p.omega4 * p.tau4 <= 2.0, "oracle mode needs omega4*tau4 <= 2");
}

} // namespace

FringePattern oracle_reference_pattern(const ProtocolParams& p, const Particle& particle, const OracleOptions& opt)
{
    const double m = particle.mass;
    auto s1 = free_evolve(thermal_state(m, p.omega0, 0.0), m, p.tau1);
    auto pulse = make_pulse(p.omega_p, p.phi2, opt.wavelength);
    return pattern_from_map(std::sqrt(s1.var_x), m, pulse, p.tau2, reference_map(p, m, opt.last_step), 0.0);
}

Grid1D oracle_grid(const ProtocolParams& p, const Particle& particle, PotentialMode mode, const OracleOptions& opt)
{
    check_oracle_params(p, opt);
    const double m = particle.mass;
    auto V = potentials(p, m, mode, opt.wavelength);
    auto env = classical_envelope(p, m, V, opt.last_step);
    double x_half = env.x;
    double k_need = 1.2 * env.p / hbar;
    double dx_max = std::numeric_limits<double>::infinity();
    if (opt.last_step >= 3) {
        auto f = oracle_reference_pattern(p, particle, opt);
        const double feat = std::min(f.sigma_c, f.delta_x);
        x_half = std::max(x_half, 12.0 * (f.delta_x + f.sigma_c)) + 12.0 * (f.delta_x + f.sigma_c);
        k_need += 8.0 / feat;
        dx_max = feat / 20.0;
    }
    x_half = x_half * 1.15 / (1.0 - 2.0 * opt.guard_fraction);
    const double dx = std::min(pi / k_need, dx_max);
    const double n_needed = 2.0 * x_half / dx;
    if (!(n_needed <= static_cast<double>(opt.max_points))) {
        std::ostringstream s;
        s << "grid insufficient: " << n_needed << " points needed, limit " << opt.max_points;
        throw GridError(s.str());
    }
    return Grid1D::make(-x_half, x_half, static_cast<std::size_t>(std::ceil(n_needed)));
}

OracleRun propagate_protocol_run(const ProtocolParams& p, const Particle& particle, const Grid1D& grid,
                                 PotentialMode mode, const OracleOptions& opt)
{
    check_oracle_params(p, opt);
    grid.validate();
    const double m = particle.mass;
    const std::size_t n = grid.n;
    const double dx = grid.dx();
    auto V = potentials(p, m, mode, opt.wavelength);

    std::vector<double> xs = grid.points(), k2(n), mask(n, 1.0);
    const double dk = 2.0 * pi / (static_cast<double>(n) * dx);
    for (std::size_t j = 0; j < n; ++j) {
        double kj = (j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n)) * dk;
        k2[j] = kj * kj;
    }
    const std::size_t guard = std::max<std::size_t>(1, static_cast<std::size_t>(opt.guard_fraction * n));
    for (std::size_t i = 0; i < guard; ++i) {
        double d = 1.0 - static_cast<double>(i) / static_cast<double>(guard); // 1 at the edge
        double c = std::pow(std::cos(0.5 * pi * d), 8);
        mask[i] = c;
        mask[n - 1 - i] = c;
    }

    OracleRun run;
    std::vector<cplx> psi(n);
    const double xzp = zero_point_motion(m, p.omega0);
    const double amp = std::pow(2.0 * pi * xzp * xzp, -0.25);
    for (std::size_t i = 0; i < n; ++i)
        psi[i] = amp * std::exp(-xs[i] * xs[i] / (4.0 * xzp * xzp));
    Fft fft(psi);

    double t = 0, norm_prev = 0;
    for (auto& a : psi)
        norm_prev += std::norm(a);
    norm_prev *= dx;
    double boundary_max = 0;

    auto absorb = [&]() {
        double total = 0, in_guard = 0, lost = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = std::norm(psi[i]);
            total += w;
            if (mask[i] < 1.0) {
                in_guard += w;
                lost += (1.0 - mask[i] * mask[i]) * w;
                psi[i] *= mask[i];
            }
        }
        total *= dx;
        in_guard *= dx;
        lost *= dx;
        run.max_norm_drift = std::max(run.max_norm_drift, std::fabs(total - norm_prev));
        boundary_max = std::max(boundary_max, in_guard);
        run.leakage += lost;
        norm_prev = total - lost;
    };
    std::vector<cplx> kin_phase(n);
    double kin_dt = -1;
    auto kinetic = [&](double dt) {
        if (dt != kin_dt) {
            const double c = hbar * dt / (2.0 * m);
            const double inv_n = 1.0 / static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j)
                kin_phase[j] = std::polar(inv_n, -c * k2[j]);
            kin_dt = dt;
        }
        fft.forward(psi);
        for (std::size_t j = 0; j < n; ++j)
            psi[j] *= kin_phase[j];
        fft.backward(psi);
    };
    auto potential = [&](const PotentialFn& v, double dt) {
        for (std::size_t i = 0; i < n; ++i)
            psi[i] *= std::polar(1.0, -v(xs[i]) * dt / hbar);
    };
    auto strang = [&](const PotentialFn& v, double T, double omega) {
        if (T <= 0)
            return;
        int steps = std::max(1, static_cast<int>(std::ceil(omega * T / opt.omega_dt)));
        double dt = T / steps;
        std::vector<cplx> half(n);
        for (std::size_t i = 0; i < n; ++i)
            half[i] = std::polar(1.0, -v(xs[i]) * dt / (2.0 * hbar));
        for (int s = 0; s < steps; ++s) {
            for (std::size_t i = 0; i < n; ++i)
                psi[i] *= half[i];
            kinetic(dt);
            for (std::size_t i = 0; i < n; ++i)
                psi[i] *= half[i];
            absorb();
        }
        t += T;
    };
    auto free_flight = [&](double T) {
        if (T <= 0)
            return;
        kinetic(T);
        absorb();
        t += T;
    };
    auto check = [&](int step) {
        if (boundary_max > opt.max_boundary || run.leakage > opt.max_leakage) {
            std::ostringstream s;
            s << "grid insufficient: after step " << step << " boundary probability " << boundary_max
              << ", leakage " << run.leakage;
            throw GridError(s.str());
        }
    };
    auto snapshot = [&](int step) { run.frames.push_back({grid, psi, t, step}); };

    snapshot(-1);
    strang(V.step0, opt.step0_time, p.omega0);
    check(0);
    snapshot(0);
    if (opt.last_step >= 1) {
        free_flight(p.tau1);
        check(1);
        snapshot(1);
    }
    if (opt.last_step >= 2) {
        auto env = classical_envelope(p, m, V, 2);
        double pot = 0;
        for (int i = -64; i <= 64; ++i)
            pot = std::max(pot, std::fabs(V.step2(env.x_pulse * i / 64.0)));
        const double kin = env.p_pulse * env.p_pulse / (2.0 * m);
        run.pulse_as_phase = !opt.force_full_pulse && kin < opt.short_pulse_ratio * pot;
        if (run.pulse_as_phase) {
            potential(V.step2, p.tau2);
            absorb();
            t += p.tau2;
        } else {
            strang(V.step2, p.tau2, p.omega_p);
        }
        check(2);
        snapshot(2);
    }
    if (opt.last_step >= 3) {
        free_flight(p.tau3);
        check(3);
        snapshot(3);
    }
    if (opt.last_step >= 4) {
        strang(V.step4, p.tau4, p.omega4);
        check(4);
        snapshot(4);
    }
    return run;
}

WavefunctionFrame propagate_protocol(const ProtocolParams& p, const Particle& particle, const Grid1D& grid,
                                     PotentialMode mode, const OracleOptions& opt)
{
    auto run = propagate_protocol_run(p, particle, grid, mode, opt);
    return run.frames.back();
}

void write_frame_csv(std::ostream& out, const WavefunctionFrame& f)
{
    out << "# wavefunction frame after step " << f.step << ", t = " << f.time << " s\n";
    out << "# x: m; psi: m^-1/2; density: 1/m\n";
    out << "x_m,re_psi,im_psi,density\n";
    out << std::setprecision(12);
    for (std::size_t i = 0; i < f.psi.size(); ++i)
        out << f.grid.x(i) << "," << f.psi[i].real() << "," << f.psi[i].imag() << "," << std::norm(f.psi[i])
            << "\n";
}

} // namespace pf
