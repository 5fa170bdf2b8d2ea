#include "pulsefringe/environment/thermal.hpp"
#include "pulsefringe/core/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace pf {

double steady_temperature(const BlackBodyModel& bb, double T_e, double q)
{
    require(T_e > 0, "steady_temperature: T_e must be positive");
    require(q >= 0, "steady_temperature: absorbed power must be non-negative");
    if (q == 0)
        return T_e;
    const double target = bb.p_bb(T_e) + q;
    auto g = [&](double T) { return bb.p_bb(T) - target; };
    double lo = T_e, hi = T_e;
    for (int i = 0; i < 200; ++i) {
        double next = hi * 1.25;
        if (!bb.covers(next)) {
            if (bb.has_table() && hi < bb.table_max() && bb.covers(bb.table_max()))
                next = bb.table_max();
            else {
                std::ostringstream s;
                s << "black-body model does not cover T = " << next << " K needed for the steady state";
                throw TableRangeError(s.str());
            }
        }
        lo = hi;
        hi = next;
        if (g(hi) >= 0)
            break;
        if (hi == bb.table_max() && g(hi) < 0) {
            std::ostringstream s;
            s << "steady state lies above the black-body table maximum " << hi << " K";
            throw TableRangeError(s.str());
        }
    }
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(48);
    auto r = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
    return 0.5 * (r.first + r.second);
}

double steady_state_continuous(const Particle& particle, const BlackBodyModel& bb, double T_e, double p_abs)
{
    return steady_temperature(bb, T_e, p_abs / particle.volume);
}

double steady_state_duty_averaged(const Particle& particle, const BlackBodyModel& bb, double T_e,
                                  const DutyCycle& duty)
{
    double f = duty.tau0 / (duty.tau0 + duty.tau_f);
    return steady_temperature(bb, T_e, f * duty.p_abs / particle.volume);
}

ThermalHistory internal_temperature_evolution(const Particle& particle, const BlackBodyModel& bb, double T_e,
                                              const DutyCycle& duty, int n_runs, double T_start,
                                              const ThermalOptions& opt)
{
    namespace ode = boost::numeric::odeint;
    require(n_runs >= 0, "n_runs must be non-negative");
    require(duty.tau0 >= 0 && duty.tau_f >= 0 && duty.tau0 + duty.tau_f > 0, "duty cycle needs positive length");

    ThermalHistory h;
    h.T_start = T_start > 0 ? T_start : steady_state_continuous(particle, bb, T_e, duty.p_abs);
    const double heat_cap = particle.material.density * particle.material.specific_heat; // per volume
    const double p_env = bb.p_bb(T_e);

    double t = 0, T = h.T_start;
    h.time.push_back(t);
    h.T_i.push_back(T);

    auto stepper = ode::make_controlled(opt.rtol * 1e-2, opt.rtol, ode::runge_kutta_dopri5<double>());
    auto segment = [&](double q, double length) {
        if (length <= 0)
            return;
        auto rhs = [&](const double& y, double& dy, double) { dy = (q + p_env - bb.p_bb(y)) / heat_cap; };
        int n = std::max(1, opt.samples_per_segment);
        double dt = length / n;
        for (int i = 0; i < n; ++i) {
            ode::integrate_adaptive(stepper, rhs, T, t, t + dt, dt / 4);
            t += dt;
            h.time.push_back(t);
            h.T_i.push_back(T);
        }
    };

    const double q_on = duty.p_abs / particle.volume;
    double prev_end = T;
    for (int run = 1; run <= n_runs; ++run) {
        std::size_t first = h.time.size() - 1;
        segment(0.0, duty.tau_f);
        segment(q_on, duty.tau0);
        h.cycle_end_T.push_back(T);
        if (h.runs_to_steady < 0 && std::fabs(T - prev_end) < opt.steady_tolerance)
            h.runs_to_steady = run;
        prev_end = T;

        // time average of the run by trapezoid over the recorded samples
        double area = 0, tmin = h.T_i[first], tmax = h.T_i[first];
        for (std::size_t i = first + 1; i < h.time.size(); ++i) {
            area += 0.5 * (h.time[i] - h.time[i - 1]) * (h.T_i[i] + h.T_i[i - 1]);
            tmin = std::min(tmin, h.T_i[i]);
            tmax = std::max(tmax, h.T_i[i]);
        }
        h.T_steady = area / (h.time.back() - h.time[first]);
        h.T_min_last = tmin;
        h.T_max_last = tmax;
        if (opt.stop_at_steady && h.runs_to_steady > 0)
            break;
    }
    return h;
}

DutyCycleOutcome duty_cycle_steady_state(const Particle& particle, const BlackBodyModel& bb, double T_e,
                                         double omega0, double wavelength, double tau0, double tau_f, int max_runs)
{
    DutyCycleOutcome o;
    o.p_abs = absorbed_power(particle, omega0, wavelength);
    DutyCycle duty{o.p_abs, tau0, tau_f};
    o.T_ss = steady_state_continuous(particle, bb, T_e, o.p_abs);
    o.T_averaged = steady_state_duty_averaged(particle, bb, T_e, duty);
    ThermalOptions opt;
    opt.stop_at_steady = true;
    opt.samples_per_segment = 4;
    auto h = internal_temperature_evolution(particle, bb, T_e, duty, max_runs, o.T_ss, opt);
    o.T_inf = h.T_steady;
    o.runs_to_steady = h.runs_to_steady;
    return o;
}

void write_thermal_csv(std::ostream& out, const ThermalHistory& h)
{
    out << "# time: s since the first run started; T_i: internal temperature [K]\n";
    out << "# T_start_K = " << h.T_start << "\n";
    out << "# runs_to_steady = " << h.runs_to_steady << "\n";
    out << "# T_steady_K = " << h.T_steady << "\n";
    out << "time_s,T_i_K\n";
    out << std::setprecision(12);
    for (std::size_t i = 0; i < h.time.size(); ++i)
        out << h.time[i] << "," << h.T_i[i] << "\n";
}

} // namespace pf
