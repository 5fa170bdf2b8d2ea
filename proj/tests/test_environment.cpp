#include "support.hpp"

#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/environment/blackbody.hpp"
#include "pulsefringe/environment/gas.hpp"
#include "pulsefringe/environment/thermal.hpp"

#include <doctest.h>

#include <sstream>

using namespace pf;
using pf::test::rel;

namespace {

GasModel hydrogen(double pressure_pa)
{
    GasModel g;
    g.gas_mass = 2 * Constants::amu;
    g.temperature = 300;
    g.pressure = pressure_pa;
    return g;
}

BlackBodyModel placeholder()
{
    return BlackBodyModel::thermal_dipole(0.1, 50, 1000, 60);
}

} // namespace

TEST_CASE("gas kinetics")
{
    auto g = hydrogen(1.4e-10 * pa_per_mbar);
    CHECK(rel(mean_gas_speed(g), 1782.10290968) < 1e-9);
    CHECK(rel(gas_collision_rate(g, 50e-9), 148.62642502) < 1e-8);
    CHECK(gas_collision_rate(g, 50e-9) == doctest::Approx(150).epsilon(0.02));
    CHECK(rel(gas_collision_rate(hydrogen(2.8e-8), 50e-9), 2 * gas_collision_rate(g, 50e-9)) < 1e-14);
    CHECK(rel(gas_collision_rate(g, 100e-9), 4 * gas_collision_rate(g, 50e-9)) < 1e-14);
    CHECK_THROWS_AS(gas_collision_rate(hydrogen(0), 50e-9), InvalidArgument);
}

TEST_CASE("no-collision probability")
{
    auto g = hydrogen(1.4e-8);
    CHECK(no_collision_probability(g, 50e-9, 0, true) == 1);
    double full = no_collision_probability(g, 50e-9, 2.1e-3, false);
    double axis = no_collision_probability(g, 50e-9, 2.1e-3, true);
    CHECK(rel(std::log(full) / std::log(axis), 3.0) < 1e-14);
    CHECK(axis == doctest::Approx(0.9).epsilon(0.01));
}

TEST_CASE("pressure requirement")
{
    auto g = hydrogen(1.0);
    double P = pressure_for_quantile(g, 50e-9, 2.1e-3, 0.9);
    CHECK(rel(P / pa_per_mbar, 1.41778981e-10) < 1e-7);
    CHECK(P / pa_per_mbar == doctest::Approx(1.4e-10).epsilon(0.05));

    auto at = hydrogen(P);
    CHECK(rel(no_collision_probability(at, 50e-9, 2.1e-3, true), 0.9) < 1e-12);

    CHECK(rel(pressure_for_quantile(g, 50e-9, 2.1e-3, 1 - 1e-12), P * 1e-12 / -std::log(0.9)) < 1e-3);
    CHECK(rel(pressure_for_quantile(g, 100e-9, 4.2e-3, 0.9), P / 8) < 1e-13);
    CHECK_THROWS_AS(pressure_for_quantile(g, 50e-9, 2.1e-3, 1.0), InvalidArgument);
}

TEST_CASE("low-temperature black-body fits")
{
    double prev_p = 0, prev_g = 0;
    for (double T = 3; T <= 100; T += 0.5) {
        double p = pbb_lowT(T), g = gammabb_lowT(T);
        CHECK(std::isfinite(p));
        CHECK(std::isfinite(g));
        CHECK(p > prev_p);
        CHECK(g > prev_g);
        prev_p = p;
        prev_g = g;
    }
    // the emission fit turns over just below 3 K
    CHECK(pbb_lowT(1.5) > pbb_lowT(2.5));
    CHECK(gammabb_lowT_overestimates(50));
    CHECK_THROWS_AS(pbb_lowT(0), InvalidArgument);
}

TEST_CASE("black-body table ingestion and interpolation")
{
    std::istringstream in("# provenance: unit test\n"
                          "T_K,p_bb_W_per_m3,gamma_bb_per_m5s\n"
                          "100,1e3,1e20\n200,1.6e4,6.4e21\n400,2.56e5,4.096e23\n");
    auto bb = BlackBodyModel::from_csv(in, "mem");
    CHECK(bb.provenance() == " unit test");
    CHECK_FALSE(bb.placeholder());
    for (auto& e : bb.table()) {
        CHECK(bb.p_bb(e.T) == e.p_bb);
        CHECK(bb.gamma_bb(e.T) == e.gamma_bb);
    }
    // power laws are exact under log-log interpolation
    CHECK(rel(bb.p_bb(300), 1e3 * std::pow(3.0, 4)) < 1e-12);
    CHECK(rel(bb.gamma_bb(150), 1e20 * std::pow(1.5, 6)) < 1e-12);
    CHECK_THROWS_AS(bb.p_bb(500), TableRangeError);
    CHECK(bb.p_bb(50) == pbb_lowT(50));

    std::istringstream unsorted("T_K,p_bb_W_per_m3,gamma_bb_per_m5s\n200,1,1\n100,1,1\n");
    CHECK_THROWS_AS(BlackBodyModel::from_csv(unsorted, "mem"), InvalidArgument);
    std::istringstream header("T,p,g\n100,1,1\n");
    CHECK_THROWS_AS(BlackBodyModel::from_csv(header, "mem"), InvalidArgument);
}

TEST_CASE("out-of-range errors name the temperature")
{
    BlackBodyModel none;
    try {
        none.p_bb(300);
        FAIL("expected TableRangeError");
    } catch (const TableRangeError& e) {
        CHECK(std::string(e.what()).find("T = 300") != std::string::npos);
    }
    none.low_T_override = true;
    CHECK(none.p_bb(300) == pbb_lowT(300));
}

TEST_CASE("absorbed power")
{
    auto part = particle_from_radius(50e-9);
    double w0 = 2 * pi * 1e5;
    double P = absorbed_power(part, w0, 1550e-9);
    CHECK(P > 0);
    CHECK(rel(P, part.mass * w0 * w0 * Constants::c * part.beta_abs * 1550e-9 / (2 * pi)) < 1e-14);
    CHECK(rel(absorbed_power(part, 2 * w0, 1550e-9), 4 * P) < 1e-14);
    Material lossless;
    lossless.refractive_index_im = 0;
    CHECK(absorbed_power(particle_from_radius(50e-9, lossless), w0, 1550e-9) == 0);
}

TEST_CASE("black-body localization rate")
{
    auto bb = placeholder();
    auto part = particle_from_radius(50e-9);
    CHECK(rel(bb_localization_rate(part, bb, 300, 300), 2 * part.volume * bb.gamma_bb(300)) < 1e-14);
    double sum = part.volume * bb.gamma_bb(320) + part.volume * bb.gamma_bb(300);
    CHECK(rel(bb_localization_rate(part, bb, 320, 300), sum) < 1e-14);
    auto big = particle_from_radius(50e-9 * std::cbrt(2.0));
    CHECK(rel(bb_localization_rate(big, bb, 320, 300), 2 * bb_localization_rate(part, bb, 320, 300)) < 1e-12);
}

TEST_CASE("thermal ODE equilibrium and relaxation")
{
    auto bb = placeholder();
    auto part = particle_from_radius(50e-9);
    auto flat = internal_temperature_evolution(part, bb, 300, {0.0, 1e-3, 1e-3}, 5, 300);
    for (double T : flat.T_i)
        CHECK(T == doctest::Approx(300).epsilon(1e-12));

    auto cool = internal_temperature_evolution(part, bb, 300, {0.0, 1e-3, 1e-3}, 20, 400);
    for (std::size_t i = 1; i < cool.T_i.size(); ++i) {
        CHECK(cool.T_i[i] < cool.T_i[i - 1]);
        CHECK(cool.T_i[i] > 300);
        CHECK(cool.time[i] > cool.time[i - 1]);
    }
}

TEST_CASE("duty-cycle steady state: algebraic estimate against the ODE")
{
    auto bb = placeholder();
    auto part = particle_from_radius(50e-9);
    auto o = duty_cycle_steady_state(part, bb, 300, 2 * pi * 1e5, 1550e-9, 2e-3, 2.1e-3);
    CHECK(o.runs_to_steady > 0);
    CHECK(o.T_ss > o.T_inf);
    CHECK(o.T_inf > 300);
    CHECK(std::fabs(o.T_averaged - o.T_inf) < 0.5);

    double q = o.p_abs / part.volume;
    CHECK(rel(bb.p_bb(o.T_ss), bb.p_bb(300) + q) < 1e-10);
}

TEST_CASE("steady state beyond the table is an error")
{
    auto bb = BlackBodyModel::thermal_dipole(0.1, 50, 305, 20);
    auto part = particle_from_radius(50e-9);
    CHECK_THROWS_AS(steady_state_continuous(part, bb, 300, absorbed_power(part, 2 * pi * 1e5, 1550e-9)),
                    TableRangeError);
}
