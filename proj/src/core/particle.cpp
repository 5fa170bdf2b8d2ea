#include "pulsefringe/core/particle.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/core/keyvalue.hpp"

#include <cmath>

namespace pf {

std::complex<double> Material::epsilon_r() const
{
    std::complex<double> n(refractive_index_re, refractive_index_im);
    return n * n;
}

std::complex<double> Material::clausius_mossotti() const
{
    auto e = epsilon_r();
    return (e - 1.0) / (e + 2.0);
}

void Material::validate() const
{
    require(density > 0, "material density must be positive");
    require(specific_heat > 0, "material specific heat must be positive");
    require(refractive_index_im >= 0, "imaginary refractive index must be non-negative");
    require(wavelength > 0, "wavelength must be positive");
}

Material material_from_keyvalue(const KeyValue& kv)
{
    Material m;
    m.density = kv.number_or("density", m.density);
    m.specific_heat = kv.number_or("specific_heat", m.specific_heat);
    m.refractive_index_re = kv.number_or("refractive_index_re", m.refractive_index_re);
    m.refractive_index_im = kv.number_or("refractive_index_im", m.refractive_index_im);
    m.wavelength = kv.number_or("wavelength", m.wavelength);
    m.validate();
    return m;
}

Material load_material(const std::string& path)
{
    return material_from_keyvalue(KeyValue::load(path));
}

Particle particle_from_radius(double radius, const Material& material)
{
    require(radius > 0 && std::isfinite(radius), "particle radius must be positive");
    material.validate();
    Particle p;
    p.radius = radius;
    p.material = material;
    p.volume = 4.0 / 3.0 * pi * radius * radius * radius;
    p.mass = material.density * p.volume;
    auto cm = material.clausius_mossotti();
    p.re_pol_factor = cm.real();
    p.beta_abs = cm.imag() / cm.real();
    return p;
}

double zero_point_motion(double mass, double omega0)
{
    require(mass > 0 && omega0 > 0, "zero_point_motion: mass and omega0 must be positive");
    return std::sqrt(hbar / (2.0 * mass * omega0));
}

} // namespace pf
