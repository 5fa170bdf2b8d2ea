#pragma once

#include <complex>
#include <string>

namespace pf {

class KeyValue;

struct Material {
    double density = 1850.0;             // kg/m^3
    double specific_heat = 700.0;        // J/(kg K)
    double refractive_index_re = 1.43;
    double refractive_index_im = 2.46e-9;
    double wavelength = 1550e-9;         // m

    static Material silica() { return {}; }

    std::complex<double> epsilon_r() const;
    // (eps - 1)/(eps + 2)
    std::complex<double> clausius_mossotti() const;
    void validate() const;
};

// Keys: density, specific_heat, refractive_index_re, refractive_index_im,
// wavelength. Missing keys keep the silica defaults.
Material material_from_keyvalue(const KeyValue& kv);
Material load_material(const std::string& path);

struct Particle {
    double radius = 0;
    Material material;
    double mass = 0;
    double volume = 0;
    double re_pol_factor = 0;
    double beta_abs = 0;
};

Particle particle_from_radius(double radius, const Material& material = Material::silica());

double zero_point_motion(double mass, double omega0);

} // namespace pf
