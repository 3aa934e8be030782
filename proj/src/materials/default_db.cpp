#include "materials/materials.hpp"

namespace fluxtorque::materials {

// Calibration defaults. The InSb entry uses literature-typical n-doped
// parameters (Palik-style); particle entries are single-phonon Lorentz fits
// to handbook data. All values are overridable through a user database file.
const char* default_material_db_json() {
  return R"JSON({
  "substrates": {
    "InSb-n-doped": {
      "eps_inf": 15.7,
      "carrier_density_m3": 1.07e23,
      "effective_mass_ratio": 0.022,
      "drude_damping_rad_s": 1.0e12,
      "phonons": [
        { "strength": 2.203, "resonance_rad_s": 3.39e13, "damping_rad_s": 5.65e11 }
      ],
      "beta_m_s": 6.0e5,
      "temperature_K": 300.0
    }
  },
  "particles": {
    "NaCl": {
      "radius_m": 2.0e-7,
      "eps_inf": 2.25,
      "oscillators": [
        { "strength": 3.65, "resonance_rad_s": 3.09e13, "damping_rad_s": 5.0e11 }
      ],
      "mass_density_kg_m3": 2165.0,
      "temperature_K": 300.0
    },
    "AgBr": {
      "radius_m": 2.0e-7,
      "eps_inf": 4.68,
      "oscillators": [
        { "strength": 7.72, "resonance_rad_s": 1.50e13, "damping_rad_s": 7.5e11 }
      ],
      "mass_density_kg_m3": 6470.0,
      "temperature_K": 300.0
    },
    "PbTe": {
      "radius_m": 2.0e-7,
      "eps_inf": 36.9,
      "oscillators": [
        { "strength": 367.0, "resonance_rad_s": 6.03e12, "damping_rad_s": 6.0e11 }
      ],
      "mass_density_kg_m3": 8164.0,
      "temperature_K": 300.0
    },
    "CdTe": {
      "radius_m": 2.0e-7,
      "eps_inf": 7.1,
      "oscillators": [
        { "strength": 3.1, "resonance_rad_s": 2.66e13, "damping_rad_s": 4.0e11 }
      ],
      "mass_density_kg_m3": 5850.0,
      "temperature_K": 300.0
    },
    "AgCl": {
      "radius_m": 2.0e-7,
      "eps_inf": 3.97,
      "oscillators": [
        { "strength": 7.17, "resonance_rad_s": 2.00e13, "damping_rad_s": 6.0e11 }
      ],
      "mass_density_kg_m3": 5560.0,
      "temperature_K": 300.0
    },
    "ZnSe": {
      "radius_m": 2.0e-7,
      "eps_inf": 6.3,
      "oscillators": [
        { "strength": 2.8, "resonance_rad_s": 3.86e13, "damping_rad_s": 3.0e11 }
      ],
      "mass_density_kg_m3": 5270.0,
      "temperature_K": 300.0
    },
    "InAs-undoped": {
      "radius_m": 2.0e-7,
      "eps_inf": 12.25,
      "oscillators": [
        { "strength": 2.9, "resonance_rad_s": 4.12e13, "damping_rad_s": 5.0e11 }
      ],
      "mass_density_kg_m3": 5670.0,
      "temperature_K": 300.0
    }
  }
})JSON";
}

}  // namespace fluxtorque::materials
