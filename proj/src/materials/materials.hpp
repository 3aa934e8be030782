#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace fluxtorque::materials {

using Complex = std::complex<double>;

struct PhononTerm {
  double strength = 0.0;   // dimensionless oscillator strength
  double resonance = 0.0;  // rad/s
  double damping = 0.0;    // rad/s
};

// Magnetized Drude + phonon dielectric model of the substrate.
// All public operations take omega > 0; negative frequencies enter only
// through the reality condition eps(-w) = conj(eps(w)).
struct GyrotropicModel {
  double eps_inf = 1.0;
  double plasma_freq = 0.0;     // rad/s, unnormalized: wp^2 = n e^2 / (eps0 m*)
  double drude_damping = 0.0;   // rad/s
  double cyclotron_freq = 0.0;  // rad/s, e|B|/m*, derived at construction
  std::vector<PhononTerm> phonons;
  Eigen::Vector3d b_direction = Eigen::Vector3d::UnitZ();  // unit vector

  void validate() const;  // throws ConfigError
};

// Adds the hydrodynamic pressure-term velocity; beta = 0 reduces the
// reflection solution to the local model.
struct HydrodynamicModel : GyrotropicModel {
  double beta = 0.0;  // m/s
};

// Lorentz-oscillator dielectric sphere in the dipolar approximation.
struct ParticleSpec {
  double radius = 0.0;        // m
  double eps_inf = 1.0;
  std::vector<PhononTerm> oscillators;
  double mass_density = 0.0;  // kg/m^3
  double temperature = 300.0; // K

  void validate() const;
};

enum class ResponseModel { local, nonlocal };

// Database record for a substrate material; the magnetic field is applied at
// substrate construction so that B sweeps stay consistent (cyclotron
// frequency always derived from e|B|/m*).
struct SubstrateRecord {
  double eps_inf = 1.0;
  double carrier_density = 0.0;       // 1/m^3
  double effective_mass_ratio = 1.0;  // m*/m_e
  double drude_damping = 0.0;         // rad/s
  std::vector<PhononTerm> phonons;
  double beta = 0.0;                  // m/s, hydrodynamic default
  double temperature = 300.0;         // K, default environment temperature

  void validate() const;
  double plasma_freq() const;  // rad/s
};

// Runtime substrate: concrete model with the field applied plus the chosen
// response (local gyrotropic or nonlocal hydrodynamic).
struct Substrate {
  HydrodynamicModel model;
  ResponseModel response = ResponseModel::nonlocal;
  double temperature = 300.0;  // K
};

Substrate make_substrate(const SubstrateRecord& rec, const Eigen::Vector3d& b_field_tesla,
                         ResponseModel response);

// eps_jk(omega) in lab axes, gyrotropy axis along b_direction.
Eigen::Matrix3cd epsilon_substrate(const GyrotropicModel& model, double omega);

Complex epsilon_particle(const ParticleSpec& spec, double omega);

// Clausius-Mossotti dipolar polarizability, m^3.
Complex polarizability(const ParticleSpec& spec, double omega);

struct MaterialDb {
  std::map<std::string, SubstrateRecord> substrates;
  std::map<std::string, ParticleSpec> particles;

  const SubstrateRecord& substrate(const std::string& name) const;
  const ParticleSpec& particle(const std::string& name) const;
};

MaterialDb load_material_db(const std::string& path);
MaterialDb parse_material_db(const std::string& json_text);
std::string serialize_material_db(const MaterialDb& db);  // canonical form
void save_material_db(const MaterialDb& db, const std::string& path);

// Built-in database (InSb substrate + the particle library); also the
// canonical example shipped in data/materials.json.
const MaterialDb& default_material_db();
const char* default_material_db_json();

}  // namespace fluxtorque::materials
