#include "materials/materials.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace fluxtorque::materials {

namespace {

using nlohmann::json;
namespace cn = fluxtorque::constants;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& b) {
  Eigen::Matrix3d m;
  m << 0, -b.z(), b.y(), b.z(), 0, -b.x(), -b.y(), b.x(), 0;
  return m;
}

Complex lorentz_sum(double eps_inf, const std::vector<PhononTerm>& terms, double omega) {
  Complex eps(eps_inf, 0.0);
  for (const auto& t : terms) {
    eps += t.strength * t.resonance * t.resonance /
           Complex(t.resonance * t.resonance - omega * omega, -t.damping * omega);
  }
  return eps;
}

}  // namespace

void GyrotropicModel::validate() const {
  require(eps_inf > 0, "GyrotropicModel.eps_inf must be > 0");
  require(plasma_freq >= 0, "GyrotropicModel.plasma_freq must be >= 0");
  require(drude_damping >= 0, "GyrotropicModel.drude_damping must be >= 0");
  require(cyclotron_freq >= 0, "GyrotropicModel.cyclotron_freq must be >= 0");
  for (const auto& t : phonons) {
    require(t.damping >= 0, "GyrotropicModel.phonons[].damping must be >= 0");
    require(t.resonance > 0, "GyrotropicModel.phonons[].resonance must be > 0");
  }
  require(std::abs(b_direction.norm() - 1.0) <= 1e-12,
          "GyrotropicModel.b_direction must have unit norm (tolerance 1e-12)");
}

void ParticleSpec::validate() const {
  require(radius > 0, "ParticleSpec.radius must be > 0");
  require(mass_density > 0, "ParticleSpec.mass_density must be > 0");
  require(eps_inf > 0, "ParticleSpec.eps_inf must be > 0");
  require(temperature >= 0, "ParticleSpec.temperature must be >= 0");
  for (const auto& t : oscillators) {
    require(t.damping >= 0, "ParticleSpec.oscillators[].damping must be >= 0");
    require(t.resonance > 0, "ParticleSpec.oscillators[].resonance must be > 0");
    require(t.strength >= 0, "ParticleSpec.oscillators[].strength must be >= 0");
  }
}

void SubstrateRecord::validate() const {
  require(eps_inf > 0, "SubstrateRecord.eps_inf must be > 0");
  require(carrier_density >= 0, "SubstrateRecord.carrier_density must be >= 0");
  require(effective_mass_ratio > 0, "SubstrateRecord.effective_mass_ratio must be > 0");
  require(drude_damping >= 0, "SubstrateRecord.drude_damping must be >= 0");
  require(beta >= 0, "SubstrateRecord.beta must be >= 0");
  require(temperature >= 0, "SubstrateRecord.temperature must be >= 0");
  for (const auto& t : phonons) {
    require(t.damping >= 0, "SubstrateRecord.phonons[].damping must be >= 0");
    require(t.resonance > 0, "SubstrateRecord.phonons[].resonance must be > 0");
  }
}

double SubstrateRecord::plasma_freq() const {
  double m_eff = effective_mass_ratio * cn::m_electron;
  return std::sqrt(carrier_density * cn::e_charge * cn::e_charge / (cn::eps0 * m_eff));
}

Substrate make_substrate(const SubstrateRecord& rec, const Eigen::Vector3d& b_field,
                         ResponseModel response) {
  rec.validate();
  Substrate s;
  s.model.eps_inf = rec.eps_inf;
  s.model.plasma_freq = rec.plasma_freq();
  s.model.drude_damping = rec.drude_damping;
  s.model.phonons = rec.phonons;
  s.model.beta = rec.beta;
  s.response = response;
  s.temperature = rec.temperature;
  double b_mag = b_field.norm();
  if (b_mag > 0) {
    s.model.cyclotron_freq =
        cn::e_charge * b_mag / (rec.effective_mass_ratio * cn::m_electron);
    s.model.b_direction = b_field / b_mag;
  } else {
    s.model.cyclotron_freq = 0.0;
    s.model.b_direction = Eigen::Vector3d::UnitZ();
  }
  s.model.validate();
  return s;
}

Eigen::Matrix3cd epsilon_substrate(const GyrotropicModel& model, double omega) {
  require(omega > 0, "epsilon_substrate: omega must be > 0");
  model.validate();
  const Complex wt(omega, model.drude_damping);  // omega + i gamma
  const double wc = model.cyclotron_freq;
  const double wp2 = model.plasma_freq * model.plasma_freq;
  Complex eps_bg = lorentz_sum(model.eps_inf, model.phonons, omega);
  if (wc == 0.0) {
    // unmagnetized: exactly scalar
    return (eps_bg - wp2 / (omega * wt)) * Eigen::Matrix3cd::Identity();
  }
  const Complex denom = omega * (wt * wt - wc * wc);
  Complex eps_perp = -wp2 * wt / denom;               // transverse Drude
  Complex eps_par = -wp2 / (omega * wt);              // along-B Drude
  Complex gyro = wp2 * wc / denom;                    // off-diagonal magnitude

  const Eigen::Vector3d& b = model.b_direction;
  Eigen::Matrix3cd eps = Eigen::Matrix3cd::Zero();
  Eigen::Matrix3d bb = b * b.transpose();
  eps += (eps_bg + eps_perp) * (Eigen::Matrix3d::Identity() - bb).cast<Complex>();
  eps += (eps_bg + eps_par) * bb.cast<Complex>();
  eps -= Complex(0, 1) * gyro * cross_matrix(b).cast<Complex>();
  return eps;
}

Complex epsilon_particle(const ParticleSpec& spec, double omega) {
  require(omega > 0, "epsilon_particle: omega must be > 0");
  return lorentz_sum(spec.eps_inf, spec.oscillators, omega);
}

Complex polarizability(const ParticleSpec& spec, double omega) {
  Complex eps = epsilon_particle(spec, omega);
  if (std::abs(eps + 2.0) < 1e-12) {
    throw SingularityError("polarizability: epsilon within 1e-12 of the Frohlich pole eps = -2");
  }
  double r3 = spec.radius * spec.radius * spec.radius;
  return 4.0 * cn::pi * r3 * (eps - 1.0) / (eps + 2.0);
}

const SubstrateRecord& MaterialDb::substrate(const std::string& name) const {
  auto it = substrates.find(name);
  if (it == substrates.end()) throw ConfigError("unknown substrate material: " + name);
  return it->second;
}

const ParticleSpec& MaterialDb::particle(const std::string& name) const {
  auto it = particles.find(name);
  if (it == particles.end()) throw ConfigError("unknown particle material: " + name);
  return it->second;
}

namespace {

std::vector<PhononTerm> parse_terms(const json& j, const std::string& where) {
  std::vector<PhononTerm> out;
  for (const auto& t : j) {
    PhononTerm p;
    p.strength = t.at("strength").get<double>();
    p.resonance = t.at("resonance_rad_s").get<double>();
    p.damping = t.at("damping_rad_s").get<double>();
    if (p.damping < 0) throw ConfigError(where + ".damping_rad_s must be >= 0");
    out.push_back(p);
  }
  return out;
}

json terms_to_json(const std::vector<PhononTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) {
    arr.push_back({{"strength", t.strength},
                   {"resonance_rad_s", t.resonance},
                   {"damping_rad_s", t.damping}});
  }
  return arr;
}

}  // namespace

MaterialDb parse_material_db(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("material db: invalid JSON: ") + e.what());
  }
  MaterialDb db;
  if (j.contains("substrates")) {
    for (auto& [name, js] : j.at("substrates").items()) {
      SubstrateRecord r;
      const std::string where = "substrates." + name;
      try {
        r.eps_inf = js.at("eps_inf").get<double>();
        r.carrier_density = js.at("carrier_density_m3").get<double>();
        r.effective_mass_ratio = js.at("effective_mass_ratio").get<double>();
        r.drude_damping = js.at("drude_damping_rad_s").get<double>();
        if (js.contains("phonons")) r.phonons = parse_terms(js.at("phonons"), where + ".phonons");
        if (js.contains("beta_m_s")) r.beta = js.at("beta_m_s").get<double>();
        if (js.contains("temperature_K")) r.temperature = js.at("temperature_K").get<double>();
      } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
      }
      try {
        r.validate();
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      db.substrates.emplace(name, std::move(r));
    }
  }
  if (j.contains("particles")) {
    for (auto& [name, jp] : j.at("particles").items()) {
      ParticleSpec p;
      const std::string where = "particles." + name;
      try {
        p.radius = jp.at("radius_m").get<double>();
        p.eps_inf = jp.at("eps_inf").get<double>();
        if (jp.contains("oscillators"))
          p.oscillators = parse_terms(jp.at("oscillators"), where + ".oscillators");
        p.mass_density = jp.at("mass_density_kg_m3").get<double>();
        if (jp.contains("temperature_K")) p.temperature = jp.at("temperature_K").get<double>();
      } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
      }
      try {
        p.validate();
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      db.particles.emplace(name, std::move(p));
    }
  }
  return db;
}

MaterialDb load_material_db(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("material db: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_material_db(ss.str());
}

std::string serialize_material_db(const MaterialDb& db) {
  json j;
  j["substrates"] = json::object();
  j["particles"] = json::object();
  for (const auto& [name, r] : db.substrates) {
    json js = {{"eps_inf", r.eps_inf},
               {"carrier_density_m3", r.carrier_density},
               {"effective_mass_ratio", r.effective_mass_ratio},
               {"drude_damping_rad_s", r.drude_damping},
               {"phonons", terms_to_json(r.phonons)},
               {"beta_m_s", r.beta},
               {"temperature_K", r.temperature}};
    j["substrates"][name] = js;
  }
  for (const auto& [name, p] : db.particles) {
    json jp = {{"radius_m", p.radius},
               {"eps_inf", p.eps_inf},
               {"oscillators", terms_to_json(p.oscillators)},
               {"mass_density_kg_m3", p.mass_density},
               {"temperature_K", p.temperature}};
    j["particles"][name] = jp;
  }
  return j.dump(2) + "\n";
}

void save_material_db(const MaterialDb& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("material db: cannot write " + path);
  out << serialize_material_db(db);
}

const MaterialDb& default_material_db() {
  static const MaterialDb db = parse_material_db(default_material_db_json());
  return db;
}

}  // namespace fluxtorque::materials
