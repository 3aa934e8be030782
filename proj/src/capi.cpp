#include "fluxtorque.h"

#include <cstring>
#include <string>

#include "core/errors.hpp"
#include "dispersion/dispersion.hpp"
#include "dynamics/dynamics.hpp"
#include "greens/greens.hpp"
#include "materials/materials.hpp"
#include "spectra/spectra.hpp"

namespace ft = fluxtorque;

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ft_status guarded(Fn&& fn) {
  try {
    fn();
    return FT_OK;
  } catch (const ft::DegenerateModeError& e) {
    g_last_error = e.what();
    return FT_ERR_DEGENERATE_MODE;
  } catch (const ft::SolverError& e) {
    g_last_error = e.what();
    return FT_ERR_SOLVER;
  } catch (const ft::SingularityError& e) {
    g_last_error = e.what();
    return FT_ERR_SINGULARITY;
  } catch (const ft::QuadratureError& e) {
    g_last_error = e.what();
    return FT_ERR_NONCONVERGED;
  } catch (const ft::DynamicsError& e) {
    g_last_error = e.what();
    return FT_ERR_DYNAMICS;
  } catch (const ft::ConfigError& e) {
    g_last_error = e.what();
    return FT_ERR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FT_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return FT_ERR_UNKNOWN;
  }
}

ft_status invalid(const char* msg) {
  g_last_error = msg;
  return FT_ERR_INVALID_ARGUMENT;
}

ft::quadrature::QuadConfig to_cfg(const ft_quad_opts* opts) {
  ft::quadrature::QuadConfig cfg;
  if (opts) {
    cfg.rel_tol = opts->rel_tol;
    cfg.abs_tol = opts->abs_tol;
    cfg.k_par_max_factor = opts->k_par_max_factor;
    cfg.max_subdivisions = opts->max_subdivisions;
    cfg.phi_order = opts->phi_order;
  }
  return cfg;
}

std::vector<ft::materials::PhononTerm> to_terms(const double* triples, int n) {
  std::vector<ft::materials::PhononTerm> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({triples[3 * i], triples[3 * i + 1], triples[3 * i + 2]});
  }
  return out;
}

void write_point(const ft::spectra::SpectralPoint& pt, double out[7], double err[7]) {
  out[0] = pt.P;
  out[1] = pt.F.x();
  out[2] = pt.F.y();
  out[3] = pt.F.z();
  out[4] = pt.M.x();
  out[5] = pt.M.y();
  out[6] = pt.M.z();
  if (err) {
    err[0] = pt.err_P;
    err[1] = pt.err_F.x();
    err[2] = pt.err_F.y();
    err[3] = pt.err_F.z();
    err[4] = pt.err_M.x();
    err[5] = pt.err_M.y();
    err[6] = pt.err_M.z();
  }
}

}  // namespace

struct ft_material_db {
  ft::materials::MaterialDb db;
};
struct ft_substrate {
  ft::materials::Substrate s;
};
struct ft_particle {
  ft::materials::ParticleSpec p;
};

extern "C" {

const char* ft_version(void) { return "fluxtorque 0.1.0"; }

const char* ft_last_error(void) { return g_last_error.c_str(); }

ft_status ft_db_default(ft_material_db** out) {
  if (!out) return invalid("ft_db_default: out is null");
  return guarded([&] { *out = new ft_material_db{ft::materials::default_material_db()}; });
}

ft_status ft_db_load(const char* path, ft_material_db** out) {
  if (!out || !path) return invalid("ft_db_load: null argument");
  return guarded([&] { *out = new ft_material_db{ft::materials::load_material_db(path)}; });
}

ft_status ft_db_parse(const char* json_text, ft_material_db** out) {
  if (!out || !json_text) return invalid("ft_db_parse: null argument");
  return guarded([&] { *out = new ft_material_db{ft::materials::parse_material_db(json_text)}; });
}

ft_status ft_db_save(const ft_material_db* db, const char* path) {
  if (!db || !path) return invalid("ft_db_save: null argument");
  return guarded([&] { ft::materials::save_material_db(db->db, path); });
}

ft_status ft_db_serialize(const ft_material_db* db, char** out_json) {
  if (!db || !out_json) return invalid("ft_db_serialize: null argument");
  return guarded([&] {
    std::string s = ft::materials::serialize_material_db(db->db);
    *out_json = new char[s.size() + 1];
    std::memcpy(*out_json, s.c_str(), s.size() + 1);
  });
}

void ft_string_free(char* s) { delete[] s; }

void ft_db_free(ft_material_db* db) { delete db; }

ft_status ft_db_list(const ft_material_db* db, int what, char** out_names) {
  if (!db || !out_names) return invalid("ft_db_list: null argument");
  return guarded([&] {
    std::string s;
    if (what == 0) {
      for (const auto& [name, _] : db->db.substrates) s += name + "\n";
    } else {
      for (const auto& [name, _] : db->db.particles) s += name + "\n";
    }
    *out_names = new char[s.size() + 1];
    std::memcpy(*out_names, s.c_str(), s.size() + 1);
  });
}

ft_status ft_substrate_create(const ft_material_db* db, const char* name,
                              const double b_field[3], int response, ft_substrate** out) {
  if (!db || !name || !b_field || !out) return invalid("ft_substrate_create: null argument");
  return guarded([&] {
    Eigen::Vector3d b(b_field[0], b_field[1], b_field[2]);
    auto resp = response == 0 ? ft::materials::ResponseModel::local
                              : ft::materials::ResponseModel::nonlocal;
    *out = new ft_substrate{ft::materials::make_substrate(db->db.substrate(name), b, resp)};
  });
}

ft_status ft_substrate_create_custom(double eps_inf, double carrier_density_m3,
                                     double effective_mass_ratio, double drude_damping,
                                     const double* phonon_triples, int n_phonons, double beta,
                                     const double b_field[3], int response, ft_substrate** out) {
  if (!b_field || !out || (n_phonons > 0 && !phonon_triples)) {
    return invalid("ft_substrate_create_custom: null argument");
  }
  return guarded([&] {
    ft::materials::SubstrateRecord rec;
    rec.eps_inf = eps_inf;
    rec.carrier_density = carrier_density_m3;
    rec.effective_mass_ratio = effective_mass_ratio;
    rec.drude_damping = drude_damping;
    rec.phonons = to_terms(phonon_triples, n_phonons);
    rec.beta = beta;
    Eigen::Vector3d b(b_field[0], b_field[1], b_field[2]);
    auto resp = response == 0 ? ft::materials::ResponseModel::local
                              : ft::materials::ResponseModel::nonlocal;
    *out = new ft_substrate{ft::materials::make_substrate(rec, b, resp)};
  });
}

ft_status ft_substrate_set_beta(ft_substrate* s, double beta) {
  if (!s) return invalid("ft_substrate_set_beta: null substrate");
  if (!(beta >= 0)) return invalid("ft_substrate_set_beta: beta must be >= 0");
  s->s.model.beta = beta;
  return FT_OK;
}

void ft_substrate_free(ft_substrate* s) { delete s; }

ft_status ft_particle_create(const ft_material_db* db, const char* name, ft_particle** out) {
  if (!db || !name || !out) return invalid("ft_particle_create: null argument");
  return guarded([&] { *out = new ft_particle{db->db.particle(name)}; });
}

ft_status ft_particle_create_custom(double radius, double eps_inf, const double* osc_triples,
                                    int n_osc, double mass_density, double temperature,
                                    ft_particle** out) {
  if (!out || (n_osc > 0 && !osc_triples)) return invalid("ft_particle_create_custom: null argument");
  return guarded([&] {
    ft::materials::ParticleSpec p;
    p.radius = radius;
    p.eps_inf = eps_inf;
    p.oscillators = to_terms(osc_triples, n_osc);
    p.mass_density = mass_density;
    p.temperature = temperature;
    p.validate();
    *out = new ft_particle{std::move(p)};
  });
}

ft_status ft_particle_props(const ft_particle* p, double* radius, double* mass_density,
                            double* temperature) {
  if (!p) return invalid("ft_particle_props: null particle");
  if (radius) *radius = p->p.radius;
  if (mass_density) *mass_density = p->p.mass_density;
  if (temperature) *temperature = p->p.temperature;
  return FT_OK;
}

void ft_particle_free(ft_particle* p) { delete p; }

ft_status ft_substrate_epsilon(const ft_substrate* s, double omega, double re[9], double im[9]) {
  if (!s || !re || !im) return invalid("ft_substrate_epsilon: null argument");
  return guarded([&] {
    Eigen::Matrix3cd eps = ft::materials::epsilon_substrate(s->s.model, omega);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        re[3 * r + c] = eps(r, c).real();
        im[3 * r + c] = eps(r, c).imag();
      }
    }
  });
}

ft_status ft_particle_epsilon(const ft_particle* p, double omega, double* re, double* im) {
  if (!p || !re || !im) return invalid("ft_particle_epsilon: null argument");
  return guarded([&] {
    auto eps = ft::materials::epsilon_particle(p->p, omega);
    *re = eps.real();
    *im = eps.imag();
  });
}

ft_status ft_particle_polarizability(const ft_particle* p, double omega, double* re, double* im) {
  if (!p || !re || !im) return invalid("ft_particle_polarizability: null argument");
  return guarded([&] {
    auto a = ft::materials::polarizability(p->p, omega);
    *re = a.real();
    *im = a.imag();
  });
}

ft_status ft_reflection(const ft_substrate* s, double omega, double k_par, double phi,
                        double out[8]) {
  if (!s || !out) return invalid("ft_reflection: null argument");
  return guarded([&] {
    auto mode = ft::fresnel::mode_coords(omega, k_par, phi);
    auto r = ft::fresnel::reflect(s->s, mode);
    out[0] = r.r_ss.real();
    out[1] = r.r_ss.imag();
    out[2] = r.r_sp.real();
    out[3] = r.r_sp.imag();
    out[4] = r.r_ps.real();
    out[5] = r.r_ps.imag();
    out[6] = r.r_pp.real();
    out[7] = r.r_pp.imag();
  });
}

ft_status ft_greens_reflected(const ft_substrate* s, double omega, double k_par, double phi,
                              double d, double re[9], double im[9]) {
  if (!s || !re || !im) return invalid("ft_greens_reflected: null argument");
  return guarded([&] {
    auto mode = ft::fresnel::mode_coords(omega, k_par, phi);
    auto r = ft::fresnel::reflect(s->s, mode);
    Eigen::Matrix3cd g = ft::greens::greens_reflected_integrand(r, mode, d);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        re[3 * i + j] = g(i, j).real();
        im[3 * i + j] = g(i, j).imag();
      }
    }
  });
}

ft_status ft_vacuum_ldos_factor(double omega, double* out) {
  if (!out) return invalid("ft_vacuum_ldos_factor: null out");
  return guarded([&] { *out = ft::greens::vacuum_ldos_factor(omega); });
}

double ft_theta(double omega, double T) {
  try {
    return ft::spectra::theta(omega, T);
  } catch (...) {
    return std::nan("");
  }
}

void ft_quad_opts_default(ft_quad_opts* opts) {
  if (!opts) return;
  ft::quadrature::QuadConfig cfg;
  opts->rel_tol = cfg.rel_tol;
  opts->abs_tol = cfg.abs_tol;
  opts->k_par_max_factor = cfg.k_par_max_factor;
  opts->max_subdivisions = cfg.max_subdivisions;
  opts->phi_order = cfg.phi_order;
  opts->n_jobs = 1;
}

ft_status ft_spectral_density(const ft_substrate* s, const ft_particle* p, double T_p,
                              double T_e, double d, double omega, const ft_quad_opts* opts,
                              unsigned mask, int fz_include_zero_point, double out[7],
                              double err[7]) {
  if (!s || !p || !out) return invalid("ft_spectral_density: null argument");
  return guarded([&] {
    ft::spectra::SpectraOptions so;
    so.fz_include_zero_point = fz_include_zero_point != 0;
    auto pt = ft::spectra::spectral_density(s->s, p->p, {T_p, T_e}, d, omega, to_cfg(opts),
                                            mask, so);
    write_point(pt, out, err);
  });
}

ft_status ft_spectral_density_split(const ft_substrate* s, const ft_particle* p, double T_p,
                                    double T_e, double d, double omega,
                                    const ft_quad_opts* opts, unsigned mask,
                                    int fz_include_zero_point, double out_fwd[7],
                                    double out_bwd[7]) {
  if (!s || !p || !out_fwd || !out_bwd) return invalid("ft_spectral_density_split: null argument");
  return guarded([&] {
    ft::spectra::SpectraOptions so;
    so.fz_include_zero_point = fz_include_zero_point != 0;
    auto [fwd, bwd] = ft::spectra::spectral_density_split(s->s, p->p, {T_p, T_e}, d, omega,
                                                          to_cfg(opts), mask, so);
    write_point(fwd, out_fwd, nullptr);
    write_point(bwd, out_bwd, nullptr);
  });
}

ft_status ft_photon_spin(const ft_substrate* s, double omega, double k_par, double phi, double d,
                         double out[3]) {
  if (!s || !out) return invalid("ft_photon_spin: null argument");
  return guarded([&] {
    auto mode = ft::fresnel::mode_coords(omega, k_par, phi);
    auto r = ft::fresnel::reflect(s->s, mode);
    Eigen::Vector3d spin = ft::spectra::photon_spin(r, mode, d);
    out[0] = spin.x();
    out[1] = spin.y();
    out[2] = spin.z();
  });
}

ft_status ft_rotating_torque_x(const ft_substrate* s, const ft_particle* p, double T_p,
                               double T_e, double d, double omega, double Omega,
                               const ft_quad_opts* opts, double* out) {
  if (!s || !p || !out) return invalid("ft_rotating_torque_x: null argument");
  return guarded([&] {
    *out = ft::spectra::rotating_torque_x(s->s, p->p, {T_p, T_e}, d, omega, Omega, to_cfg(opts));
  });
}

ft_status ft_totals(const ft_substrate* s, const ft_particle* p, double T_p, double T_e,
                    double d, double omega_min, double omega_max, const ft_quad_opts* opts,
                    unsigned mask, int fz_include_zero_point, double out[7], double err[7]) {
  if (!s || !p || !out) return invalid("ft_totals: null argument");
  return guarded([&] {
    ft::spectra::SpectraOptions so;
    so.fz_include_zero_point = fz_include_zero_point != 0;
    int n_jobs = opts ? opts->n_jobs : 1;
    auto t = ft::spectra::integrate_totals(s->s, p->p, {T_p, T_e}, d, omega_min, omega_max,
                                           to_cfg(opts), mask, so, n_jobs);
    out[0] = t.P;
    out[1] = t.F.x();
    out[2] = t.F.y();
    out[3] = t.F.z();
    out[4] = t.M.x();
    out[5] = t.M.y();
    out[6] = t.M.z();
    if (err) {
      err[0] = t.err_P;
      err[1] = t.err_F.x();
      err[2] = t.err_F.y();
      err[3] = t.err_F.z();
      err[4] = t.err_M.x();
      err[5] = t.err_M.y();
      err[6] = t.err_M.z();
    }
  });
}

ft_status ft_seed_frequencies(const ft_substrate* s, const ft_particle* p, double* out,
                              int capacity, int* count) {
  if (!s || !p || !out || !count) return invalid("ft_seed_frequencies: null argument");
  return guarded([&] {
    auto seeds = ft::dispersion::seed_frequencies(s->s, p->p);
    *count = static_cast<int>(seeds.size());
    for (int i = 0; i < *count && i < capacity; ++i) out[i] = seeds[i];
  });
}

ft_status ft_trace_branch(const ft_substrate* s, double phi, double k_min, double k_max,
                          int n_points, int response, double* out_omega, int* out_branch_kind,
                          int* out_count) {
  if (!s || !out_omega || !out_branch_kind || !out_count) {
    return invalid("ft_trace_branch: null argument");
  }
  return guarded([&] {
    auto resp = response == 0 ? ft::materials::ResponseModel::local
                              : ft::materials::ResponseModel::nonlocal;
    auto pts = ft::dispersion::trace_branch(s->s, phi, k_min, k_max, n_points, resp);
    int n = 0;
    for (const auto& bp : pts) {
      if (bp.lost) break;
      out_omega[n] = bp.omega;
      out_branch_kind[n] = bp.branch == ft::dispersion::Branch::SPP ? 0 : 1;
      ++n;
    }
    *out_count = n;
  });
}

ft_status ft_damping_coefficient(double radius, double pressure_pa, double molecule_mass,
                                 double temperature, double* out) {
  if (!out) return invalid("ft_damping_coefficient: null out");
  return guarded([&] {
    ft::dynamics::GasEnvironment gas{pressure_pa, molecule_mass, temperature};
    *out = ft::dynamics::damping_coefficient(radius, gas);
  });
}

ft_status ft_moment_of_inertia(const ft_particle* p, double* out) {
  if (!p || !out) return invalid("ft_moment_of_inertia: null argument");
  return guarded([&] { *out = ft::dynamics::moment_of_inertia(p->p); });
}

ft_status ft_gravity_weight(const ft_particle* p, double* out) {
  if (!p || !out) return invalid("ft_gravity_weight: null argument");
  return guarded([&] { *out = ft::dynamics::gravity_weight(p->p); });
}

ft_status ft_steady_state_omega(double torque, double gamma, double* out) {
  if (!out) return invalid("ft_steady_state_omega: null out");
  return guarded([&] { *out = ft::dynamics::steady_state_omega(torque, gamma); });
}

void ft_langevin_opts_default(ft_langevin_opts* opts) {
  if (!opts) return;
  *opts = ft_langevin_opts{};
  opts->T_e = 300.0;
  opts->n_trajectories = 1;
  opts->transient_fraction = 0.5;
}

static ft::dynamics::LangevinConfig to_langevin_cfg(const ft_langevin_opts* o) {
  ft::dynamics::LangevinConfig cfg;
  cfg.inertia = o->inertia;
  cfg.gamma = o->gamma;
  cfg.T_e = o->T_e;
  cfg.dt = o->dt;
  cfg.steps = o->steps;
  cfg.n_trajectories = o->n_trajectories;
  cfg.seed = o->seed;
  cfg.omega0 = o->omega0;
  cfg.transient_fraction = o->transient_fraction;
  cfg.record_trajectories = o->record_trajectories;
  cfg.record_stride = o->record_stride;
  return cfg;
}

static void write_stats(const ft::dynamics::EnsembleStats& st, ft_langevin_stats* out) {
  out->mean = st.mean;
  out->variance = st.variance;
  out->n_samples = st.n_samples;
  out->mean_first_half = st.mean_first_half;
  out->mean_second_half = st.mean_second_half;
  out->variance_first_half = st.variance_first_half;
  out->variance_second_half = st.variance_second_half;
}

ft_status ft_langevin_simulate(const ft_langevin_opts* opts, ft_torque_fn torque, void* ctx,
                               int n_jobs, ft_langevin_stats* out) {
  if (!opts || !out) return invalid("ft_langevin_simulate: null argument");
  return guarded([&] {
    ft::dynamics::LangevinConfig cfg = to_langevin_cfg(opts);
    cfg.record_trajectories = 0;
    ft::dynamics::TorqueFn fn;
    if (torque) fn = [torque, ctx](double w) { return torque(w, ctx); };
    auto st = ft::dynamics::simulate_langevin(cfg, fn, n_jobs);
    write_stats(st, out);
  });
}

ft_status ft_langevin_simulate_recorded(const ft_langevin_opts* opts, ft_torque_fn torque,
                                        void* ctx, int n_jobs, ft_langevin_stats* out,
                                        double* times, double* omegas, long capacity,
                                        long* written, long* per_traj) {
  if (!opts || !out || !times || !omegas || !written || !per_traj) {
    return invalid("ft_langevin_simulate_recorded: null argument");
  }
  return guarded([&] {
    ft::dynamics::LangevinConfig cfg = to_langevin_cfg(opts);
    ft::dynamics::TorqueFn fn;
    if (torque) fn = [torque, ctx](double w) { return torque(w, ctx); };
    auto st = ft::dynamics::simulate_langevin(cfg, fn, n_jobs);
    write_stats(st, out);
    long w = 0;
    long per = 0;
    for (const auto& traj : st.recorded) {
      per = static_cast<long>(traj.size());
      for (const auto& sample : traj) {
        if (w >= capacity) break;
        times[w] = sample.time;
        omegas[w] = sample.omega;
        ++w;
      }
    }
    *written = w;
    *per_traj = per;
  });
}

}  // extern "C"
