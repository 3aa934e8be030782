/* fluxtorque: fluctuation-induced power, force and torque above gyrotropic
 * substrates — C API.
 *
 * All functions return ft_status; on failure ft_last_error() carries a
 * thread-local message. Handles are opaque and freed with the matching
 * *_free. Units are SI throughout; angular frequencies in rad/s.
 */
#ifndef FLUXTORQUE_H
#define FLUXTORQUE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ft_status {
  FT_OK = 0,
  FT_ERR_INVALID_ARGUMENT = 1,
  FT_ERR_CONFIG = 2,
  FT_ERR_DEGENERATE_MODE = 3,
  FT_ERR_SOLVER = 4,
  FT_ERR_SINGULARITY = 5,
  FT_ERR_NONCONVERGED = 6,
  FT_ERR_DYNAMICS = 7,
  FT_ERR_IO = 8,
  FT_ERR_UNKNOWN = 99
} ft_status;

const char* ft_version(void);
const char* ft_last_error(void);

/* ---------- material database ---------- */

typedef struct ft_material_db ft_material_db;
typedef struct ft_substrate ft_substrate;
typedef struct ft_particle ft_particle;

ft_status ft_db_default(ft_material_db** out);
ft_status ft_db_load(const char* path, ft_material_db** out);
ft_status ft_db_parse(const char* json_text, ft_material_db** out);
ft_status ft_db_save(const ft_material_db* db, const char* path);
/* canonical JSON; free with ft_string_free */
ft_status ft_db_serialize(const ft_material_db* db, char** out_json);
void ft_string_free(char* s);
void ft_db_free(ft_material_db* db);

/* what: 0 = substrates, 1 = particles; newline-separated names */
ft_status ft_db_list(const ft_material_db* db, int what, char** out_names);

/* response: 0 = local gyrotropic, 1 = nonlocal hydrodynamic */
ft_status ft_substrate_create(const ft_material_db* db, const char* name,
                              const double b_field[3], int response, ft_substrate** out);
/* phonon_triples: n_phonons x (strength, resonance rad/s, damping rad/s) */
ft_status ft_substrate_create_custom(double eps_inf, double carrier_density_m3,
                                     double effective_mass_ratio, double drude_damping,
                                     const double* phonon_triples, int n_phonons, double beta,
                                     const double b_field[3], int response, ft_substrate** out);
ft_status ft_substrate_set_beta(ft_substrate* s, double beta);
void ft_substrate_free(ft_substrate* s);

ft_status ft_particle_create(const ft_material_db* db, const char* name, ft_particle** out);
ft_status ft_particle_create_custom(double radius, double eps_inf, const double* osc_triples,
                                    int n_osc, double mass_density, double temperature,
                                    ft_particle** out);
ft_status ft_particle_props(const ft_particle* p, double* radius, double* mass_density,
                            double* temperature);
void ft_particle_free(ft_particle* p);

/* ---------- material response ---------- */

/* row-major 3x3 */
ft_status ft_substrate_epsilon(const ft_substrate* s, double omega, double re[9], double im[9]);
ft_status ft_particle_epsilon(const ft_particle* p, double omega, double* re, double* im);
/* Clausius-Mossotti polarizability, m^3 */
ft_status ft_particle_polarizability(const ft_particle* p, double omega, double* re, double* im);

/* ---------- reflection and Green's function ---------- */

/* out: {Re r_ss, Im r_ss, Re r_sp, Im r_sp, Re r_ps, Im r_ps, Re r_pp, Im r_pp} */
ft_status ft_reflection(const ft_substrate* s, double omega, double k_par, double phi,
                        double out[8]);

/* reflected dyadic Green's-function integrand at height d, row-major 3x3 */
ft_status ft_greens_reflected(const ft_substrate* s, double omega, double k_par, double phi,
                              double d, double re[9], double im[9]);
/* omega^3 / (pi c^3), 1/m^3 */
ft_status ft_vacuum_ldos_factor(double omega, double* out);

/* mean oscillator energy, J (NaN on invalid input) */
double ft_theta(double omega, double T);

/* ---------- spectra ---------- */

typedef struct ft_quad_opts {
  double rel_tol;
  double abs_tol;
  double k_par_max_factor;
  int max_subdivisions;
  int phi_order;
  int n_jobs;
} ft_quad_opts;

void ft_quad_opts_default(ft_quad_opts* opts);

/* components, in order: P (W s), Fx, Fy, Fz (N s), Mx, My, Mz (N m s);
 * mask bit i selects component i (0x7f = all) */
ft_status ft_spectral_density(const ft_substrate* s, const ft_particle* p, double T_p,
                              double T_e, double d, double omega, const ft_quad_opts* opts,
                              unsigned mask, int fz_include_zero_point, double out[7],
                              double err[7]);

/* half-plane split: fwd integrates phi in [0,pi) (k_y > 0), bwd the rest */
ft_status ft_spectral_density_split(const ft_substrate* s, const ft_particle* p, double T_p,
                                    double T_e, double d, double omega,
                                    const ft_quad_opts* opts, unsigned mask,
                                    int fz_include_zero_point, double out_fwd[7],
                                    double out_bwd[7]);

/* per-photon angular momentum at one mode, units of hbar */
ft_status ft_photon_spin(const ft_substrate* s, double omega, double k_par, double phi, double d,
                         double out[3]);

/* angular-velocity-dependent lateral torque density, N m s */
ft_status ft_rotating_torque_x(const ft_substrate* s, const ft_particle* p, double T_p,
                               double T_e, double d, double omega, double Omega,
                               const ft_quad_opts* opts, double* out);

/* frequency-integrated totals: P (W), F (N), M (N m) */
ft_status ft_totals(const ft_substrate* s, const ft_particle* p, double T_p, double T_e,
                    double d, double omega_min, double omega_max, const ft_quad_opts* opts,
                    unsigned mask, int fz_include_zero_point, double out[7], double err[7]);

/* ---------- dispersion ---------- */

ft_status ft_seed_frequencies(const ft_substrate* s, const ft_particle* p, double* out,
                              int capacity, int* count);

/* trace the surface-polariton branch at fixed phi over a log-spaced k grid;
 * out_omega/out_branch_kind have n_points slots; branch kind: 0 SPP, 1 SPhP.
 * out_count < n_points means the trace lost the branch and truncated. */
ft_status ft_trace_branch(const ft_substrate* s, double phi, double k_min, double k_max,
                          int n_points, int response, double* out_omega, int* out_branch_kind,
                          int* out_count);

/* ---------- rotational dynamics ---------- */

ft_status ft_damping_coefficient(double radius, double pressure_pa, double molecule_mass,
                                 double temperature, double* out);
ft_status ft_moment_of_inertia(const ft_particle* p, double* out);
ft_status ft_gravity_weight(const ft_particle* p, double* out);
ft_status ft_steady_state_omega(double torque, double gamma, double* out);

typedef struct ft_langevin_opts {
  double inertia;    /* kg m^2 */
  double gamma;      /* N m s */
  double T_e;        /* K */
  double dt;         /* s */
  long steps;
  int n_trajectories;
  uint64_t seed;
  double omega0;
  double transient_fraction; /* stats window starts after this fraction */
  int record_trajectories;
  long record_stride;
} ft_langevin_opts;

void ft_langevin_opts_default(ft_langevin_opts* opts);

typedef double (*ft_torque_fn)(double omega_spin, void* ctx);

typedef struct ft_langevin_stats {
  double mean;
  double variance;
  long n_samples;
  double mean_first_half;
  double mean_second_half;
  double variance_first_half;
  double variance_second_half;
} ft_langevin_stats;

ft_status ft_langevin_simulate(const ft_langevin_opts* opts, ft_torque_fn torque, void* ctx,
                               int n_jobs, ft_langevin_stats* out);

/* with trajectory recording: flat arrays of record_trajectories * n_rec
 * samples where n_rec = ceil(steps / record_stride); *per_traj = n_rec */
ft_status ft_langevin_simulate_recorded(const ft_langevin_opts* opts, ft_torque_fn torque,
                                        void* ctx, int n_jobs, ft_langevin_stats* out,
                                        double* times, double* omegas, long capacity,
                                        long* written, long* per_traj);

#ifdef __cplusplus
}
#endif

#endif /* FLUXTORQUE_H */
