#pragma once

#include <map>
#include <string>
#include <vector>

#include "hydropol/emission.hpp"
#include "hydropol/se_solver.hpp"

namespace hydropol {

// Distribution of electric field orientations at fixed modulus.
struct FieldDistribution {
    enum class Kind { Deterministic, RandomAzimuth, Isotropic };
    Kind kind = Kind::Deterministic;
    double theta_e = 0.0;  // inclination from z (deterministic, random-azimuth)
    double phi_e = 0.0;    // azimuth (deterministic only)
    int n_azimuth = 8;
    int n_polar = 24;

    std::string label() const;
};

struct SweepRequest {
    std::shared_ptr<const LevelScheme> scheme;
    Illumination illumination = Illumination::diluted_planck(20000.0, 0.5);
    Eigen::Vector3d b_field_tesla = Eigen::Vector3d::Zero();  // along z when nonzero
    FieldDistribution distribution;
    std::vector<double> e_grid_vm;  // strictly increasing field strengths
    std::vector<LineId> lines = {LineId{2, 1}};
    ViewingGeometry geometry = ViewingGeometry::from_angles(M_PI / 2.0, 0.0);
    int workers = 1;
    SolveOptions solver;          // residual tolerance, refinement cap
    int dimension_cap = 10000;    // guard on the dyad count
    // Solve every azimuth node instead of rotating the emissivity of a single
    // solve; verification path for the ring-average optimization.
    bool brute_force_azimuth = false;
};

struct SweepRow {
    double e_vm = 0.0;
    double omega_e = 0.0;
    std::string distribution;
    bool ok = true;
    std::string error;
    std::map<LineId, StokesResult> stokes;  // distribution-averaged
    double a_2p = 0.0;                      // averaged, quantization frame
    double imbalance = 0.0;                 // averaged N_2P - 3 N_2S
    double normalized_alignment = 0.0;      // a_2p / imbalance
    std::map<std::string, double> extras;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double max_residual = 0.0;
    double wall_seconds = 0.0;
};

// Stationary solves over the field-strength grid and orientation distribution;
// Stokes vectors (not polarization degrees) are averaged over orientations.
SweepResult sweep(const SweepRequest& req);

enum class FigureId { Fig2, Fig3, Fig4 };

struct FigureOptions {
    int n_points = 40;
    double e_min_vcm = 0.1;
    double e_max_vcm = 0.0;   // 0 = canonical (1e6 for fig2, 1e7 for fig3/fig4)
    int workers = 1;
    int n_max = 4;            // full-model size
    int n_polar = 0;          // isotropic quadrature override (0 = default)
    double lamb_shift_2s = 0.0;
    double b_gauss = 1000.0;  // fig3/fig4 only
    bool b_override = false;  // replace the canonical B for fig3/fig4
};

// Canonical sweep configurations: fig2 the
// deterministic alignment curves (full model and restricted closed form),
// fig3 the BLP of Lyman-alpha at 90 degrees for random-azimuth and isotropic
// field distributions with B = 1000 G, fig4 the BCP along the magnetic field.
SweepResult reproduce_figure(FigureId id, FigureOptions opts = {});

// log-spaced grid helper, V/m
std::vector<double> log_grid_vm(double e_min_vcm, double e_max_vcm, int n);

// Gauss-Legendre nodes and weights on (-1, 1).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace hydropol
