#pragma once

#include <iosfwd>
#include <map>
#include <memory>

#include "hydropol/constants.hpp"
#include "hydropol/density_matrix.hpp"
#include "hydropol/operators.hpp"
#include "hydropol/radiation.hpp"

namespace hydropol {

struct FieldConfig {
    Eigen::Vector3d e_field_vm = Eigen::Vector3d::Zero();
    Eigen::Vector3d b_field_tesla = Eigen::Vector3d::Zero();

    double omega_e() const { return constants::omega_e_per_vm * e_field_vm.norm(); }
    double omega_b() const { return constants::omega_b_per_tesla * b_field_tesla.norm(); }
};

enum class OperatorPart { HamiltonianFree, Stark, Zeeman, Damping, Transfer };

struct AssembleOptions {
    bool keep_parts = false;   // retain the tagged components for inspection
    int dimension_cap = 10000;
};

// d vec(rho)/dt = matrix . vec(rho), over intra-shell dyads in shell order,
// row-major within each shell block.
class EvolutionOperator {
public:
    std::shared_ptr<const LevelScheme> scheme;
    Eigen::MatrixXcd matrix;
    std::map<OperatorPart, Eigen::MatrixXcd> parts;

    int dimension() const { return static_cast<int>(matrix.rows()); }
    int dyad_index(int shell, int row, int col) const;

    // Tagged plain-text dump of the assembled operator (and any retained parts).
    void write_text(std::ostream& os) const;
};

EvolutionOperator assemble(std::shared_ptr<const LevelScheme> scheme, const RateSet& rates,
                           const FieldConfig& fields, AssembleOptions opts = {});
EvolutionOperator assemble(std::shared_ptr<const LevelScheme> scheme,
                           const Illumination& ill, const FieldConfig& fields,
                           AssembleOptions opts = {});

struct SolveOptions {
    double residual_tol = 1e-10;  // on ||op x||_inf / ||op||_inf, replaced row excluded
    int max_refine = 60;
};

struct SolveInfo {
    double residual = 0.0;
    double replaced_row_residual = 0.0;
    int refine_steps = 0;
    bool used_min_norm = false;
    double rcond = 0.0;
};

// Solves op . vec(rho) = 0 with one population row replaced by the trace-one
// constraint; returns the Hermitized density matrix.
DensityMatrix stationary_solve(const EvolutionOperator& op, SolveOptions opts = {},
                               SolveInfo* info = nullptr);

// The restricted 1S/2S/2P/3P configuration without fine structure, radiative
// links reduced to the minimal pumping set.
std::shared_ptr<const LevelScheme> restrict_to_toy(const LevelScheme& scheme);

// Active z-y-z rotation of a density matrix, block-diagonal D^J per (n,L,J)
// multiplet; rotation_matrix is the matching rotation of plain 3-vectors.
DensityMatrix rotated(const DensityMatrix& rho, double alpha, double beta, double gamma);
Eigen::Matrix3d rotation_matrix(double alpha, double beta, double gamma);

}  // namespace hydropol
