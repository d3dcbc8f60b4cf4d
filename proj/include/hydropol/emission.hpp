#pragma once

#include <Eigen/Dense>

#include "hydropol/density_matrix.hpp"

namespace hydropol {

// Line of sight plus the reference direction defining positive Q.
struct ViewingGeometry {
    Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
    Eigen::Vector3d reference = Eigen::Vector3d::UnitY();

    // direction from polar angles in the quantization frame; the reference
    // direction is perpendicular to both the line of sight and the z axis
    // (for a view along z it falls back to x).
    static ViewingGeometry from_angles(double theta, double phi);

    void validate() const;  // unit vectors, orthogonal
};

// Frequency-integrated spontaneous emissivity, photons s^-1 sr^-1 per atom.
struct StokesResult {
    double i = 0.0, q = 0.0, u = 0.0, v = 0.0;
};

// Signed fractional linear polarization Q/I (positive along the reference
// direction) and circular fraction V/I. Both require I > 0.
double blp(const StokesResult& s);
double bcp(const StokesResult& s);

// Stokes emissivity of one term pair of a line. Amplitudes are summed
// coherently over the upper-term dyads (including its J-coherences) and
// incoherently over the lower sublevels and over frequency (broadband limit).
StokesResult stokes_emissivity(const DensityMatrix& rho, Term upper, Term lower,
                               const ViewingGeometry& geom);

// Whole line (all term pairs of the shell pair summed coherently where they
// share final states). For Lyman lines this equals the single-pair result.
StokesResult stokes_line(const DensityMatrix& rho, LineId line,
                         const ViewingGeometry& geom);

}  // namespace hydropol
