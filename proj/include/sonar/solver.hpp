#pragma once

#include "sonar/core.hpp"
#include "sonar/field.hpp"
#include "sonar/medium.hpp"

namespace sonar {

enum class BoundaryMode { Periodic, EmbeddedTransition };

struct SolveSpec {
  int points_per_wavelength_water = 10;
  int points_per_wavelength_sediment = 5;
  double pml_thickness = 0.1;  // m
  int domain_width_factor = 4; // solve width in segment widths
  BoundaryMode boundary = BoundaryMode::Periodic;
  double pml_strength = 5.0;
  bool bottom_pml = false;     // test-only: absorbing bottom for flux checks
  double injection_offset = 0.2;  // TF/SF line sits this far below the PML

  bool valid() const { return points_per_wavelength_water >= 5 && pml_thickness > 0; }
};

/// Output of one Helmholtz solve. `total` is the physical pressure p inside
/// the total-field region; `scattered` is total minus incident below the
/// injection line and equals the raw solution above it, so it is the
/// scattered field everywhere.
struct SolveResult {
  ComplexField total;
  ComplexField scattered;
  double h = 0;       // grid spacing (uniform, = dx = dy)
  double kx = 0;      // horizontal wavenumber k cos(alpha)
  double kyd = 0;     // discrete vertical wavenumber of the incident wave
  double width = 0;   // periodic width in meters
};

/// Incident downgoing plane wave P0 * exp(i k_alpha . (x, y)),
/// k_alpha = (k cos alpha, -k sin alpha).
cplx incident_wave(double x, double y, const ExperimentParams& exp);

/// The discrete incident plane wave P0 * exp(i (kx x - kyd y)) evaluated on
/// the same grid as the solve output. Measuring this field through the same
/// sampling/decomposition pipeline as the scattered field and taking the
/// amplitude ratio cancels the interpolation bias shared by both.
ComplexField discrete_incident_field(const SolveResult& sol, const ExperimentParams& exp);

/// Grid spacing used by the solver: the segment width divided by the
/// smallest node count satisfying both points-per-wavelength constraints,
/// so every segment boundary falls exactly on a grid line.
double solver_grid_spacing(const MediumMap& medium, const ExperimentParams& exp,
                           const DomainSpec& d, const SolveSpec& s);

/// Core solve over a periodic domain of the given width (meters, a multiple
/// of the segment width). Floquet side walls, PML + TF/SF injection at the
/// top, homogeneous Dirichlet (or optional PML) at the bottom.
SolveResult solve_helmholtz(const MediumMap& medium, const ExperimentParams& exp,
                            const DomainSpec& d, const SolveSpec& s, double width);

/// Template solve on the enlarged (domain_width_factor * segment_width)
/// periodic domain for a single seafloor parameterization.
SolveResult solve_template(const SeafloorParams& params, const ExperimentParams& exp,
                           const DomainSpec& d, const SolveSpec& s);

/// Transition solve: embeds two template-width halves side by side
/// (width 2 * domain_width_factor * segment_width) with the material
/// junction at the center.
SolveResult solve_transition(const SeafloorParams& left, const SeafloorParams& right,
                             const ExperimentParams& exp, const DomainSpec& d,
                             const SolveSpec& s);

}  // namespace sonar
