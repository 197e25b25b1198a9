#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cavmag/model.hpp"

namespace cavmag {

/// One continuously tracked eigenvalue curve over a detuning sweep.
/// Real part = hybridized frequency (Hz), -imaginary part = linewidth (Hz).
struct Branch {
    std::vector<double> detuning;        ///< swept-mode detuning grid, Hz
    std::vector<cplx> eigenfrequency;    ///< complex eigenfrequency per grid point, Hz
    std::string label;
};

/// Closed-form eigenvalues of a two-mode model with Theta = 0:
///   (wc~ + wm~)/2 +- sqrt(((wc~ - wm~)/2)^2 + (J - i*Gamma)^2)
/// with wc~ = f_c - i*(beta+kappa), wm~ = f_m - i*(alpha+gamma).
/// Principal square root; the "+" branch comes first.
std::pair<cplx, cplx> two_mode_eigenvalues(const SystemModel& model);

/// Full eigenvalue set of a dense complex matrix (general eigensolver).
std::vector<cplx> n_mode_eigenvalues(const Eigen::MatrixXcd& m);

/// Branch-tracked dispersion over a swept detuning grid.  The swept mode's
/// frequency is set to f_ref + delta, where f_ref is the reference (drive)
/// mode's frequency.  Sorting follows eigenvector-overlap continuity with
/// frequency proximity as the tie-break; near eigenvector coalescence the
/// sort falls back to frequency proximity.
std::vector<Branch> dispersion_sweep(const SystemModel& model,
                                     std::span<const double> delta_grid,
                                     int swept_mode = -1,
                                     int reference_mode = -1);

struct ExceptionalPoint {
    double delta_m = 0.0;          ///< detuning, Hz
    double abs_discriminant = 0.0; ///< |discriminant| at the located point, Hz^2
};

/// Real detunings where the two-mode discriminant vanishes
/// (|D| < 1e-6 * (J^2 + Gamma^2)).  Coarse scan plus local polish; returns
/// an empty list when no exceptional point lies in range.
std::vector<ExceptionalPoint> find_exceptional_points(const SystemModel& model,
                                                      double lo, double hi,
                                                      int scan_points = 2001);

} // namespace cavmag
