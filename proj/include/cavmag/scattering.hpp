#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavmag/model.hpp"

namespace cavmag {

enum class ScatterFormula {
    Eq13,        ///< cavity-drive-only transmission (Theta = 0)
    Directional, ///< full direction-dependent linear response
};

/// A single transmission trace |S| against probe frequency.
struct SpectrumTrace {
    std::vector<double> f;  ///< probe frequencies, Hz
    std::vector<cplx> s;    ///< complex transmission coefficient
    int direction = +1;
};

/// Transmission coefficient of a driven two-mode model at probe frequency f:
///   S = 1 + kappa / [ i(f - f_c) - (kappa + beta) - (iJ + Gamma)^2 / (i(f - f_m) - (alpha + gamma)) ]
/// evaluated in Hz.  Requires Theta = 0 and the drive port on the cavity mode.
/// Throws NumericError when the response denominator vanishes (possible only
/// for non-passive explicit-Gamma models).
cplx transmission_eq13(const SystemModel& model, double f);

/// Direction-dependent steady-state response.  The traveling wave enters and
/// leaves through both external couplings with a direction-signed phase:
///   B_sigma = C_sigma = (sqrt(kappa), sqrt(gamma) e^{i sigma Theta}),
///   off-diagonals J - i Gamma e^{+-i sigma Theta},
///   S_sigma = 1 - C_sigma [i (M_sigma - f I)]^{-1} B_sigma.
/// Reduces to transmission_eq13 when gamma = 0 and Theta = 0; reciprocal for
/// Theta = 0.  This directional placement of the phase is a modeling
/// extension, not a unique choice; only the two reductions are contractual.
cplx smatrix_direction(const SystemModel& model, double f, int sigma);

struct SpectrumMap {
    std::vector<double> f;        ///< probe grid, Hz
    std::vector<double> delta_m;  ///< swept-mode detuning grid, Hz
    Eigen::MatrixXd s_db;         ///< 20*log10|S|, rows follow delta_m, cols follow f
    std::vector<std::pair<int, int>> singular_cells;  ///< (row, col) of skipped singular points
};

/// |S| map in dB over probe frequency and detuning of the non-drive mode.
/// Singular evaluations are recorded in singular_cells and left as NaN.
SpectrumMap spectrum_map(const SystemModel& model,
                         std::span<const double> f_grid,
                         std::span<const double> delta_m_grid,
                         ScatterFormula formula = ScatterFormula::Eq13,
                         int sigma = +1);

/// Mirror-asymmetry of the transmission magnitude in dB:
///   max over x of | |S(f_c + x; +delta_m)|_dB - |S(f_c - x; -delta_m)|_dB |.
/// Zero for purely coherent or purely dissipative coupling; positive when
/// both J > 0 and Gamma > 0.  The probe grid must be symmetric about f_c.
double symmetry_metric(const SystemModel& model,
                       std::span<const double> f_grid,
                       double delta_m);

} // namespace cavmag
