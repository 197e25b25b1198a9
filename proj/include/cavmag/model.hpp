#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cavmag/errors.hpp"

namespace cavmag {

using cplx = std::complex<double>;

// Unit conventions used throughout:
//  * every frequency and damping rate is a linear frequency in Hz (f = omega/2pi);
//  * total damping of a mode is the plain linear sum intrinsic + external;
//  * the complex mode frequency is f - i*(intrinsic + external), i.e. the full
//    rate sits on the diagonal, not a half-width.  State evolution is
//    dv/dt = -i * 2pi * M v, so 2pi enters only when time appears explicitly.

/// One bosonic mode (cavity or magnon).
struct ModeParams {
    std::string label;
    double f = 0.0;                  ///< center frequency, Hz
    double intrinsic_damping = 0.0;  ///< internal loss rate, Hz
    double external_damping = 0.0;   ///< radiative loss to the traveling line, Hz

    double total_damping() const { return intrinsic_damping + external_damping; }
    cplx complex_frequency() const { return {f, -total_damping()}; }
};

enum class CouplingMode {
    Explicit,  ///< dissipative strength given directly
    FromBath,  ///< dissipative strength derived as sqrt of the endpoints' external dampings
};

/// Complex inter-mode coupling J - i*Gamma*exp(+-i*Theta).
struct CouplingSpec {
    double j = 0.0;        ///< coherent strength, Hz
    double gamma_d = 0.0;  ///< dissipative strength, Hz
    double theta = 0.0;    ///< relative phase, radians, in [-pi, pi]
    CouplingMode mode = CouplingMode::Explicit;
};

/// Cooperative dissipation rate sqrt(kappa*gamma) of two modes sharing a bath.
double cooperative_rate(double kappa, double gamma);

/// Validated collection of modes, couplings and the drive port.
/// Build through build_system(); all fields are immutable after construction.
struct SystemModel {
    std::vector<ModeParams> modes;
    std::map<std::pair<int, int>, CouplingSpec> couplings;  // key (i, j) with i < j
    int drive_port = 0;
    bool passive = true;

    int size() const { return static_cast<int>(modes.size()); }

    /// The single coupling of a two-mode model.
    const CouplingSpec& pair_coupling() const;
};

/// Assemble and validate a SystemModel.  FromBath couplings are resolved to
/// numeric Gamma; the passivity flag is computed from Gamma^2 vs the product
/// of total dampings.  Coupling indices are normalized to i < j (the phase
/// sign flips on swap so the stored orientation is equivalent).
SystemModel build_system(std::vector<ModeParams> modes,
                         const std::vector<std::tuple<int, int, CouplingSpec>>& couplings,
                         int drive_port = 0);

/// Complex dynamics matrix in Hz.
///   M[k][k] = f_k - i*(intrinsic_k + external_k)
///   M[i][j] = J - i*Gamma*exp(+i*Theta),  M[j][i] = J - i*Gamma*exp(-i*Theta)  (i < j)
/// Theta = 0 gives the complex-symmetric J - i*Gamma form.
Eigen::MatrixXcd dynamics_matrix(const SystemModel& model);

struct PassivityEntry {
    int i = 0;
    int j = 0;
    double gamma_sq = 0.0;         ///< Gamma^2, Hz^2
    double damping_product = 0.0;  ///< (total damping i) * (total damping j), Hz^2
    bool passive = true;
};

/// Per-pair passivity report.  Non-passive pairs (Gamma^2 exceeding the
/// damping product) are warnings, never errors: effective models with an
/// explicit Gamma are routinely run in that regime.
std::vector<PassivityEntry> validate_passivity(const SystemModel& model);

} // namespace cavmag
