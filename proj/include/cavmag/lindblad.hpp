#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cavmag/model.hpp"

namespace cavmag {

/// Collective jump operator nu*a + u*exp(i*Theta)*b with bath rate tau.
/// Derived rates: kappa = tau*nu^2, gamma = tau*u^2, cooperative = tau*nu*u.
struct JumpOperatorSpec {
    double tau = 0.0;    ///< bath coupling rate, Hz
    double nu = 0.0;     ///< dimensionless cavity amplitude
    double u = 0.0;      ///< dimensionless magnon amplitude
    double theta = 0.0;  ///< relative phase, radians

    double kappa() const { return tau * nu * nu; }
    double gamma_rate() const { return tau * u * u; }
    double cooperative() const { return tau * nu * u; }

    /// Decompose target external rates into (tau, nu, u); tau = kappa + gamma.
    static JumpOperatorSpec from_rates(double kappa, double gamma, double theta = 0.0);
    /// Jump spec matching a two-mode model's external dampings and coupling phase.
    static JumpOperatorSpec from_model(const SystemModel& model);
};

/// Two-mode Fock-truncated density matrix, cutoff n_max per mode,
/// dimension (n_max+1)^2 per side.
class DensityMatrix {
public:
    DensityMatrix(Eigen::MatrixXcd rho, int cutoff);

    static DensityMatrix vacuum(int cutoff);
    /// Normalized truncated product of coherent states |alpha_a> x |alpha_b>.
    static DensityMatrix coherent(cplx alpha_a, cplx alpha_b, int cutoff);
    /// Product Fock state |na, nb>.
    static DensityMatrix fock(int na, int nb, int cutoff);

    const Eigen::MatrixXcd& matrix() const { return rho_; }
    int cutoff() const { return cutoff_; }
    int dim() const { return static_cast<int>(rho_.rows()); }

    cplx trace() const { return rho_.trace(); }
    double hermiticity_error() const;  ///< max |rho - rho^dagger| element
    double min_eigenvalue() const;

private:
    Eigen::MatrixXcd rho_;
    int cutoff_;
};

/// (<a>, <b>) of a two-mode density matrix.
std::pair<cplx, cplx> first_moments(const DensityMatrix& rho);

struct MasterTrajectory {
    std::vector<double> t;            ///< sample times, s
    std::vector<cplx> a;              ///< <a>(t)
    std::vector<cplx> b;              ///< <b>(t)
    std::vector<DensityMatrix> states;
    double max_trace_drift = 0.0;
    double max_leakage = 0.0;         ///< top-Fock-level population
    double dt = 0.0;                  ///< step actually used, s
    double frame_f = 0.0;             ///< rotating-frame frequency, Hz
};

struct EvolveOptions {
    double dt = 0.0;       ///< integrator step, s; 0 selects one from the rate scale
    double frame_f = -1.0; ///< rotating-frame frequency, Hz; negative = drive mode's f
    int samples = 201;     ///< trajectory samples to store (including t = T)
};

/// Integrate d rho/dt = -i 2pi [H, rho] + 2pi (2 tau L[o] + 2 beta L[a] + 2 alpha L[b]) rho
/// with a fixed-step explicit RK4 scheme, in the rotating frame at frame_f.
/// L is the standard dissipator; the coefficient 2 on each rate makes the
/// first moments decay at the full rates, matching the dynamics matrix:
///   d<a>/dt = -i 2pi [ Delta_c <a> - i(beta+kappa)<a> + (J - i sqrt(kappa gamma) e^{i Theta}) <b> ].
/// The model supplies frequencies, J, and intrinsic dampings; all external and
/// cooperative dissipation comes from the jump operator.  A model whose stated
/// external dampings or Gamma disagree with the jump spec is rejected.
/// Errors: step too large, trace drift > 1e-6, top-level leakage > 1e-6.
MasterTrajectory evolve_master_equation(const SystemModel& model,
                                        const JumpOperatorSpec& jump,
                                        const DensityMatrix& rho0,
                                        double T,
                                        const EvolveOptions& opts = {});

/// Max over sampled t of |<v(t)>_master - v_eff(t)| / |v(0)| where v_eff
/// evolves under exp(-i 2pi M t) with M the rotating-frame dynamics matrix.
/// Certifies the reduction of the master equation to the effective
/// non-Hermitian two-mode dynamics.
double oracle_compare(const SystemModel& model,
                      const JumpOperatorSpec& jump,
                      const DensityMatrix& rho0,
                      double T,
                      const EvolveOptions& opts = {});

} // namespace cavmag
