#include "cavmag/lindblad.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cavmag {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd lowering(int cutoff) {
    const int n = cutoff + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k)
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

struct TwoModeOps {
    Eigen::MatrixXcd a, b;
    explicit TwoModeOps(int cutoff) {
        const int n = cutoff + 1;
        const Eigen::MatrixXcd low = lowering(cutoff);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
        a = kron(low, id);
        b = kron(id, low);
    }
};

Eigen::VectorXcd coherent_vector(cplx alpha, int cutoff) {
    Eigen::VectorXcd v(cutoff + 1);
    cplx term = 1.0;
    for (int k = 0; k <= cutoff; ++k) {
        v(k) = term;
        term *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
    v.normalize();
    return v;
}

void require_consistent(const SystemModel& model, const JumpOperatorSpec& jump) {
    if (model.size() != 2)
        throw ConfigError("master equation: model must have two modes");
    const int cav = model.drive_port;
    const int mag = 1 - cav;
    const double scale = std::max({jump.tau, model.modes[cav].external_damping,
                                   model.modes[mag].external_damping, 1.0});
    if (std::abs(model.modes[cav].external_damping - jump.kappa()) > 1e-9 * scale ||
        std::abs(model.modes[mag].external_damping - jump.gamma_rate()) > 1e-9 * scale)
        throw ConfigError("master equation: model external dampings disagree with the jump operator");
    double model_gamma_d = 0.0, model_theta = 0.0;
    if (!model.couplings.empty()) {
        const CouplingSpec& c = model.pair_coupling();
        model_gamma_d = c.gamma_d;
        model_theta = c.theta;
    }
    if (std::abs(model_gamma_d - jump.cooperative()) > 1e-9 * scale)
        throw ConfigError("master equation: model Gamma disagrees with the jump cooperative rate");
    if (jump.cooperative() > 0.0 && std::abs(model_theta - jump.theta) > 1e-12)
        throw ConfigError("master equation: model coupling phase disagrees with the jump phase");
}

double rate_scale(const SystemModel& model, const JumpOperatorSpec& jump, double frame_f) {
    double s = 0.0;
    for (const ModeParams& m : model.modes)
        s = std::max(s, std::abs(m.f - frame_f));
    for (const ModeParams& m : model.modes)
        s += m.intrinsic_damping;
    s += jump.kappa() + jump.gamma_rate() + jump.cooperative();
    for (const auto& [key, c] : model.couplings)
        s += c.j;
    return std::max(s, 1.0);
}

// rotating-frame dynamics matrix, detunings relative to frame_f
Eigen::Matrix2cd frame_matrix(const SystemModel& model, const JumpOperatorSpec& jump, double frame_f) {
    const int cav = model.drive_port;
    const int mag = 1 - cav;
    double j = 0.0;
    if (!model.couplings.empty())
        j = model.pair_coupling().j;
    const cplx minus_i{0.0, -1.0};
    const cplx ph = std::polar(1.0, jump.theta);
    Eigen::Matrix2cd m;
    m(0, 0) = cplx{model.modes[cav].f - frame_f,
                   -(model.modes[cav].intrinsic_damping + jump.kappa())};
    m(1, 1) = cplx{model.modes[mag].f - frame_f,
                   -(model.modes[mag].intrinsic_damping + jump.gamma_rate())};
    m(0, 1) = j + minus_i * jump.cooperative() * ph;
    m(1, 0) = j + minus_i * jump.cooperative() * std::conj(ph);
    return m;
}

} // namespace

JumpOperatorSpec JumpOperatorSpec::from_rates(double kappa, double gamma, double theta) {
    if (kappa < 0.0 || gamma < 0.0)
        throw ConfigError("JumpOperatorSpec: negative rate");
    JumpOperatorSpec spec;
    spec.theta = theta;
    spec.tau = kappa + gamma;
    if (spec.tau > 0.0) {
        spec.nu = std::sqrt(kappa / spec.tau);
        spec.u = std::sqrt(gamma / spec.tau);
    }
    return spec;
}

JumpOperatorSpec JumpOperatorSpec::from_model(const SystemModel& model) {
    if (model.size() != 2)
        throw ConfigError("JumpOperatorSpec::from_model: model must have two modes");
    double theta = 0.0;
    if (!model.couplings.empty())
        theta = model.pair_coupling().theta;
    return from_rates(model.modes[model.drive_port].external_damping,
                      model.modes[1 - model.drive_port].external_damping, theta);
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho, int cutoff) : rho_(std::move(rho)), cutoff_(cutoff) {
    if (cutoff_ < 2)
        throw ConfigError("DensityMatrix: cutoff must be at least 2");
    const int dim = (cutoff_ + 1) * (cutoff_ + 1);
    if (rho_.rows() != dim || rho_.cols() != dim)
        throw ConfigError("DensityMatrix: dimension does not match cutoff");
}

DensityMatrix DensityMatrix::vacuum(int cutoff) {
    return coherent(0.0, 0.0, cutoff);
}

DensityMatrix DensityMatrix::coherent(cplx alpha_a, cplx alpha_b, int cutoff) {
    if (cutoff < 2)
        throw ConfigError("DensityMatrix: cutoff must be at least 2");
    const Eigen::VectorXcd psi =
        kron(coherent_vector(alpha_a, cutoff), coherent_vector(alpha_b, cutoff));
    return DensityMatrix(psi * psi.adjoint(), cutoff);
}

DensityMatrix DensityMatrix::fock(int na, int nb, int cutoff) {
    if (cutoff < 2 || na < 0 || nb < 0 || na > cutoff || nb > cutoff)
        throw ConfigError("DensityMatrix::fock: occupation outside cutoff");
    const int n = cutoff + 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n * n);
    psi(na * n + nb) = 1.0;
    return DensityMatrix(psi * psi.adjoint(), cutoff);
}

double DensityMatrix::hermiticity_error() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (rho_ + rho_.adjoint()));
    return solver.eigenvalues().minCoeff();
}

std::pair<cplx, cplx> first_moments(const DensityMatrix& rho) {
    const TwoModeOps ops(rho.cutoff());
    return {(ops.a * rho.matrix()).trace(), (ops.b * rho.matrix()).trace()};
}

MasterTrajectory evolve_master_equation(const SystemModel& model,
                                        const JumpOperatorSpec& jump,
                                        const DensityMatrix& rho0,
                                        double T,
                                        const EvolveOptions& opts) {
    require_consistent(model, jump);
    if (!(T > 0.0))
        throw ConfigError("evolve_master_equation: total time must be positive");

    const double frame_f = opts.frame_f < 0.0 ? model.modes[model.drive_port].f : opts.frame_f;
    const double angular = two_pi * rate_scale(model, jump, frame_f);
    double dt = opts.dt;
    if (dt <= 0.0)
        dt = 0.04 / angular;
    if (dt * angular >= 0.05) {
        std::ostringstream msg;
        msg << "evolve_master_equation: dt = " << dt
            << " s does not resolve the fastest rate (need dt < " << 0.05 / angular << " s)";
        throw ConfigError(msg.str());
    }
    const long steps = static_cast<long>(std::ceil(T / dt));
    dt = T / static_cast<double>(steps);

    const int cutoff = rho0.cutoff();
    const TwoModeOps ops(cutoff);
    const int cav = model.drive_port;
    const int mag = 1 - cav;
    const double alpha = model.modes[mag].intrinsic_damping;
    const double beta = model.modes[cav].intrinsic_damping;
    double j = 0.0;
    if (!model.couplings.empty())
        j = model.pair_coupling().j;

    const Eigen::MatrixXcd jump_op =
        jump.nu * ops.a + jump.u * std::polar(1.0, jump.theta) * ops.b;
    const Eigen::MatrixXcd num_a = ops.a.adjoint() * ops.a;
    const Eigen::MatrixXcd num_b = ops.b.adjoint() * ops.b;
    const Eigen::MatrixXcd h = (model.modes[cav].f - frame_f) * num_a +
                               (model.modes[mag].f - frame_f) * num_b +
                               j * (ops.a.adjoint() * ops.b + ops.a * ops.b.adjoint());

    // K = -i 2pi H - 2pi (tau o'o + beta a'a + alpha b'b);  rhs = K rho + rho K' + feed terms
    const Eigen::MatrixXcd k_eff =
        cplx{0.0, -two_pi} * h -
        two_pi * (jump.tau * (jump_op.adjoint() * jump_op) + beta * num_a + alpha * num_b);
    const Eigen::MatrixXcd jump_dag = jump_op.adjoint();
    const Eigen::MatrixXcd a_dag = ops.a.adjoint();
    const Eigen::MatrixXcd b_dag = ops.b.adjoint();

    const int dim = rho0.dim();
    Eigen::MatrixXcd tmp(dim, dim);
    const auto rhs = [&](const Eigen::MatrixXcd& r, Eigen::MatrixXcd& out) {
        out.noalias() = k_eff * r;
        out.noalias() += r * k_eff.adjoint();
        if (jump.tau > 0.0) {
            tmp.noalias() = jump_op * r;
            out.noalias() += (2.0 * two_pi * jump.tau) * (tmp * jump_dag);
        }
        if (beta > 0.0) {
            tmp.noalias() = ops.a * r;
            out.noalias() += (2.0 * two_pi * beta) * (tmp * a_dag);
        }
        if (alpha > 0.0) {
            tmp.noalias() = ops.b * r;
            out.noalias() += (2.0 * two_pi * alpha) * (tmp * b_dag);
        }
    };

    // top Fock level projector for leakage monitoring
    const int n = cutoff + 1;
    Eigen::VectorXd top = Eigen::VectorXd::Zero(dim);
    for (int ia = 0; ia < n; ++ia)
        for (int ib = 0; ib < n; ++ib)
            if (ia == cutoff || ib == cutoff)
                top(ia * n + ib) = 1.0;

    MasterTrajectory traj;
    traj.dt = dt;
    traj.frame_f = frame_f;
    const int samples = std::max(opts.samples, 2);
    const long stride = std::max<long>(1, steps / (samples - 1));

    Eigen::MatrixXcd rho = rho0.matrix();
    Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), work(dim, dim);

    const auto record = [&](double t) {
        traj.t.push_back(t);
        traj.a.push_back((ops.a * rho).trace());
        traj.b.push_back((ops.b * rho).trace());
        traj.states.emplace_back(rho, cutoff);
        const double drift = std::abs(rho.trace() - cplx{1.0, 0.0});
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        double leak = 0.0;
        for (int d = 0; d < dim; ++d)
            leak += top(d) * rho(d, d).real();
        traj.max_leakage = std::max(traj.max_leakage, leak);
        if (drift > 1e-6) {
            std::ostringstream msg;
            msg << "evolve_master_equation: trace drift " << drift << " at t = " << t
                << " s; reduce the step";
            throw NumericError(msg.str());
        }
        if (leak > 1e-6) {
            std::ostringstream msg;
            msg << "evolve_master_equation: top Fock level population " << leak << " at t = " << t
                << " s; raise the cutoff or reduce the amplitude";
            throw NumericError(msg.str());
        }
    };

    record(0.0);
    for (long s = 0; s < steps; ++s) {
        rhs(rho, k1);
        work = rho + (0.5 * dt) * k1;
        rhs(work, k2);
        work = rho + (0.5 * dt) * k2;
        rhs(work, k3);
        work = rho + dt * k3;
        rhs(work, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) % stride == 0 || s == steps - 1)
            record(static_cast<double>(s + 1) * dt);
    }
    return traj;
}

double oracle_compare(const SystemModel& model,
                      const JumpOperatorSpec& jump,
                      const DensityMatrix& rho0,
                      double T,
                      const EvolveOptions& opts) {
    const auto [a0, b0] = first_moments(rho0);
    const double v0_norm = std::sqrt(std::norm(a0) + std::norm(b0));
    if (v0_norm == 0.0)
        throw ConfigError("oracle_compare: initial first moments vanish");
    if (std::abs(a0) > 0.1 + 1e-12 || std::abs(b0) > 0.1 + 1e-12)
        throw ConfigError("oracle_compare: initial amplitudes must stay at or below 0.1");

    const MasterTrajectory traj = evolve_master_equation(model, jump, rho0, T, opts);
    const Eigen::Matrix2cd m = frame_matrix(model, jump, traj.frame_f);
    const Eigen::Vector2cd v0{a0, b0};

    double dev = 0.0;
    for (std::size_t s = 0; s < traj.t.size(); ++s) {
        const Eigen::Matrix2cd propagator = (cplx{0.0, -two_pi} * traj.t[s] * m).exp();
        const Eigen::Vector2cd v_eff = propagator * v0;
        const double err = std::sqrt(std::norm(traj.a[s] - v_eff(0)) + std::norm(traj.b[s] - v_eff(1)));
        dev = std::max(dev, err / v0_norm);
    }
    return dev;
}

} // namespace cavmag
