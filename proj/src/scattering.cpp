#include "cavmag/scattering.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cavmag {

namespace {

struct Eq13Params {
    double kappa, beta, alpha, gamma; // Hz
    double j, gamma_d;                // Hz
};

Eq13Params eq13_params(const SystemModel& model) {
    if (model.size() != 2 || model.couplings.size() != 1)
        throw ConfigError("transmission: model must have two modes and one coupling");
    const CouplingSpec& c = model.pair_coupling();
    if (c.theta != 0.0)
        throw ConfigError("transmission_eq13: requires Theta = 0 (use smatrix_direction)");
    const int cav = model.drive_port;
    const int mag = 1 - cav;
    Eq13Params p;
    p.kappa = model.modes[cav].external_damping;
    p.beta = model.modes[cav].intrinsic_damping;
    p.alpha = model.modes[mag].intrinsic_damping;
    p.gamma = model.modes[mag].external_damping;
    p.j = c.j;
    p.gamma_d = c.gamma_d;
    return p;
}

// detuned evaluation: x = f - f_c, dm = f_m - f_c.  Written in product form
// so a vanishing magnon denominator does not divide by zero; the two mirror
// evaluations (x, dm) and (-x, -dm) are exact complex conjugates whenever
// the off-diagonal product is real.
cplx eq13_detuned(const Eq13Params& p, double x, double dm) {
    const cplx dc{-(p.kappa + p.beta), x};
    const cplx dmn{-(p.alpha + p.gamma), x - dm};
    const cplx coupling{p.gamma_d, p.j}; // iJ + Gamma
    const cplx denom = dc * dmn - coupling * coupling;
    if (denom == cplx{0.0, 0.0}) {
        std::ostringstream msg;
        msg << "singular transmission evaluation at f - f_c = " << x
            << " Hz, delta_m = " << dm << " Hz";
        throw NumericError(msg.str());
    }
    const cplx s = 1.0 + p.kappa * dmn / denom;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        std::ostringstream msg;
        msg << "non-finite transmission at f - f_c = " << x << " Hz, delta_m = " << dm << " Hz";
        throw NumericError(msg.str());
    }
    return s;
}

double db(double magnitude) { return 20.0 * std::log10(magnitude); }

} // namespace

cplx transmission_eq13(const SystemModel& model, double f) {
    const Eq13Params p = eq13_params(model);
    const double fc = model.modes[model.drive_port].f;
    const double fm = model.modes[1 - model.drive_port].f;
    return eq13_detuned(p, f - fc, fm - fc);
}

cplx smatrix_direction(const SystemModel& model, double f, int sigma) {
    if (sigma != 1 && sigma != -1)
        throw ConfigError("smatrix_direction: sigma must be +1 or -1");
    if (model.size() != 2 || model.couplings.size() != 1)
        throw ConfigError("smatrix_direction: model must have two modes and one coupling");
    const CouplingSpec& c = model.pair_coupling();
    const int cav = model.drive_port;
    const int mag = 1 - cav;
    const ModeParams& mc = model.modes[cav];
    const ModeParams& mm = model.modes[mag];

    const cplx minus_i{0.0, -1.0};
    const cplx ph = std::polar(1.0, sigma * c.theta);

    Eigen::Matrix2cd m;
    m(0, 0) = mc.complex_frequency();
    m(1, 1) = mm.complex_frequency();
    m(0, 1) = c.j + minus_i * c.gamma_d * ph;
    m(1, 0) = c.j + minus_i * c.gamma_d * std::conj(ph);

    Eigen::Vector2cd b;
    b(0) = std::sqrt(mc.external_damping);
    b(1) = std::sqrt(mm.external_damping) * ph;

    Eigen::Matrix2cd a = cplx{0.0, 1.0} * (m - f * Eigen::Matrix2cd::Identity());
    const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (det == cplx{0.0, 0.0}) {
        std::ostringstream msg;
        msg << "singular response matrix at f = " << f << " Hz";
        throw NumericError(msg.str());
    }
    // 2x2 solve by Cramer's rule
    Eigen::Vector2cd x;
    x(0) = (b(0) * a(1, 1) - a(0, 1) * b(1)) / det;
    x(1) = (a(0, 0) * b(1) - b(0) * a(1, 0)) / det;
    const cplx s = 1.0 - (b(0) * x(0) + b(1) * x(1));
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw NumericError("non-finite directional response");
    return s;
}

SpectrumMap spectrum_map(const SystemModel& model,
                         std::span<const double> f_grid,
                         std::span<const double> delta_m_grid,
                         ScatterFormula formula, int sigma) {
    if (f_grid.empty() || delta_m_grid.empty())
        throw ConfigError("spectrum_map: empty grid");
    if (model.size() != 2)
        throw ConfigError("spectrum_map: model must have two modes");

    SpectrumMap out;
    out.f.assign(f_grid.begin(), f_grid.end());
    out.delta_m.assign(delta_m_grid.begin(), delta_m_grid.end());
    out.s_db.resize(static_cast<Eigen::Index>(delta_m_grid.size()),
                    static_cast<Eigen::Index>(f_grid.size()));

    const int mag = 1 - model.drive_port;
    const double f_ref = model.modes[model.drive_port].f;
    SystemModel swept = model;
    for (std::size_t r = 0; r < delta_m_grid.size(); ++r) {
        swept.modes[mag].f = f_ref + delta_m_grid[r];
        for (std::size_t col = 0; col < f_grid.size(); ++col) {
            try {
                const cplx s = (formula == ScatterFormula::Eq13)
                                   ? transmission_eq13(swept, f_grid[col])
                                   : smatrix_direction(swept, f_grid[col], sigma);
                out.s_db(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                    db(std::abs(s));
            } catch (const NumericError&) {
                out.s_db(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                    std::numeric_limits<double>::quiet_NaN();
                out.singular_cells.emplace_back(static_cast<int>(r), static_cast<int>(col));
            }
        }
    }
    return out;
}

double symmetry_metric(const SystemModel& model,
                       std::span<const double> f_grid,
                       double delta_m) {
    const Eq13Params p = eq13_params(model);
    const double fc = model.modes[model.drive_port].f;
    const std::size_t n = f_grid.size();
    if (n < 2)
        throw ConfigError("symmetry_metric: grid too small");

    // grid must be symmetric about f_c
    const double span = std::abs(f_grid.back() - f_grid.front());
    for (std::size_t i = 0; i < n; ++i) {
        const double x_lo = f_grid[i] - fc;
        const double x_hi = f_grid[n - 1 - i] - fc;
        if (std::abs(x_lo + x_hi) > 1e-9 * std::max(span, 1.0))
            throw ConfigError("symmetry_metric: probe grid not symmetric about f_c");
    }

    double metric = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = f_grid[i] - fc;
        if (x < 0.0)
            continue;
        const double up = db(std::abs(eq13_detuned(p, x, delta_m)));
        const double dn = db(std::abs(eq13_detuned(p, -x, -delta_m)));
        metric = std::max(metric, std::abs(up - dn));
    }
    return metric;
}

} // namespace cavmag
