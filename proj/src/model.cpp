#include "cavmag/model.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace cavmag {

namespace {

void check_mode(const ModeParams& mode, int index) {
    std::ostringstream msg;
    if (!(mode.f > 0.0)) {
        msg << "mode " << index << " ('" << mode.label << "'): frequency must be positive, got " << mode.f;
        throw ConfigError(msg.str());
    }
    if (mode.intrinsic_damping < 0.0 || mode.external_damping < 0.0) {
        msg << "mode " << index << " ('" << mode.label << "'): negative damping rate";
        throw ConfigError(msg.str());
    }
}

} // namespace

double cooperative_rate(double kappa, double gamma) {
    if (kappa < 0.0 || gamma < 0.0)
        throw ConfigError("cooperative_rate: negative damping rate");
    return std::sqrt(kappa * gamma);
}

const CouplingSpec& SystemModel::pair_coupling() const {
    if (size() != 2 || couplings.size() != 1)
        throw ConfigError("pair_coupling: model must have exactly two modes and one coupling");
    return couplings.begin()->second;
}

SystemModel build_system(std::vector<ModeParams> modes,
                         const std::vector<std::tuple<int, int, CouplingSpec>>& couplings,
                         int drive_port) {
    if (modes.empty())
        throw ConfigError("build_system: at least one mode required");
    const int n = static_cast<int>(modes.size());
    for (int k = 0; k < n; ++k)
        check_mode(modes[k], k);
    if (drive_port < 0 || drive_port >= n)
        throw ConfigError("build_system: drive_port out of range");

    SystemModel model;
    model.modes = std::move(modes);
    model.drive_port = drive_port;

    for (const auto& [i, j, spec_in] : couplings) {
        if (i < 0 || i >= n || j < 0 || j >= n) {
            std::ostringstream msg;
            msg << "build_system: coupling (" << i << ", " << j << ") references a mode outside 0.." << n - 1;
            throw ConfigError(msg.str());
        }
        if (i == j)
            throw ConfigError("build_system: coupling must join two distinct modes");
        CouplingSpec spec = spec_in;
        if (spec.j < 0.0 || spec.gamma_d < 0.0)
            throw ConfigError("build_system: negative coupling strength");
        if (spec.theta < -std::numbers::pi || spec.theta > std::numbers::pi)
            throw ConfigError("build_system: coupling phase outside [-pi, pi]");

        // store with i < j; orientation swap flips the phase sign
        std::pair<int, int> key{i, j};
        if (i > j) {
            key = {j, i};
            spec.theta = -spec.theta;
        }
        if (model.couplings.count(key))
            throw ConfigError("build_system: duplicate coupling pair");

        if (spec.mode == CouplingMode::FromBath) {
            const double derived = cooperative_rate(model.modes[key.first].external_damping,
                                                    model.modes[key.second].external_damping);
            if (spec.gamma_d != 0.0 &&
                std::abs(spec.gamma_d - derived) > 1e-12 * std::max(derived, 1.0)) {
                std::ostringstream msg;
                msg << "build_system: FromBath coupling Gamma=" << spec.gamma_d
                    << " inconsistent with sqrt(kappa*gamma)=" << derived;
                throw ConfigError(msg.str());
            }
            spec.gamma_d = derived;
        }
        model.couplings.emplace(key, spec);
    }

    model.passive = true;
    for (const auto& [key, spec] : model.couplings) {
        const double product = model.modes[key.first].total_damping() *
                               model.modes[key.second].total_damping();
        if (spec.gamma_d * spec.gamma_d > product)
            model.passive = false;
    }
    return model;
}

Eigen::MatrixXcd dynamics_matrix(const SystemModel& model) {
    const int n = model.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        m(k, k) = model.modes[k].complex_frequency();
    const cplx minus_i{0.0, -1.0};
    for (const auto& [key, spec] : model.couplings) {
        const cplx phase = std::polar(1.0, spec.theta);
        m(key.first, key.second) = spec.j + minus_i * spec.gamma_d * phase;
        m(key.second, key.first) = spec.j + minus_i * spec.gamma_d * std::conj(phase);
    }
    return m;
}

std::vector<PassivityEntry> validate_passivity(const SystemModel& model) {
    std::vector<PassivityEntry> report;
    report.reserve(model.couplings.size());
    for (const auto& [key, spec] : model.couplings) {
        PassivityEntry entry;
        entry.i = key.first;
        entry.j = key.second;
        entry.gamma_sq = spec.gamma_d * spec.gamma_d;
        entry.damping_product = model.modes[key.first].total_damping() *
                                model.modes[key.second].total_damping();
        entry.passive = entry.gamma_sq <= entry.damping_product;
        report.push_back(entry);
    }
    return report;
}

} // namespace cavmag
