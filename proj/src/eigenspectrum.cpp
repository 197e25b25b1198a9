#include "cavmag/eigenspectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cavmag {

namespace {

// complex uncoupled frequencies and the off-diagonal product of a two-mode model
struct TwoModeView {
    cplx wc, wm;       // drive-mode and swept-mode complex frequencies
    cplx offdiag_prod; // (J - i*G*e^{i*th}) * (J - i*G*e^{-i*th})
    double j = 0.0, gamma_d = 0.0;
};

TwoModeView two_mode_view(const SystemModel& model) {
    if (model.size() != 2)
        throw ConfigError("expected a two-mode model");
    const CouplingSpec& c = model.pair_coupling();
    TwoModeView v;
    const int cav = model.drive_port;
    const int mag = 1 - cav;
    v.wc = model.modes[cav].complex_frequency();
    v.wm = model.modes[mag].complex_frequency();
    const cplx minus_i{0.0, -1.0};
    const cplx ph = std::polar(1.0, c.theta);
    v.offdiag_prod = (c.j + minus_i * c.gamma_d * ph) * (c.j + minus_i * c.gamma_d * std::conj(ph));
    v.j = c.j;
    v.gamma_d = c.gamma_d;
    return v;
}

// permutations of {0..n-1} for small n
std::vector<std::vector<int>> permutations(int n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

} // namespace

std::pair<cplx, cplx> two_mode_eigenvalues(const SystemModel& model) {
    if (model.size() != 2 || model.couplings.size() != 1)
        throw ConfigError("two_mode_eigenvalues: model must have two modes and one coupling");
    const CouplingSpec& c = model.pair_coupling();
    if (c.theta != 0.0)
        throw ConfigError("two_mode_eigenvalues: nonzero coupling phase; use n_mode_eigenvalues");
    const cplx wc = model.modes[0].complex_frequency();
    const cplx wm = model.modes[1].complex_frequency();
    const cplx g{c.j, -c.gamma_d};
    const cplx mean = 0.5 * (wc + wm);
    const cplx half = 0.5 * (wc - wm);
    const cplx root = std::sqrt(half * half + g * g);
    return {mean + root, mean - root};
}

std::vector<cplx> n_mode_eigenvalues(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
        throw ConfigError("n_mode_eigenvalues: matrix must be square");
    if (m.rows() == 0)
        return {};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericError("n_mode_eigenvalues: eigensolver did not converge");
    const auto& vals = solver.eigenvalues();
    return {vals.data(), vals.data() + vals.size()};
}

std::vector<Branch> dispersion_sweep(const SystemModel& model,
                                     std::span<const double> delta_grid,
                                     int swept_mode, int reference_mode) {
    const int n = model.size();
    if (n < 2)
        throw ConfigError("dispersion_sweep: need at least two modes");
    if (delta_grid.empty())
        throw ConfigError("dispersion_sweep: empty detuning grid");
    if (reference_mode < 0)
        reference_mode = model.drive_port;
    if (swept_mode < 0)
        swept_mode = (reference_mode == 0) ? 1 : 0;
    if (swept_mode < 0 || swept_mode >= n || reference_mode < 0 || reference_mode >= n ||
        swept_mode == reference_mode)
        throw ConfigError("dispersion_sweep: invalid swept/reference mode indices");

    const Eigen::MatrixXcd base = dynamics_matrix(model);
    const double f_ref = model.modes[reference_mode].f;
    const double d_swept = model.modes[swept_mode].total_damping();
    const auto perms = permutations(n);

    std::vector<Branch> branches(n);
    for (auto& b : branches) {
        b.detuning.reserve(delta_grid.size());
        b.eigenfrequency.reserve(delta_grid.size());
    }

    Eigen::MatrixXcd prev_vecs;          // columns ordered by branch
    std::vector<cplx> prev_vals(n);

    for (std::size_t g = 0; g < delta_grid.size(); ++g) {
        Eigen::MatrixXcd m = base;
        m(swept_mode, swept_mode) = cplx{f_ref + delta_grid[g], -d_swept};
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/true);
        if (solver.info() != Eigen::Success)
            throw NumericError("dispersion_sweep: eigensolver did not converge");
        Eigen::VectorXcd vals = solver.eigenvalues();
        Eigen::MatrixXcd vecs = solver.eigenvectors();

        std::vector<int> order(n);
        if (g == 0) {
            // first point: ascending real part
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return vals(a).real() < vals(b).real(); });
        } else {
            // overlap of previous branch vectors with current eigenvectors
            Eigen::MatrixXd overlap(n, n);
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j)
                    overlap(k, j) = std::abs(prev_vecs.col(k).adjoint() * vecs.col(j))(0, 0);

            double best_score = -1.0, second_score = -1.0;
            double best_dist = 0.0;
            const std::vector<int>* best = nullptr;
            for (const auto& p : perms) {
                double score = 0.0, dist = 0.0;
                for (int k = 0; k < n; ++k) {
                    score += overlap(k, p[k]) * overlap(k, p[k]);
                    dist += std::norm(vals(p[k]) - prev_vals[k]);
                }
                const bool better =
                    score > best_score + 1e-12 ||
                    (score > best_score - 1e-12 && dist < best_dist);
                if (better) {
                    second_score = best_score;
                    best_score = score;
                    best_dist = dist;
                    best = &p;
                } else if (score > second_score) {
                    second_score = score;
                }
            }
            order = *best;
            // eigenvectors coalesce near an exceptional point and the overlap
            // ranking degenerates; fall back to frequency proximity there
            if (best_score - second_score < 1e-6) {
                double dmin = -1.0;
                for (const auto& p : perms) {
                    double dist = 0.0;
                    for (int k = 0; k < n; ++k)
                        dist += std::norm(vals(p[k]) - prev_vals[k]);
                    if (dmin < 0.0 || dist < dmin) {
                        dmin = dist;
                        order = p;
                    }
                }
            }
        }

        Eigen::MatrixXcd sorted_vecs(n, n);
        for (int k = 0; k < n; ++k) {
            sorted_vecs.col(k) = vecs.col(order[k]);
            prev_vals[k] = vals(order[k]);
            branches[k].detuning.push_back(delta_grid[g]);
            branches[k].eigenfrequency.push_back(vals(order[k]));
        }
        prev_vecs = std::move(sorted_vecs);
    }

    for (int k = 0; k < n; ++k)
        branches[k].label = "branch-" + std::to_string(k);
    return branches;
}

std::vector<ExceptionalPoint> find_exceptional_points(const SystemModel& model,
                                                      double lo, double hi,
                                                      int scan_points) {
    if (model.size() != 2 || model.couplings.size() != 1)
        throw ConfigError("find_exceptional_points: model must have two modes and one coupling");
    if (!(hi > lo))
        throw ConfigError("find_exceptional_points: empty search range");
    scan_points = std::max(scan_points, 16);

    const TwoModeView v = two_mode_view(model);
    // discriminant D(delta) = ((wc - wm(delta))/2)^2 + offdiag product,
    // with the swept mode at f_ref + delta
    const double f_ref = std::real(v.wc);
    const auto disc = [&](double delta) {
        const cplx wm{f_ref + delta, std::imag(v.wm)};
        const cplx half = 0.5 * (v.wc - wm);
        return half * half + v.offdiag_prod;
    };
    const auto disc2 = [&](double delta) { return std::norm(disc(delta)); };

    const double coupling_scale = v.j * v.j + v.gamma_d * v.gamma_d;
    const double threshold = 1e-6 * coupling_scale;

    std::vector<double> grid(scan_points);
    const double step = (hi - lo) / (scan_points - 1);
    for (int i = 0; i < scan_points; ++i)
        grid[i] = lo + i * step;

    std::vector<ExceptionalPoint> found;
    const auto polish = [&](double a, double b) {
        // golden-section minimization of |D|^2
        constexpr double inv_phi = 0.6180339887498949;
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = disc2(x1), f2 = disc2(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-9 * std::max({std::abs(a), std::abs(b), 1.0}); ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = disc2(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = disc2(x2);
            }
        }
        const double x = 0.5 * (a + b);
        const double ad = std::abs(disc(x));
        if (ad < threshold)
            found.push_back({x, ad});
    };

    for (int i = 0; i < scan_points; ++i) {
        const double fi = disc2(grid[i]);
        const bool left_ok = (i == 0) || disc2(grid[i - 1]) >= fi;
        const bool right_ok = (i == scan_points - 1) || disc2(grid[i + 1]) >= fi;
        if (left_ok && right_ok) {
            const double a = grid[std::max(i - 1, 0)];
            const double b = grid[std::min(i + 1, scan_points - 1)];
            if (b > a)
                polish(a, b);
        }
    }

    // deduplicate nearby hits
    std::sort(found.begin(), found.end(),
              [](const ExceptionalPoint& a, const ExceptionalPoint& b) { return a.delta_m < b.delta_m; });
    std::vector<ExceptionalPoint> out;
    for (const auto& ep : found) {
        if (out.empty() || std::abs(ep.delta_m - out.back().delta_m) > 0.5 * step)
            out.push_back(ep);
        else if (ep.abs_discriminant < out.back().abs_discriminant)
            out.back() = ep;
    }
    return out;
}

} // namespace cavmag
