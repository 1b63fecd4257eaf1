#include "magcool/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "magcool/errors.hpp"

namespace magcool {

namespace {

constexpr cplx I{0.0, 1.0};

using State = std::array<cplx, 3>;

struct CmiSystem {
    cplx kappa_a, kappa_m, kappa_c;
    cplx eps;
    cplx drive_a, drive_m;
    double g;

    // Polynomial form of the steady-state equations.
    State f(const State& z) const {
        const auto& [a, m, c] = z;
        const double rc = c.real();
        return {-kappa_a * a - 2.0 * I * g * rc * m + drive_a - 2.0 * I * eps * std::conj(a),
                -kappa_m * m - 2.0 * I * g * rc * a + drive_m,
                -kappa_c * c - I * g * (a * std::conj(m) + std::conj(a) * m)};
    }

    // |x - RHS(x)| of the fixed-point form; equal to |f_k / kappa_k|.
    double residual(const State& z) const {
        const State r = f(z);
        return std::max({std::abs(r[0] / kappa_a), std::abs(r[1] / kappa_m), std::abs(r[2] / kappa_c)});
    }

    // Real 6x6 Jacobian over (Re a, Im a, Re m, Im m, Re c, Im c).
    Eigen::Matrix<double, 6, 6> jacobian(const State& z) const {
        const auto& [a, m, c] = z;
        const double rc = c.real();
        // holomorphic (p) and antiholomorphic (q) derivatives, [equation][variable]
        cplx p[3][3] = {{-kappa_a, -2.0 * I * g * rc, -I * g * m},
                        {-2.0 * I * g * rc, -kappa_m, -I * g * a},
                        {-I * g * std::conj(m), -I * g * std::conj(a), -kappa_c}};
        cplx q[3][3] = {{-2.0 * I * eps, 0.0, -I * g * m},
                        {0.0, 0.0, -I * g * a},
                        {-I * g * m, -I * g * a, 0.0}};
        Eigen::Matrix<double, 6, 6> jac;
        for (int k = 0; k < 3; ++k) {
            for (int j = 0; j < 3; ++j) {
                const cplx dx = p[k][j] + q[k][j];
                const cplx dy = I * (p[k][j] - q[k][j]);
                jac(2 * k, 2 * j) = dx.real();
                jac(2 * k + 1, 2 * j) = dx.imag();
                jac(2 * k, 2 * j + 1) = dy.real();
                jac(2 * k + 1, 2 * j + 1) = dy.imag();
            }
        }
        return jac;
    }
};

struct NewtonOutcome {
    State z;
    double residual;
    int iterations;
    bool converged;
};

NewtonOutcome newton(const CmiSystem& sys, State z, const CmiSolverOptions& opt) {
    double res = sys.residual(z);
    int it = 0;
    for (; it < opt.max_iterations && res >= opt.tolerance; ++it) {
        const State fz = sys.f(z);
        Eigen::Matrix<double, 6, 1> rhs;
        for (int k = 0; k < 3; ++k) {
            rhs(2 * k) = -fz[k].real();
            rhs(2 * k + 1) = -fz[k].imag();
        }
        const Eigen::Matrix<double, 6, 1> step = sys.jacobian(z).fullPivLu().solve(rhs);
        if (!step.allFinite()) break;

        double scale = 1.0;
        bool improved = false;
        for (int h = 0; h <= opt.max_halvings; ++h, scale *= 0.5) {
            State trial = z;
            for (int k = 0; k < 3; ++k) trial[k] += scale * cplx(step(2 * k), step(2 * k + 1));
            const double trial_res = sys.residual(trial);
            if (trial_res < res) {
                z = trial;
                res = trial_res;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return {z, res, it, res < opt.tolerance};
}

double distance(const State& x, const State& y) {
    return std::max({std::abs(x[0] - y[0]), std::abs(x[1] - y[1]), std::abs(x[2] - y[2])});
}

}  // namespace

void check_parametric_threshold(const SystemParams& p) {
    const double loss = std::norm(cplx(p.gamma_a / 2.0, p.delta_a));
    const double gain = 4.0 * std::norm(p.eps_a);
    if (gain >= loss) {
        std::ostringstream os;
        os.precision(17);
        os << "cavity at or above parametric threshold: 4|eps_a|^2 = " << gain
           << " >= |gamma_a/2 + i delta_a|^2 = " << loss << " (eps_a = " << p.eps_a << ", gamma_a = " << p.gamma_a
           << ", delta_a = " << p.delta_a << ")";
        throw ThresholdError(os.str());
    }
}

SteadyState solve_mcm(const SystemParams& p, cplx drive) {
    p.validate();
    check_parametric_threshold(p);
    // kappa a + 2i eps a* = Omega, together with its conjugate, is linear in (a, a*).
    const cplx kappa(p.gamma_a / 2.0, p.delta_a);
    const double det = std::norm(kappa) - 4.0 * std::norm(p.eps_a);
    const cplx a0 = (std::conj(kappa) * drive - 2.0 * I * p.eps_a * std::conj(drive)) / det;

    SteadyState s;
    s.a0 = a0;
    s.residual = std::abs(a0 - (drive - 2.0 * I * p.eps_a * std::conj(a0)) / kappa);
    s.iterations = 0;
    s.roots = {{a0, 0.0, 0.0}};
    return s;
}

double cmi_residual(const SystemParams& p, cplx cavity_drive, cplx magnon_drive, double coupling, cplx a0, cplx m0,
                    cplx c0) {
    const CmiSystem sys{cplx(p.gamma_a / 2.0, p.delta_a), cplx(p.gamma_m / 2.0, p.delta_m), cplx(p.gamma_c / 2.0, 1.0),
                        p.eps_a, cavity_drive, magnon_drive, coupling};
    return sys.residual({a0, m0, c0});
}

SteadyState solve_cmi(const SystemParams& p, cplx cavity_drive, cplx magnon_drive, double coupling,
                      const CmiSolverOptions& opt) {
    p.validate();
    check_parametric_threshold(p);
    if (!std::isfinite(std::abs(cavity_drive)) || !std::isfinite(std::abs(magnon_drive)) || !std::isfinite(coupling))
        throw DomainError("solve_cmi: drives and coupling must be finite");

    const CmiSystem sys{cplx(p.gamma_a / 2.0, p.delta_a), cplx(p.gamma_m / 2.0, p.delta_m), cplx(p.gamma_c / 2.0, 1.0),
                        p.eps_a, cavity_drive, magnon_drive, coupling};

    // Decoupled solution as the reference guess.
    SystemParams cavity_only = p;
    const cplx a_dec = solve_mcm(cavity_only, cavity_drive).a0;
    const cplx m_dec = magnon_drive / sys.kappa_m;
    const cplx c_dec = -I * coupling * (a_dec * std::conj(m_dec) + std::conj(a_dec) * m_dec) / sys.kappa_c;
    const State base{a_dec, m_dec, c_dec};

    std::vector<State> guesses{base};
    for (int k = 0; k < opt.starts; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.5) / opt.starts;
        const double stretch = 1.0 + 0.5 * std::cos(t);
        const cplx rot = std::polar(1.0, 0.25 * std::sin(t));
        const double scale = std::max({std::abs(a_dec), std::abs(m_dec), 1.0});
        guesses.push_back({a_dec * stretch * rot, m_dec * stretch * std::conj(rot),
                           c_dec * stretch + cplx(0.1 * scale * std::cos(t), 0.1 * scale * std::sin(t))});
    }

    std::vector<NewtonOutcome> converged;
    double best_failed = std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    for (const auto& g : guesses) {
        const NewtonOutcome out = newton(sys, g, opt);
        total_iterations += out.iterations;
        if (!out.converged) {
            best_failed = std::min(best_failed, out.residual);
            continue;
        }
        const bool seen = std::any_of(converged.begin(), converged.end(), [&](const NewtonOutcome& o) {
            return distance(o.z, out.z) <= opt.distinct_root_distance;
        });
        if (!seen) converged.push_back(out);
    }
    if (converged.empty()) {
        std::ostringstream os;
        os << "solve_cmi did not converge in " << opt.max_iterations << " iterations from any of " << guesses.size()
           << " starts; best residual " << best_failed;
        throw ConvergenceError(os.str(), best_failed);
    }

    const auto chosen = std::min_element(converged.begin(), converged.end(), [](const auto& x, const auto& y) {
        return std::abs(x.z[2]) < std::abs(y.z[2]);
    });
    SteadyState s;
    s.a0 = chosen->z[0];
    s.m0 = chosen->z[1];
    s.c0 = chosen->z[2];
    s.residual = chosen->residual;
    s.iterations = total_iterations;
    s.multistable = converged.size() > 1;
    for (const auto& o : converged) s.roots.push_back(o.z);
    return s;
}

EffectiveCouplings effective_couplings(const SteadyState& s, double coupling) {
    return {coupling * std::abs(s.m0), coupling * std::abs(s.a0), 2.0 * coupling * s.c0.real()};
}

DriftModel build_drift(const SystemParams& params, bool include_cm) {
    params.validate();
    const SystemParams p = params.fluctuation_view();
    const int n = include_cm ? 6 : 4;

    DriftModel model;
    model.dimension = n;
    Eigen::MatrixXcd& A = model.drift;
    A = Eigen::MatrixXcd::Zero(n, n);

    const cplx kappa_a(p.gamma_a / 2.0, p.delta_a);
    const cplx kappa_m(p.gamma_m / 2.0, p.delta_m);
    A(0, 0) = -kappa_a;
    A(0, 1) = -2.0 * I * p.eps_a;
    A(0, 2) = -I * p.J_am;
    A(2, 2) = -kappa_m;
    A(2, 0) = -I * p.J_am;
    if (include_cm) {
        A(0, 4) = A(0, 5) = -I * p.J_ac;
        A(2, 4) = A(2, 5) = -I * p.J_mc;
        A(4, 4) = -cplx(p.gamma_c / 2.0, 1.0);
        A(4, 0) = A(4, 1) = -I * p.J_ac;
        A(4, 2) = A(4, 3) = -I * p.J_mc;
    }
    // Each creation-operator row is the conjugate of its partner with the pair swapped.
    for (int r = 0; r < n; r += 2) {
        for (int c = 0; c < n; c += 2) {
            A(r + 1, c + 1) = std::conj(A(r, c));
            A(r + 1, c) = std::conj(A(r, c + 1));
        }
    }

    model.noise_map = Eigen::MatrixXd::Zero(n, n);
    const double rates[3] = {p.gamma_a, p.gamma_m, p.gamma_c};
    for (int k = 0; k < n; ++k) model.noise_map(k, k) = std::sqrt(rates[k / 2]);

    Eigen::MatrixXcd& C = model.input_correlations;
    C = Eigen::MatrixXcd::Zero(n, n);
    const double ns = p.squeezed_photons();
    const double ms = p.squeezed_correlation();
    C(0, 1) = ns + 1.0;
    C(1, 0) = ns;
    C(0, 0) = ms * std::polar(1.0, -2.0 * p.phi_s);
    C(1, 1) = ms * std::polar(1.0, 2.0 * p.phi_s);
    C(2, 3) = p.nbar_m + 1.0;
    C(3, 2) = p.nbar_m;
    if (include_cm) {
        C(4, 5) = p.nbar_c + 1.0;
        C(5, 4) = p.nbar_c;
    }
    return model;
}

StabilityReport stability(const DriftModel& model) {
    if (!model.drift.allFinite()) throw DomainError("drift matrix has non-finite entries");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.drift, false);
    StabilityReport r;
    double worst = -std::numeric_limits<double>::infinity();
    r.margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const cplx ev = solver.eigenvalues()(k);
        r.eigenvalue_real_parts.push_back(ev.real());
        r.margin = std::min(r.margin, std::abs(ev.real()));
        if (ev.real() > worst) {
            worst = ev.real();
            r.worst_eigenvalue = ev;
        }
    }
    std::sort(r.eigenvalue_real_parts.begin(), r.eigenvalue_real_parts.end());
    r.stable = worst < 0.0;
    return r;
}

StabilityReport assert_stable(const DriftModel& model) {
    StabilityReport r = stability(model);
    if (!r.stable) {
        std::ostringstream os;
        os.precision(17);
        os << "unstable " << model.dimension << "x" << model.dimension << " drift: eigenvalue "
           << r.worst_eigenvalue << " has nonnegative real part";
        throw InstabilityError(os.str());
    }
    return r;
}

}  // namespace magcool
