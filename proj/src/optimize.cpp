#include "magcool/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "magcool/cooling.hpp"
#include "magcool/errors.hpp"
#include "magcool/parallel.hpp"

namespace magcool {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Coord { Rs, PhiS, EpsMag, EpsArg, Jac, Jmc, Jam };

struct Bound {
    double lo;
    double hi;
    bool periodic;
};

struct Space {
    SystemParams base;
    std::vector<Coord> coords;
    std::vector<Bound> bounds;

    std::vector<double> start() const {
        std::vector<double> x;
        for (Coord c : coords) {
            switch (c) {
                case Coord::Rs: x.push_back(base.r_s); break;
                case Coord::PhiS: x.push_back(base.phi_s); break;
                case Coord::EpsMag: x.push_back(std::abs(base.eps_a)); break;
                case Coord::EpsArg: x.push_back(std::arg(base.eps_a)); break;
                case Coord::Jac: x.push_back(base.J_ac); break;
                case Coord::Jmc: x.push_back(base.J_mc); break;
                case Coord::Jam: x.push_back(base.J_am); break;
            }
        }
        return x;
    }

    bool inside(const std::vector<double>& x) const {
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (!std::isfinite(x[k])) return false;
            if (!bounds[k].periodic && (x[k] < bounds[k].lo || x[k] > bounds[k].hi)) return false;
        }
        return true;
    }

    SystemParams apply(const std::vector<double>& x) const {
        SystemParams p = base;
        double mag = std::abs(base.eps_a);
        double arg = std::arg(base.eps_a);
        bool eps = false;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double v = bounds[k].periodic ? std::fmod(std::fmod(x[k], kTwoPi) + kTwoPi, kTwoPi) : x[k];
            switch (coords[k]) {
                case Coord::Rs: p.r_s = v; break;
                case Coord::PhiS: p.phi_s = v; break;
                case Coord::EpsMag: mag = v; eps = true; break;
                case Coord::EpsArg: arg = v; eps = true; break;
                case Coord::Jac: p.J_ac = v; break;
                case Coord::Jmc: p.J_mc = v; break;
                case Coord::Jam: p.J_am = v; break;
            }
        }
        if (eps) p.eps_a = std::polar(mag, arg);
        return p;
    }
};

Space make_space(const SystemParams& base, const std::vector<FreeParam>& free) {
    Space s{base, {}, {}};
    const double eps_max = 0.95 * base.parametric_threshold();
    auto add = [&](Coord c, Bound b) {
        if (std::find(s.coords.begin(), s.coords.end(), c) != s.coords.end())
            throw ConfigError("free parameter listed twice");
        s.coords.push_back(c);
        s.bounds.push_back(b);
    };
    for (FreeParam f : free) {
        switch (f) {
            case FreeParam::Rs: add(Coord::Rs, {0.0, 3.0, false}); break;
            case FreeParam::PhiS: add(Coord::PhiS, {0.0, kTwoPi, true}); break;
            case FreeParam::EpsA:
                add(Coord::EpsMag, {0.0, eps_max, false});
                add(Coord::EpsArg, {0.0, kTwoPi, true});
                break;
            case FreeParam::Jac: add(Coord::Jac, {0.0, 1.0, false}); break;
            case FreeParam::Jmc: add(Coord::Jmc, {0.0, 1.0, false}); break;
            case FreeParam::Jam: add(Coord::Jam, {0.0, 1.0, false}); break;
        }
    }
    return s;
}

double grid_value(const Bound& b, int k, int n) {
    if (b.periodic) return b.lo + (b.hi - b.lo) * k / n;
    if (n == 1) return 0.5 * (b.lo + b.hi);
    return b.lo + (b.hi - b.lo) * k / (n - 1);
}

struct Run {
    const Space* space;
    Objective objective;
    int evaluations = 0;
    double best = kInf;
    std::vector<double> best_x;
    std::vector<TracePoint> trace;

    double operator()(const std::vector<double>& x) {
        ++evaluations;
        const double f = space->inside(x) ? objective_value(space->apply(x), objective) : kInf;
        if (f < best) {
            best = f;
            best_x = x;
            trace.push_back({evaluations, f});
        }
        return f;
    }
};

double gsl_objective(const gsl_vector* v, void* ctx) {
    auto* run = static_cast<Run*>(ctx);
    std::vector<double> x(v->size);
    for (std::size_t k = 0; k < v->size; ++k) x[k] = gsl_vector_get(v, k);
    return (*run)(x);
}

struct SimplexOutcome {
    Run run;
    bool converged = false;
};

SimplexOutcome simplex(const Space& space, Objective objective, const std::vector<double>& x0,
                       const OptimizerOptions& opt) {
    SimplexOutcome out{Run{&space, objective, 0, kInf, {}, {}}, false};
    const std::size_t n = x0.size();
    out.run(x0);

    using Minimizer = std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;
    using Vector = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
    Minimizer m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
    Vector x(gsl_vector_alloc(n), &gsl_vector_free);
    Vector step(gsl_vector_alloc(n), &gsl_vector_free);
    for (std::size_t k = 0; k < n; ++k) {
        const Bound& b = space.bounds[k];
        double s = b.periodic ? kTwoPi / 28.0 : 0.05 * (b.hi - b.lo);
        if (!b.periodic && x0[k] + s > b.hi) s = -s;  // keep the first simplex inside the box
        gsl_vector_set(x.get(), k, x0[k]);
        gsl_vector_set(step.get(), k, s);
    }
    gsl_multimin_function fn{&gsl_objective, n, &out.run};
    if (gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) return out;

    while (out.run.evaluations < opt.max_evaluations) {
        if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), opt.tolerance) == GSL_SUCCESS) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace

FreeParam parse_free_param(std::string_view name) {
    if (name == "r_s") return FreeParam::Rs;
    if (name == "phi_s") return FreeParam::PhiS;
    if (name == "eps_a") return FreeParam::EpsA;
    if (name == "J_ac") return FreeParam::Jac;
    if (name == "J_mc") return FreeParam::Jmc;
    if (name == "J_am") return FreeParam::Jam;
    throw ConfigError("unknown free parameter '" + std::string(name) +
                      "' (expected r_s, phi_s, eps_a, J_ac, J_mc or J_am)");
}

Objective parse_objective(std::string_view name) {
    if (name == "n_c") return Objective::Occupancy;
    if (name == "ratio") return Objective::HeatingRatio;
    if (name == "stokes") return Objective::StokesPsd;
    throw ConfigError("unknown objective '" + std::string(name) + "' (expected n_c, ratio or stokes)");
}

std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::Occupancy: return "n_c";
        case Objective::HeatingRatio: return "ratio";
        case Objective::StokesPsd: return "stokes";
    }
    return "?";
}

double objective_value(const SystemParams& params, Objective objective) {
    RatePair r;
    try {
        params.validate();
        r = rates(params);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Convergence) throw;
        return kInf;
    }
    switch (objective) {
        case Objective::Occupancy:
            if (params.gamma_c + r.net() <= 0.0) return kInf;
            return steady_occupancy(params, r.cooling, r.heating);
        case Objective::HeatingRatio:
            return r.cooling > 0.0 ? r.heating / r.cooling : kInf;
        case Objective::StokesPsd:
            return std::abs(r.heating);
    }
    return kInf;
}

OptimizationResult optimize_interference(const SystemParams& base, const std::vector<FreeParam>& free,
                                         Objective objective, const OptimizerOptions& opt) {
    static std::once_flag gsl_quiet;
    std::call_once(gsl_quiet, [] { gsl_set_error_handler_off(); });

    base.validate();
    OptimizationResult result;
    result.optimal = base;
    result.base_value = objective_value(base, objective);
    result.objective_value = result.base_value;
    result.evaluations = 1;
    if (!std::isfinite(result.base_value))
        throw InstabilityError("optimize: the base point is unstable or heats without bound");
    if (free.empty()) {
        result.converged = true;
        result.trace.push_back({1, result.base_value});
        return result;
    }

    const Space space = make_space(base, free);
    const std::size_t dims = space.coords.size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < dims; ++k) total *= static_cast<std::size_t>(opt.grid_points);

    std::vector<double> grid_f(total);
    auto grid_point = [&](std::size_t index) {
        std::vector<double> x(dims);
        for (std::size_t k = 0; k < dims; ++k) {
            x[k] = grid_value(space.bounds[k], static_cast<int>(index % opt.grid_points), opt.grid_points);
            index /= opt.grid_points;
        }
        return x;
    };
    parallel_for(total, opt.threads, [&](std::size_t i) {
        grid_f[i] = objective_value(space.apply(grid_point(i)), objective);
    });
    result.evaluations += static_cast<int>(total);

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return grid_f[a] < grid_f[b]; });
    if (!std::isfinite(grid_f[order.front()]))
        throw InstabilityError("optimize: every coarse grid point is unstable or out of bounds");

    std::vector<std::vector<double>> starts{space.start()};
    for (std::size_t k = 0; k < order.size() && static_cast<int>(starts.size()) < opt.starts + 1; ++k)
        if (std::isfinite(grid_f[order[k]])) starts.push_back(grid_point(order[k]));

    std::vector<SimplexOutcome> runs(starts.size());
    parallel_for(starts.size(), opt.threads, [&](std::size_t i) { runs[i] = simplex(space, objective, starts[i], opt); });

    const SimplexOutcome* best = nullptr;
    for (const auto& r : runs) {
        result.evaluations += r.run.evaluations;
        if (!best || r.run.best < best->run.best) best = &r;
    }
    if (best && best->run.best <= result.base_value) {
        result.optimal = space.apply(best->run.best_x);
        result.objective_value = best->run.best;
        result.trace = best->run.trace;
        result.converged = best->converged;
    }
    return result;
}

nlohmann::json to_json(const OptimizationResult& r, Objective objective) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace) trace.push_back({t.evaluations, t.best});
    return {{"objective", std::string(to_string(objective))},
            {"objective_value", r.objective_value},
            {"base_value", r.base_value},
            {"converged", r.converged},
            {"evaluations", r.evaluations},
            {"optimal",
             {{"r_s", r.optimal.r_s},
              {"phi_s", r.optimal.phi_s * 180.0 / std::numbers::pi},
              {"eps_a", {{"re", r.optimal.eps_a.real()}, {"im", r.optimal.eps_a.imag()}}},
              {"J_ac", r.optimal.J_ac},
              {"J_mc", r.optimal.J_mc},
              {"J_am", r.optimal.J_am}}},
            {"trace", trace}};
}

}  // namespace magcool
