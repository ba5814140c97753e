// khess: radial k-Hessian / Lotka-Volterra phase-plane toolkit CLI.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "khess/bifurcation.hpp"
#include "khess/classify.hpp"
#include "khess/config.hpp"
#include "khess/csv.hpp"
#include "khess/exponents.hpp"
#include "khess/solver.hpp"

using nlohmann::json;
using namespace khess;

namespace {

constexpr const char* kSchemaVersion = "1";

json number_or_inf(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

json point_json(const StationaryPoint& sp) {
    json j;
    j["label"] = to_string(sp.label);
    j["x"] = sp.x;
    j["y"] = sp.y;
    j["kind"] = to_string(sp.kind);
    j["in_closed_quadrant"] = sp.in_closed_quadrant;
    j["eigenvalues"] = {{sp.eig1.real(), sp.eig1.imag()}, {sp.eig2.real(), sp.eig2.imag()}};
    if (sp.eigvec1) j["eigvec1"] = {(*sp.eigvec1)[0], (*sp.eigvec1)[1]};
    if (sp.eigvec2) j["eigvec2"] = {(*sp.eigvec2)[0], (*sp.eigvec2)[1]};
    return j;
}

json status_json(const AssumptionEntry& e) {
    json j;
    j["status"] = e.status == AssumptionStatus::holds    ? "holds"
                  : e.status == AssumptionStatus::fails  ? "fails"
                                                         : "unchecked";
    if (e.witness) j["witness"] = {{"r", e.witness->r}, {"value", e.witness->value}};
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

json report_json(const AssumptionReport& rep) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["rho1"] = status_json(rep.rho1);
    j["rho2"] = status_json(rep.rho2);
    j["rho3"] = status_json(rep.rho3);
    j["rho4"] = status_json(rep.rho4);
    j["rho5"] = status_json(rep.rho5);
    j["rho6"] = status_json(rep.rho6);
    j["rho2_case1"] = rep.rho2_case1;
    j["rho2_case2"] = rep.rho2_case2;
    j["rho4_case1"] = rep.rho4_case1;
    j["rho4_case2"] = rep.rho4_case2;
    j["rho6_case1"] = rep.rho6_case1;
    j["rho6_case2"] = rep.rho6_case2;
    j["boundary_q_equals_qstar"] = rep.boundary_q_equals_qstar;
    j["q_star_l0"] = rep.q_star_l0;
    if (rep.fitted_vartheta) j["fitted_vartheta"] = *rep.fitted_vartheta;
    j["grid"] = {{"rmin", rep.grid_rmin}, {"rmax", rep.grid_rmax}, {"points", rep.grid_points}};
    return j;
}

json classification_json(const Classification& cls) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["verdict"] = to_string(cls.verdict);
    j["limit_point"] = {cls.limit_x, cls.limit_y};
    j["delta"] = cls.delta;
    json cs;
    if (cls.c1) cs["c1"] = *cls.c1;
    if (cls.c2) cs["c2"] = *cls.c2;
    if (cls.c3) cs["c3"] = *cls.c3;
    if (cls.c4) cs["c4"] = *cls.c4;
    j["constants"] = cs;
    if (cls.fitted_c) j["fitted_c"] = *cls.fitted_c;
    if (cls.fitted_decay_exponent) {
        j["fitted_decay_exponent"] = *cls.fitted_decay_exponent;
        j["fit_residual"] = cls.fit_residual;
        j["fit_variable"] = cls.fit_variable;
    }
    if (cls.first_G_minus_time) j["first_G_minus_time"] = *cls.first_G_minus_time;
    if (cls.first_W_minus_time) j["first_W_minus_time"] = *cls.first_W_minus_time;
    if (cls.slow_ty) j["slow_ty"] = *cls.slow_ty;
    j["terminal_distance"] = cls.terminal_distance;
    j["boundary_q_flag"] = cls.boundary_q_flag;
    if (!cls.reason.empty()) j["reason"] = cls.reason;
    return j;
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

struct Cli {
    std::string config_path;
    RunConfig cfg;

    void load() { cfg = load_config(config_path); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial k-Hessian / Lotka-Volterra phase-plane toolkit"};
    app.require_subcommand(1);

    // --- exponents ---------------------------------------------------------
    auto* sc_exp = app.add_subcommand("exponents", "critical exponents and stationary points");
    int e_n = 3, e_k = 1;
    double e_q = 3, e_l0 = 0;
    std::optional<double> e_linf;
    bool e_text = false;
    sc_exp->add_option("--n", e_n)->required();
    sc_exp->add_option("--k", e_k)->required();
    sc_exp->add_option("--q", e_q)->required();
    sc_exp->add_option("--l0", e_l0)->required();
    sc_exp->add_option("--linf", e_linf);
    sc_exp->add_flag("--text", e_text, "aligned text instead of JSON");

    // --- config-driven subcommands -----------------------------------------
    Cli cli;
    auto add_config = [&](CLI::App* sc) {
        sc->add_option("--config", cli.config_path, "config file")->required();
    };

    auto* sc_check = app.add_subcommand("check-weight", "evaluate the structural assumptions");
    add_config(sc_check);

    auto* sc_solve = app.add_subcommand("solve", "integrate the radial IVP");
    double s_w0 = -1.0;
    std::optional<double> s_rmax;
    std::string s_out;
    add_config(sc_solve);
    sc_solve->add_option("--w0", s_w0, "center value w(0) < 0");
    sc_solve->add_option("--rmax", s_rmax);
    sc_solve->add_option("--out", s_out, "profile CSV (r,w,wprime)");

    auto* sc_orbit = app.add_subcommand("orbit", "convert a radial profile to an orbit");
    std::string o_profile, o_out;
    add_config(sc_orbit);
    sc_orbit->add_option("--from-profile", o_profile, "profile CSV")->required();
    sc_orbit->add_option("--out", o_out, "orbit CSV (t,x,y)");

    auto* sc_sing = app.add_subcommand("singular", "construct the singular solution");
    std::string g_out;
    add_config(sc_sing);
    sc_sing->add_option("--out", g_out, "singular profile CSV");

    auto* sc_classify = app.add_subcommand("classify", "omega-limit classification");
    double c_w0 = -1.0;
    std::string c_emit;
    add_config(sc_classify);
    sc_classify->add_option("--w0", c_w0);
    sc_classify->add_option("--emit-orbit", c_emit, "dump the orbit samples as CSV");

    auto* sc_sweep = app.add_subcommand("sweep", "lambda(a) bifurcation sweep");
    double b_amin = 1.0, b_amax = 1e4;
    int b_count = 48, b_jobs = static_cast<int>(std::thread::hardware_concurrency());
    std::string b_out;
    add_config(sc_sweep);
    sc_sweep->add_option("--amin", b_amin);
    sc_sweep->add_option("--amax", b_amax);
    sc_sweep->add_option("--count", b_count);
    sc_sweep->add_option("--jobs", b_jobs, "worker threads (default: cores)");
    sc_sweep->add_option("--out", b_out, "sweep CSV (a,lambda)");

    auto* sc_count = app.add_subcommand("count", "solution count at a parameter level");
    double n_lambda = 0, n_amin = 1.0, n_amax = 1e4;
    int n_count = 48, n_jobs = static_cast<int>(std::thread::hardware_concurrency());
    add_config(sc_count);
    sc_count->add_option("--lambda", n_lambda)->required();
    sc_count->add_option("--amin", n_amin);
    sc_count->add_option("--amax", n_amax);
    sc_count->add_option("--count", n_count);
    sc_count->add_option("--jobs", n_jobs);

    auto* sc_inter = app.add_subcommand("intersections", "regular/singular intersection number");
    double i_a = 1.0;
    std::string i_interval = "1e-6,1";
    add_config(sc_inter);
    sc_inter->add_option("--a", i_a)->required();
    sc_inter->add_option("--interval", i_interval, "lo,hi");

    auto* sc_max = app.add_subcommand("maximal", "maximal-solution iteration");
    double m_lambda = 0;
    std::string m_out;
    add_config(sc_max);
    sc_max->add_option("--lambda", m_lambda)->required();
    sc_max->add_option("--out", m_out, "profile CSV");

    auto* sc_star = app.add_subcommand("lambda-star", "bracket the breakdown parameter");
    add_config(sc_star);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "khess: usage: " << e.what() << "\n";
        return 64;
    }

    try {
        if (*sc_exp) {
            const double linf = e_linf.value_or(e_l0);
            ProblemParams p{e_n, e_k, e_q, 1.0};
            const auto pts0 = stationary_points(p, e_l0);
            const auto ptsi = stationary_points(p, linf);
            const double qs0 = q_star(e_k, e_l0, e_n), qsi = q_star(e_k, linf, e_n);
            const double qj0 = q_jl(e_k, e_l0, e_n), qji = q_jl(e_k, linf, e_n);
            const double dl = delta_param(e_k, linf);
            if (e_text) {
                std::printf("q_star(l0)   = %.12g\nq_star(linf) = %.12g\n", qs0, qsi);
                std::printf("q_jl(l0)     = %.12g\nq_jl(linf)   = %.12g\n", qj0, qji);
                std::printf("delta        = %.12g\n", dl);
                for (const auto& sp : ptsi)
                    std::printf("%-3s (%.12g, %.12g)  %s%s\n", to_string(sp.label).c_str(), sp.x,
                                sp.y, to_string(sp.kind).c_str(),
                                sp.in_closed_quadrant ? "" : "  [outside quadrant]");
                return 0;
            }
            json j;
            j["schema_version"] = kSchemaVersion;
            j["n"] = e_n;
            j["k"] = e_k;
            j["q"] = e_q;
            j["l0"] = e_l0;
            j["linf"] = linf;
            j["q_star"] = qs0;
            j["q_star_linf"] = qsi;
            j["q_jl"] = number_or_inf(qj0);
            j["q_jl_linf"] = number_or_inf(qji);
            j["delta"] = dl;
            for (const auto& sp : pts0)
                if (sp.label == StationaryPoint::Label::P4) j["P4"] = {sp.x, sp.y};
            json a0 = json::array(), ai = json::array();
            for (const auto& sp : pts0) a0.push_back(point_json(sp));
            for (const auto& sp : ptsi) ai.push_back(point_json(sp));
            j["points_l0"] = a0;
            j["points_linf"] = ai;
            emit(j);
            return 0;
        }

        cli.load();
        const auto& p = cli.cfg.params;
        const auto& wt = cli.cfg.weight;
        const auto& ic = cli.cfg.integrator;

        if (*sc_check) {
            emit(report_json(check_assumptions(wt, p)));
        } else if (*sc_solve) {
            const double rmax = s_rmax.value_or(cli.cfg.r_max);
            const auto sol = solve_ivp(p, wt, s_w0, rmax, ic);
            if (!s_out.empty()) csv::write_profile(s_out, sol);
            json j;
            j["schema_version"] = kSchemaVersion;
            j["samples"] = sol.samples.size();
            j["w_end"] = sol.samples.empty() ? 0.0 : sol.samples.back().w;
            j["truncated"] = sol.truncated;
            if (sol.truncated) j["reason"] = sol.truncation_reason;
            j["steps"] = sol.stats.steps;
            j["rejected_steps"] = sol.stats.rejected;
            j["max_residual"] = sol.stats.max_residual;
            emit(j);
        } else if (*sc_orbit) {
            RadialSolution prof = csv::read_profile(o_profile);
            prof.params = p;
            prof.weight = wt;
            const Orbit orb = orbit_from_profile(prof, p, wt);
            if (!o_out.empty()) csv::write_orbit(o_out, orb);
            json j;
            j["schema_version"] = kSchemaVersion;
            j["samples"] = orb.samples.size();
            j["truncated"] = orb.end_truncated;
            if (orb.end_truncated) j["reason"] = orb.truncation_reason;
            emit(j);
        } else if (*sc_sing) {
            const auto sing = singular_solution(p, wt, ic);
            if (!g_out.empty()) csv::write_profile(g_out, sing.profile);
            double w1 = 0, best = 1e300;
            for (const auto& s : sing.profile.samples) {
                if (std::abs(s.r - 1.0) < best) {
                    best = std::abs(s.r - 1.0);
                    w1 = s.w;
                }
            }
            json j;
            j["schema_version"] = kSchemaVersion;
            j["lambda_tilde"] = sing.lambda_tilde;
            j["w_at_1"] = w1;
            emit(j);
        } else if (*sc_classify) {
            auto classify_at = [&](double rmax) {
                const auto sol = solve_ivp(p, wt, c_w0, rmax, ic);
                const Orbit orb = orbit_from_profile(sol, p, wt);
                if (!c_emit.empty()) csv::write_orbit(c_emit, orb);
                return classify_orbit(orb, p, wt);
            };
            // Profile range: forward integration towards the boundary limit
            // point is ill-conditioned (relative error grows ~ r), so the
            // first pass stops at t = 20. If that is inconclusive, retry on
            // the full range: the remaining limit points attract in orbit
            // space, so long-range classification of them is well-posed.
            const bool user_rmax = cli.cfg.raw.count("integrator.r_max") > 0;
            const double rmax1 =
                user_rmax ? cli.cfg.r_max : std::exp(std::min(ic.t_max, 20.0));
            Classification cls = classify_at(rmax1);
            if (cls.verdict == Verdict::undetermined && !user_rmax && ic.t_max > 20.0) {
                const Classification longer = classify_at(std::exp(ic.t_max));
                if (longer.verdict != Verdict::undetermined) cls = longer;
            }
            emit(classification_json(cls));
        } else if (*sc_sweep) {
            Bifurcation bif(p, wt, ic);
            const auto curve = bif.sweep(b_amin, b_amax, b_count, std::max(1, b_jobs));
            if (!b_out.empty()) csv::write_sweep(b_out, curve);
            json j;
            j["schema_version"] = kSchemaVersion;
            j["lambda_tilde"] = bif.lambda_tilde();
            j["points"] = curve.points.size();
            j["lambda_at_amax"] = curve.points.back().lambda;
            emit(j);
        } else if (*sc_count) {
            Bifurcation bif(p, wt, ic);
            const auto curve = bif.sweep(n_amin, n_amax, n_count, std::max(1, n_jobs));
            json j;
            j["schema_version"] = kSchemaVersion;
            j["lambda_tilde"] = bif.lambda_tilde();
            j["lambda_query"] = n_lambda;
            j["count"] = bif.count_solutions(curve, n_lambda);
            emit(j);
        } else if (*sc_inter) {
            const auto comma = i_interval.find(',');
            if (comma == std::string::npos)
                throw input_error("intersections: --interval expects lo,hi");
            const double lo = std::stod(i_interval.substr(0, comma));
            const double hi = std::stod(i_interval.substr(comma + 1));
            Bifurcation bif(p, wt, ic);
            ProblemParams pt = p;
            pt.lambda = bif.lambda_tilde();
            IntegratorConfig ric = ic;
            ric.output_points = 4000;
            const auto reg = solve_ivp(pt, wt, -i_a, std::max(1.0, hi), ric);
            json j;
            j["schema_version"] = kSchemaVersion;
            j["a"] = i_a;
            j["interval"] = {lo, hi};
            j["count"] = intersection_count(bif.singular_profile(), reg, lo, hi);
            emit(j);
        } else if (*sc_max) {
            ProblemParams pm = p;
            pm.lambda = m_lambda;
            const auto res = maximal_solution_iterate(pm, wt);
            if (!m_out.empty()) csv::write_profile(m_out, res.profile);
            json j;
            j["schema_version"] = kSchemaVersion;
            j["converged"] = res.converged;
            j["iterations"] = res.iterations;
            j["final_change"] = res.final_change;
            j["u0"] = res.profile.w0 + 1.0;
            j["min_u"] = res.min_u;
            if (!res.reason.empty()) j["reason"] = res.reason;
            emit(j);
        } else if (*sc_star) {
            const auto br = estimate_lambda_star(p, wt);
            json j;
            j["schema_version"] = kSchemaVersion;
            j["lower"] = br.lower;
            j["upper"] = br.upper;
            j["analytic_lower"] = br.analytic_lower;
            j["status"] = br.status == LambdaStarBracket::Status::bracketed   ? "bracketed"
                          : br.status == LambdaStarBracket::Status::unbounded ? "unbounded"
                                                                              : "lower_failed";
            emit(j);
        }
        return 0;
    } catch (const config_error& e) {
        std::cerr << "khess: config: " << e.what() << "\n";
        return 66;
    } catch (const domain_error& e) {
        std::cerr << "khess: domain: " << e.what() << "\n";
        return 1;
    } catch (const input_error& e) {
        std::cerr << "khess: input: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "khess: numeric: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "khess: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "khess: error: " << e.what() << "\n";
        return 2;
    }
}
