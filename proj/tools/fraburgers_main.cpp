// Command-line runner: reproducible experiments over the spectral library.
// Every run reads one key=value config, writes CSV reports plus a manifest
// into a deterministic directory, and exits 0 only when all enabled
// inequality checks pass.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraburgers/fraburgers.hpp"

namespace fs = std::filesystem;
using namespace fraburgers;

namespace {

// Exit categories. Anything nonzero names a failure class.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;
constexpr int kGateFailed = 3;
constexpr int kBlowUp = 4;
constexpr int kRuntimeError = 5;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        // grid and equation parameters
        "n_modes", "half_period_pi", "alpha", "eps", "rho", "nu", "dt",
        "t_end", "ledger_stride",
        // forcing recipe
        "seed", "k_max_frac", "forcing_profile", "target_x_norm",
        "gate_margin",
        // initial data
        "u0_profile", "u0_scale", "u0_seed", "u0_k_lo", "u0_k_hi", "u0_mode",
        // steady solve
        "tol", "max_iter", "n_perturb", "tail_tol", "dual_route_tol",
        "contraction_max",
        // decay experiment
        "window_a", "window_b", "decay_slack", "v_profile",
        // stability experiment
        "theta_rel", "theta_seed", "theta_k_lo", "theta_k_hi",
        "stability_final_tol",
        // level-set ladder
        "t0", "n_max", "m_scale_c", "levelset_tol_rel", "levelset_top_rel",
        "linf_ratio_max",
        // verification suite
        "family_size",
    };
    return keys;
}

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

// Everything a subcommand needs, assembled once from the parsed config.
struct RunSetup {
    Config cfg;
    GridPtr grid;
    Params p;
    ForcingSpec fspec;
    std::size_t stride = 1;
    fs::path dir;
    bool override_gate = false;
    bool emit_plots = false;
};

Params build_params(const Config& cfg) {
    Params p;
    p.alpha = cfg.get_double("alpha", p.alpha);
    p.eps = cfg.get_double("eps", p.eps);
    p.rho = cfg.get_double("rho", p.rho);
    p.nu = cfg.get_double("nu", p.nu);
    p.dt = cfg.get_double("dt", p.dt);
    p.t_end = cfg.get_double("t_end", p.t_end);
    p.validate();
    return p;
}

GridPtr build_grid(const Config& cfg) {
    const long long n = cfg.get_int("n_modes", 256);
    const double half_pi = cfg.get_double("half_period_pi", 16.0);
    if (n <= 0) throw ConfigError("n_modes must be positive");
    if (!(half_pi > 0.0)) throw ConfigError("half_period_pi must be positive");
    return make_grid(static_cast<std::size_t>(n),
                     half_pi * std::numbers::pi);
}

ForcingSpec build_forcing_spec(const Config& cfg, const Params& p) {
    ForcingSpec spec;
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    spec.rho = p.rho;
    spec.k_max_frac = cfg.get_double("k_max_frac", 0.125);
    const std::string profile =
        cfg.get_string("forcing_profile", "random_phase");
    if (profile == "random_phase")
        spec.profile = ForcingSpec::Profile::random_phase;
    else if (profile == "two_mode")
        spec.profile = ForcingSpec::Profile::two_mode;
    else
        throw ConfigError("forcing_profile must be random_phase or two_mode");
    if (cfg.has("target_x_norm") && cfg.has("gate_margin"))
        throw ConfigError(
            "target_x_norm and gate_margin are mutually exclusive");
    if (cfg.has("target_x_norm")) {
        spec.target_kind = ForcingSpec::TargetKind::x_norm;
        spec.target = cfg.get_double("target_x_norm", 0.0);
    } else {
        spec.target_kind = ForcingSpec::TargetKind::gate_margin;
        spec.target = cfg.get_double("gate_margin", 0.5);
    }
    return spec;
}

RealField build_u0(const Config& cfg, const GridPtr& grid,
                   const ForcingSpec& fspec) {
    const std::string profile = cfg.get_string("u0_profile", "zero");
    const double scale = cfg.get_double("u0_scale", 0.5);
    if (profile == "zero") return RealField::zero(grid);
    if (profile == "random_band") {
        const std::uint64_t seed = static_cast<std::uint64_t>(
            cfg.get_int("u0_seed", static_cast<long long>(fspec.seed)));
        const double k_lo = cfg.get_double("u0_k_lo", fspec.rho);
        const double k_hi = cfg.get_double(
            "u0_k_hi", fspec.k_max_frac * grid->k_max());
        return random_band_field(grid, seed, 1000, k_lo, k_hi, scale);
    }
    if (profile == "single_mode") {
        const long long j = cfg.get_int("u0_mode", 1);
        if (j == 0 ||
            std::llabs(j) >= static_cast<long long>(grid->n_modes() / 2))
            throw ConfigError("u0_mode must be a nonzero resolvable mode");
        const double k = grid->k_min() * static_cast<double>(j);
        return RealField::sample(
            grid, [k, scale](double x) { return scale * std::sin(k * x); });
    }
    throw ConfigError("u0_profile must be zero, random_band, or single_mode");
}

void echo_setup(RunManifest& m, const RunSetup& s) {
    m.set("grid_n_modes", static_cast<double>(s.grid->n_modes()));
    m.set("grid_half_period", s.grid->half_period());
    m.set("grid_dx", s.grid->dx());
    m.set("grid_k_min", s.grid->k_min());
    m.set("grid_k_max", s.grid->k_max());
    m.set("grid_dealias_cutoff", s.grid->dealias_cutoff());
    m.set("param_alpha", s.p.alpha);
    m.set("param_eps", s.p.eps);
    m.set("param_rho", s.p.rho);
    m.set("param_nu", s.p.nu);
    m.set("param_dt", s.p.dt);
    m.set("param_t_end", s.p.t_end);
    m.set("ledger_stride", static_cast<double>(s.stride));
    m.set("forcing_seed", static_cast<double>(s.fspec.seed));
    m.set("forcing_rho", s.fspec.rho);
    m.set("forcing_k_max_frac", s.fspec.k_max_frac);
    m.set("forcing_profile",
          s.fspec.profile == ForcingSpec::Profile::random_phase
              ? "random_phase"
              : "two_mode");
    m.set("forcing_target_kind",
          s.fspec.target_kind == ForcingSpec::TargetKind::x_norm
              ? "x_norm"
              : "gate_margin");
    m.set("forcing_target", s.fspec.target);
    m.set("override_gate", s.override_gate);
    m.set_config_echo(s.cfg.raw_text());
}

// Gate report keyed into the manifest; returns passed. Domain failures
// (alpha outside the admissible range for the constant) are recorded as
// inapplicable rather than failing the run outright.
bool record_gate(RunManifest& m, const RealField& f, const Params& p) {
    try {
        const SmallnessReport gate = smallness_gate(f, p);
        m.set("gate_applicable", true);
        m.set("gate_constant", gate.constant);
        m.set("gate_f_x_norm", gate.f_x_norm);
        m.set("gate_value", gate.gate_value);
        m.set("gate_passed", gate.passed);
        return gate.passed;
    } catch (const ContractViolation& e) {
        m.set("gate_applicable", false);
        m.set("gate_note", e.what());
        return false;
    }
}

void write_plot(const fs::path& path, const std::string& comment,
                const std::vector<std::pair<double, double>>& xy) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "# " << comment << '\n';
    for (const auto& [x, y] : xy)
        out << format_full(x) << ' ' << format_full(y) << '\n';
}

struct CheckSet {
    RunManifest& manifest;
    bool all_ok = true;

    void add(const std::string& name, bool ok) {
        manifest.set("check_" + name, ok);
        if (!ok) all_ok = false;
    }

    int exit_code() const { return all_ok ? kOk : kCheckFailed; }
};

int finish(RunManifest& m, const RunSetup& s, CheckSet& checks,
           const Timer& total) {
    m.set("wall_seconds_total", total.seconds());
    m.set("all_checks_passed", checks.all_ok);
    m.finalize();
    m.write((s.dir / "manifest.txt").string());
    std::cout << (checks.all_ok ? "all checks passed" : "CHECKS FAILED")
              << " (" << (s.dir / "manifest.txt").string() << ")\n";
    return checks.exit_code();
}

// Shared gate-first preamble for the solver subcommands. Returns false when
// the gate fails and no override was requested; the caller exits kGateFailed.
bool gate_first(RunManifest& m, const RunSetup& s, const RealField& f) {
    const bool passed = record_gate(m, f, s.p);
    if (passed || s.override_gate) return true;
    m.set("gate_abort", "smallness gate failed and no override was set");
    m.finalize();
    m.write((s.dir / "manifest.txt").string());
    std::cerr << "smallness gate failed; rerun with --override-gate to force\n";
    return false;
}

// ---------------------------------------------------------------------------
// evolve: forced nonlinear run with the energy ledger.
// ---------------------------------------------------------------------------
int run_evolve(const RunSetup& s) {
    Timer total;
    RunManifest m("evolve");
    echo_setup(m, s);

    Timer setup;
    const RealField f = generate_forcing(s.fspec, s.grid, s.p);
    const RealField u0 = build_u0(s.cfg, s.grid, s.fspec);
    record_gate(m, f, s.p);
    m.set("wall_seconds_setup", setup.seconds());

    Timer solve;
    const EvolveResult run =
        integrate(forward(u0), forward(f), s.p, s.stride);
    m.set("wall_seconds_solve", solve.seconds());

    Timer report;
    CsvWriter csv((s.dir / "ledger.csv").string());
    csv.header({"t", "l2_sq", "diss_acc", "visc_acc", "bound_rhs", "mean",
                "ok"});
    bool rows_ok = true;
    for (const auto& row : run.ledger.rows) {
        const bool ok =
            !run.ledger.bound_applicable ||
            row.l2_sq + row.diss_acc <=
                row.bound_rhs * (1.0 + EnergyLedger::kSlack);
        if (!ok) rows_ok = false;
        csv.row(std::vector<double>{row.t, row.l2_sq, row.diss_acc,
                                    row.visc_acc, row.bound_rhs, row.mean,
                                    ok ? 1.0 : 0.0});
    }
    m.set("bound_applicable", run.ledger.bound_applicable);
    m.set("final_t", run.trajectory.times.back());
    m.set("final_l2", std::sqrt(run.ledger.rows.back().l2_sq));

    CheckSet checks{m};
    if (run.ledger.bound_applicable) checks.add("energy_ledger", rows_ok);
    const double mean_drift = std::abs(run.ledger.rows.back().mean -
                                       run.ledger.rows.front().mean);
    checks.add("mean_conserved",
               mean_drift <=
                   1e-10 * (1.0 + std::abs(run.ledger.rows.front().mean)));

    if (s.emit_plots) {
        std::vector<std::pair<double, double>> l2;
        for (const auto& row : run.ledger.rows)
            l2.emplace_back(row.t, std::sqrt(row.l2_sq));
        write_plot(s.dir / "plot_l2.dat", "t  l2_norm", l2);
    }
    m.set("wall_seconds_report", report.seconds());
    return finish(m, s, checks, total);
}

// ---------------------------------------------------------------------------
// steady: fixed point, contraction trace, dual-route agreement, uniqueness.
// ---------------------------------------------------------------------------
int run_steady(const RunSetup& s) {
    Timer total;
    RunManifest m("steady");
    echo_setup(m, s);

    Timer setup;
    const RealField f = generate_forcing(s.fspec, s.grid, s.p);
    m.set("wall_seconds_setup", setup.seconds());
    if (!gate_first(m, s, f)) return kGateFailed;

    const double tol = s.cfg.get_double("tol", 1e-9);
    const std::size_t max_iter =
        static_cast<std::size_t>(s.cfg.get_int("max_iter", 40));
    const double contraction_max = s.cfg.get_double("contraction_max", 0.6);
    const double dual_route_tol = s.cfg.get_double("dual_route_tol", 1e-4);
    const double tail_tol = s.cfg.get_double("tail_tol", 1e-9);
    const std::size_t n_perturb =
        static_cast<std::size_t>(s.cfg.get_int("n_perturb", 3));

    CheckSet checks{m};
    Timer solve;
    PicardResult fixed_point = [&] {
        try {
            return picard_solve(f, s.p, tol, max_iter, !s.override_gate);
        } catch (const TailNotConverged& e) {
            m.set("wall_seconds_solve", solve.seconds());
            checks.add("converged", false);
            m.set("last_increment", e.last_increment_norm);
            m.finalize();
            m.write((s.dir / "manifest.txt").string());
            throw;
        }
    }();
    m.set("wall_seconds_solve", solve.seconds());
    checks.add("converged", true);

    Timer report;
    CsvWriter iter_csv((s.dir / "iterations.csv").string());
    iter_csv.header({"i", "increment_norm", "ratio", "residual",
                     "h_half_norm", "iterate_bound"});
    bool contraction_ok = true;
    for (const auto& row : fixed_point.trace.rows) {
        if (row.i >= 2 && row.ratio > contraction_max) contraction_ok = false;
        iter_csv.row(std::vector<double>{static_cast<double>(row.i),
                                         row.increment_norm, row.ratio,
                                         row.residual, row.h_half_norm,
                                         fixed_point.iterate_bound});
    }
    checks.add("contraction", contraction_ok);
    checks.add("iterate_bound", fixed_point.iterate_bound_ok);
    m.set("outer_iterations",
          static_cast<double>(fixed_point.trace.rows.size()));
    m.set("final_residual", fixed_point.trace.rows.back().residual);

    // Same linear problem solved as the time integral of its evolution.
    Timer dual;
    const Spectrum u_hat = forward(fixed_point.steady_state);
    double dual_rel = std::numeric_limits<double>::infinity();
    try {
        const Spectrum via_time =
            steady_via_time_integral(u_hat, forward(f), s.p, tail_tol);
        const double denom = l2_norm(u_hat);
        dual_rel = denom > 0.0 ? l2_norm(via_time - u_hat) / denom : 0.0;
    } catch (const TailNotConverged& e) {
        m.set("dual_route_note",
              std::string("time integral tail not converged: ") + e.what());
    }
    m.set("dual_route_rel_diff", dual_rel);
    m.set("wall_seconds_dual_route", dual.seconds());
    checks.add("dual_route", dual_rel <= dual_route_tol);

    Timer uniq;
    const UniquenessReport probe = uniqueness_probe(
        fixed_point.steady_state, f, s.p, n_perturb, tol, max_iter,
        s.fspec.seed + 17);
    m.set("uniqueness_restarts", static_cast<double>(probe.restarts));
    m.set("uniqueness_converged", static_cast<double>(probe.converged));
    m.set("uniqueness_spread", probe.max_pairwise_spread);
    m.set("wall_seconds_uniqueness", uniq.seconds());
    checks.add("uniqueness", probe.failed == 0 &&
                                 probe.max_pairwise_spread <= 10.0 * tol);

    CsvWriter state_csv((s.dir / "steady_state.csv").string());
    state_csv.header({"x", "u"});
    for (std::size_t i = 0; i < fixed_point.steady_state.size(); ++i)
        state_csv.row(std::vector<double>{s.grid->x(i),
                                          fixed_point.steady_state[i]});

    if (s.emit_plots) {
        std::vector<std::pair<double, double>> xy;
        for (std::size_t i = 0; i < fixed_point.steady_state.size(); ++i)
            xy.emplace_back(s.grid->x(i), fixed_point.steady_state[i]);
        write_plot(s.dir / "plot_steady.dat", "x  u", xy);
    }
    m.set("wall_seconds_report", report.seconds());
    return finish(m, s, checks, total);
}

// ---------------------------------------------------------------------------
// decay: envelope audit on the advected linear problem plus frequency split.
// ---------------------------------------------------------------------------
int run_decay(const RunSetup& s) {
    Timer total;
    RunManifest m("decay");
    echo_setup(m, s);

    Timer setup;
    const RealField f = generate_forcing(s.fspec, s.grid, s.p);
    m.set("wall_seconds_setup", setup.seconds());
    if (!gate_first(m, s, f)) return kGateFailed;

    const std::string v_profile = s.cfg.get_string("v_profile", "zero");
    RealField v = RealField::zero(s.grid);
    if (v_profile == "steady") {
        const double tol = s.cfg.get_double("tol", 1e-9);
        const std::size_t max_iter =
            static_cast<std::size_t>(s.cfg.get_int("max_iter", 40));
        v = picard_solve(f, s.p, tol, max_iter, !s.override_gate)
                .steady_state;
    } else if (v_profile != "zero") {
        throw ConfigError("v_profile must be zero or steady");
    }
    m.set("v_profile", v_profile);

    Timer solve;
    const DecayReport rep = decay_experiment(
        v, f, s.p, s.stride, s.cfg.get_double("window_a", 1.0),
        s.cfg.get_double("window_b", 0.0),
        s.cfg.get_double("decay_slack", 1e-9), !s.override_gate);
    const LinearEvolveResult lin =
        integrate_linear(forward(v), forward(f), s.p, s.stride);
    const SplitDiagnostic split = split_diagnostic(lin.trajectory, s.p);
    m.set("wall_seconds_solve", solve.seconds());

    Timer report;
    CsvWriter decay_csv((s.dir / "decay.csv").string());
    decay_csv.header({"t", "l2", "bound", "ok"});
    for (const auto& row : rep.rows)
        decay_csv.row(std::vector<double>{row.t, row.l2, row.bound,
                                          row.ok ? 1.0 : 0.0});

    CsvWriter split_csv((s.dir / "split.csv").string());
    split_csv.header({"t", "cutoff", "low_energy", "high_energy"});
    bool partition_ok = true;
    for (std::size_t i = 0; i < split.rows.size(); ++i) {
        const auto& row = split.rows[i];
        const double whole = lin.ledger.rows[i].l2_sq;
        if (std::abs(row.low_energy + row.high_energy - whole) >
            1e-12 * (1.0 + whole))
            partition_ok = false;
        split_csv.row(std::vector<double>{row.t, row.cutoff, row.low_energy,
                                          row.high_energy});
    }

    m.set("window_a", rep.window_a);
    m.set("window_b", rep.window_b);
    m.set("envelope_prefactor", rep.prefactor);
    m.set("envelope_exponent", rep.exponent);
    m.set("fit_exponent", rep.fit_exponent);
    m.set("fit_applicable", rep.fit_applicable);
    m.set("split_m", split.m);

    CheckSet checks{m};
    checks.add("decay_bound", rep.all_ok_in_window);
    checks.add("exponent_condition", rep.exponent_above_one);
    checks.add("split_partition", partition_ok);

    if (s.emit_plots) {
        std::vector<std::pair<double, double>> l2, bound;
        for (const auto& row : rep.rows) {
            l2.emplace_back(row.t, row.l2);
            bound.emplace_back(row.t, row.bound);
        }
        write_plot(s.dir / "plot_decay.dat", "t  l2_norm", l2);
        write_plot(s.dir / "plot_envelope.dat", "t  envelope", bound);
    }
    m.set("wall_seconds_report", report.seconds());
    return finish(m, s, checks, total);
}

// ---------------------------------------------------------------------------
// stability: perturbation budget around the computed steady state.
// ---------------------------------------------------------------------------
int run_stability(const RunSetup& s) {
    Timer total;
    RunManifest m("stability");
    echo_setup(m, s);

    Timer setup;
    const RealField f = generate_forcing(s.fspec, s.grid, s.p);
    m.set("wall_seconds_setup", setup.seconds());
    if (!gate_first(m, s, f)) return kGateFailed;

    const double tol = s.cfg.get_double("tol", 1e-9);
    const std::size_t max_iter =
        static_cast<std::size_t>(s.cfg.get_int("max_iter", 40));
    Timer solve_steady;
    const PicardResult fixed_point =
        picard_solve(f, s.p, tol, max_iter, !s.override_gate);
    m.set("wall_seconds_steady", solve_steady.seconds());

    const double theta_rel = s.cfg.get_double("theta_rel", 0.1);
    const std::uint64_t theta_seed = static_cast<std::uint64_t>(
        s.cfg.get_int("theta_seed", static_cast<long long>(s.fspec.seed) + 1));
    const double theta_k_lo = s.cfg.get_double("theta_k_lo", s.fspec.rho);
    const double theta_k_hi = s.cfg.get_double(
        "theta_k_hi", s.fspec.k_max_frac * s.grid->k_max());
    const double u_l2 = l2_norm(forward(fixed_point.steady_state));
    const RealField theta = random_band_field(
        s.grid, theta_seed, 5, theta_k_lo, theta_k_hi, theta_rel * u_l2);

    Timer solve;
    const StabilityReport rep = stability_experiment(
        fixed_point.steady_state, theta, f, s.p, s.stride, !s.override_gate);
    m.set("wall_seconds_solve", solve.seconds());

    Timer report;
    CsvWriter csv((s.dir / "stability.csv").string());
    csv.header({"t", "w_l2", "diss_acc", "ledger_lhs", "ok"});
    for (const auto& row : rep.rows)
        csv.row(std::vector<double>{row.t, row.w_l2, row.diss_acc,
                                    row.ledger_lhs, row.ledger_ok ? 1.0 : 0.0});

    m.set("theta_l2", rep.theta_l2);
    m.set("final_ratio", rep.final_ratio);
    m.set("max_step_increase", rep.max_step_increase);

    const double final_tol = s.cfg.get_double("stability_final_tol", 1e-3);
    CheckSet checks{m};
    checks.add("perturbation_ledger", rep.ledger_ok);
    checks.add("monotone_decay", rep.monotone);
    checks.add("final_ratio", rep.final_ratio <= final_tol);

    if (s.emit_plots) {
        std::vector<std::pair<double, double>> w;
        for (const auto& row : rep.rows) w.emplace_back(row.t, row.w_l2);
        write_plot(s.dir / "plot_w.dat", "t  w_l2", w);
    }
    m.set("wall_seconds_report", report.seconds());
    return finish(m, s, checks, total);
}

// ---------------------------------------------------------------------------
// degiorgi: level-set ladder and the pointwise envelope audit.
// ---------------------------------------------------------------------------
int run_degiorgi(const RunSetup& s) {
    Timer total;
    RunManifest m("degiorgi");
    echo_setup(m, s);

    Timer setup;
    const RealField f = generate_forcing(s.fspec, s.grid, s.p);
    const RealField u0 = build_u0(s.cfg, s.grid, s.fspec);
    record_gate(m, f, s.p);
    m.set("wall_seconds_setup", setup.seconds());

    const double t0 = s.cfg.get_double("t0", 5.0);
    if (!(t0 > 0.0) || t0 > s.p.t_end)
        throw ConfigError("t0 must lie in (0, t_end]");
    const std::size_t n_max =
        static_cast<std::size_t>(s.cfg.get_int("n_max", 6));
    const double m_scale_c = s.cfg.get_double("m_scale_c", 0.55);
    const double tol_rel = s.cfg.get_double("levelset_tol_rel", 1e-8);
    const double top_rel = s.cfg.get_double("levelset_top_rel", 1e-8);
    const double linf_ratio_max = s.cfg.get_double("linf_ratio_max", 0.0);

    Timer solve;
    const EvolveResult run =
        integrate(forward(u0), forward(f), s.p, s.stride);
    m.set("wall_seconds_solve", solve.seconds());

    Timer report;
    // Raw energy scale of the window [0, t0] fixes the level amplitude.
    double sup_l2_sq = 0.0;
    double diss_at_t0 = 0.0;
    for (const auto& row : run.ledger.rows) {
        if (row.t > t0 + 1e-12) break;
        sup_l2_sq = std::max(sup_l2_sq, row.l2_sq);
        diss_at_t0 = row.diss_acc;
    }
    const double e0_raw = sup_l2_sq + 2.0 * diss_at_t0;
    const double f_l2 = l2_norm(forward(f));
    const double level_amplitude =
        m_scale_c * (std::sqrt(e0_raw / t0) +
                     std::pow(f_l2, 0.25) * std::pow(e0_raw, 0.125));
    m.set("e0_raw", e0_raw);
    m.set("level_amplitude", level_amplitude);

    const LevelSetReport rep =
        level_set_energy(run.trajectory, t0, level_amplitude, n_max, f, s.p,
                         tol_rel * e0_raw);
    const LinfReport linf = linf_bound_check(run.trajectory, u0, f, s.p);

    CsvWriter levels_csv((s.dir / "levels.csv").string());
    levels_csv.header({"n", "lambda", "window_start", "energy_plus",
                       "energy_minus"});
    for (const auto& level : rep.levels)
        levels_csv.row(std::vector<double>{static_cast<double>(level.n),
                                           level.lambda, level.window_start,
                                           level.energy_plus,
                                           level.energy_minus});

    CsvWriter linf_csv((s.dir / "linf.csv").string());
    linf_csv.header({"t", "linf", "envelope", "ratio"});
    for (const auto& row : linf.rows)
        linf_csv.row(std::vector<double>{row.t, row.linf, row.envelope,
                                         row.ratio});

    m.set("e0", rep.e0);
    m.set("max_inequality_violation", rep.max_inequality_violation);
    m.set("inequality_violations",
          static_cast<double>(rep.inequality_violations));
    m.set("linf_max_ratio", linf.max_ratio);

    const auto& top = rep.levels.back();
    const double top_energy = std::max(top.energy_plus, top.energy_minus);
    m.set("top_level_energy", top_energy);

    CheckSet checks{m};
    checks.add("ladder_monotone", rep.monotone);
    checks.add("level_inequality", rep.inequality_violations == 0);
    checks.add("top_level_vanishes", top_energy <= top_rel * rep.e0);
    checks.add("linf_finite", std::isfinite(linf.max_ratio));
    if (linf_ratio_max > 0.0)
        checks.add("linf_ratio", linf.max_ratio <= linf_ratio_max);

    if (s.emit_plots) {
        std::vector<std::pair<double, double>> ratio, ladder;
        for (const auto& row : linf.rows)
            ratio.emplace_back(row.t, row.linf);
        for (const auto& level : rep.levels)
            ladder.emplace_back(static_cast<double>(level.n),
                                level.energy_plus);
        write_plot(s.dir / "plot_linf.dat", "t  sup_abs_u", ratio);
        write_plot(s.dir / "plot_levels.dat", "n  energy_plus", ladder);
    }
    m.set("wall_seconds_report", report.seconds());
    return finish(m, s, checks, total);
}

// ---------------------------------------------------------------------------
// verify: spectral invariant suite plus the inequality-ratio family.
// ---------------------------------------------------------------------------
int run_verify(const RunSetup& s) {
    Timer total;
    RunManifest m("verify");
    echo_setup(m, s);

    Timer solve;
    const std::size_t family =
        static_cast<std::size_t>(s.cfg.get_int("family_size", 100));
    const VerifyReport rep =
        run_verification(s.grid, s.p, s.fspec.seed, family);
    m.set("wall_seconds_solve", solve.seconds());

    Timer report;
    CsvWriter checks_csv((s.dir / "checks.csv").string());
    checks_csv.header({"name", "ok", "value", "threshold"});
    for (const auto& check : rep.checks)
        checks_csv.row(std::vector<std::string>{
            check.name, check.ok ? "1" : "0", format_full(check.value),
            format_full(check.threshold)});

    CsvWriter ratio_csv((s.dir / "ratios.csv").string());
    ratio_csv.header({"index", "embedding", "interpolation", "product"});
    for (const auto& sample : rep.ratio_samples)
        ratio_csv.row(std::vector<double>{static_cast<double>(sample.index),
                                          sample.embedding,
                                          sample.interpolation,
                                          sample.product});

    m.set("embedding_max", rep.embedding_max);
    m.set("interpolation_max", rep.interpolation_max);
    m.set("product_max", rep.product_max);

    CheckSet checks{m};
    for (const auto& check : rep.checks) checks.add(check.name, check.ok);

    if (s.emit_plots) {
        std::vector<std::pair<double, double>> emb;
        for (const auto& sample : rep.ratio_samples)
            emb.emplace_back(static_cast<double>(sample.index),
                             sample.embedding);
        write_plot(s.dir / "plot_embedding.dat", "index  embedding_ratio",
                   emb);
    }
    m.set("wall_seconds_report", report.seconds());
    return finish(m, s, checks, total);
}

int dispatch(const std::string& name, const std::string& config_path,
             std::string out_root, bool override_gate, bool emit_plots) {
    RunSetup s;
    s.cfg = Config::parse_file(config_path, known_keys());
    s.p = build_params(s.cfg);
    s.grid = build_grid(s.cfg);
    s.fspec = build_forcing_spec(s.cfg, s.p);
    const long long stride = s.cfg.get_int("ledger_stride", 10);
    if (stride <= 0) throw ConfigError("ledger_stride must be positive");
    s.stride = static_cast<std::size_t>(stride);
    s.override_gate = override_gate;
    s.emit_plots = emit_plots;

    if (out_root.empty()) {
        const char* env = std::getenv("FRABURGERS_OUT");
        out_root = env && *env ? env : "./runs";
    }
    s.dir = fs::path(out_root) /
            (name + "_seed" + std::to_string(s.fspec.seed));
    fs::create_directories(s.dir);

    // A first manifest marks the run as started; the subcommand rewrites it.
    {
        RunManifest started(name);
        echo_setup(started, s);
        started.write((s.dir / "manifest.txt").string());
    }

    if (name == "evolve") return run_evolve(s);
    if (name == "steady") return run_steady(s);
    if (name == "decay") return run_decay(s);
    if (name == "stability") return run_stability(s);
    if (name == "degiorgi") return run_degiorgi(s);
    if (name == "verify") return run_verify(s);
    throw Error("unknown subcommand " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for the forced fractal Burgers "
                 "equation on a periodic domain"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_root;
    bool override_gate = false;
    bool emit_plots = false;

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"evolve", "forced nonlinear run with the energy ledger"},
        {"steady", "fixed-point steady state with contraction and "
                   "uniqueness checks"},
        {"decay", "algebraic decay envelope audit plus frequency split"},
        {"stability", "perturbation budget around the steady state"},
        {"degiorgi", "level-set energy ladder and pointwise envelope"},
        {"verify", "spectral invariant suite and inequality ratio family"},
    };
    for (const auto& [name, desc] : subs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "key = value config file")
            ->required();
        sub->add_option("--out", out_root,
                        "output root (default: $FRABURGERS_OUT or ./runs)");
        sub->add_flag("--override-gate", override_gate,
                      "run solvers even when the smallness gate fails");
        sub->add_flag("--emit-plots", emit_plots,
                      "also write two-column gnuplot data files");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return dispatch(name, config_path, out_root, override_gate,
                        emit_plots);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const GateNotSatisfied& e) {
        std::cerr << "gate failure: " << e.what() << '\n';
        return kGateFailed;
    } catch (const BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return kBlowUp;
    } catch (const WindowTooShort& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const CflViolation& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const TailNotConverged& e) {
        std::cerr << "not converged: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
