/*
 * Copyright 2026 The ergobound Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ergobound/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergobound/bounds.hpp"
#include "ergobound/csv.hpp"
#include "ergobound/model.hpp"
#include "ergobound/odesolve.hpp"
#include "ergobound/spectral.hpp"

namespace ergobound::cli
{

namespace
{

struct Options
{
    std::string model;
    std::vector<std::string> overrides;
    std::string kernels = "auto";
    std::optional<double> horizon;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> weights;
    std::optional<double> tol;
    std::string csv;
    std::size_t jobs = 1;
    bool cross_check = false;
};

struct Loaded
{
    ModelFile model;
    const kernels::Table* kern;
};

Loaded load(const Options& o)
{
    std::vector<RateOverride> overrides;
    for (const auto& s : o.overrides)
    {
        overrides.push_back(parse_override(s));
    }
    ModelFile m = load_model(o.model, overrides);
    AnalysisConfig& a = m.analysis;
    if (o.horizon) a.horizon = *o.horizon;
    if (o.grid) a.grid = *o.grid;
    if (o.steps) a.steps = *o.steps;
    if (o.trials)
    {
        a.trials = *o.trials;
        a.pairs = *o.trials;
    }
    if (o.seed) a.seed = *o.seed;
    if (o.tol) a.tol = *o.tol;
    if (o.weights)
    {
        const std::string& w = *o.weights;
        if (w == "ones") a.weights = WeightsMode::ones;
        else if (w == "perron") a.weights = WeightsMode::perron;
        else if (w == "frozen-perron") a.weights = WeightsMode::frozen_perron;
        else
        {
            a.weights = WeightsMode::list;
            a.weight_values = load_weights(w);
        }
    }
    if (!(a.horizon > 0.0) || a.grid < 2 || a.steps < 1 || a.trials < 1 || !(a.tol >= 0.0))
    {
        throw Error(ErrorCode::invalid_argument,
                    "horizon must be positive, grid >= 2, steps and trials >= 1, tol >= 0");
    }
    return {std::move(m), &kernels::by_name(o.kernels)};
}

struct ResolvedWeights
{
    WeightVector d;
    std::string label;
};

ResolvedWeights resolve_weights(const Loaded& l)
{
    const ChainSpec& spec = l.model.chain;
    const AnalysisConfig& a = l.model.analysis;
    PowerIterationOptions power;
    power.kernels = l.kern;
    switch (a.weights)
    {
    case WeightsMode::ones: return {WeightVector::ones(spec.states()), "ones"};
    case WeightsMode::list:
        if (a.weight_values.size() != spec.states())
        {
            throw Error(ErrorCode::invalid_argument, "weights: expected S = " + std::to_string(spec.states()) +
                                                         " values, got " + std::to_string(a.weight_values.size()));
        }
        return {WeightVector(a.weight_values), "user list"};
    case WeightsMode::perron:
        if (!spec.homogeneous())
        {
            throw Error(ErrorCode::inhomogeneous,
                        "perron weights need constant rates; use frozen-perron for time-varying models");
        }
        return {perron_weights(bstar_at(spec, 0.0), power).weights, "perron"};
    case WeightsMode::frozen_perron:
        return {perron_weights(bstar_at(spec, 0.0), power).weights,
                spec.homogeneous() ? "frozen-perron (rates are constant, so this is the sharp choice)"
                                   : "frozen-perron (Perron weights of B*(0); heuristic, not sharp)"};
    }
    throw Error(ErrorCode::invalid_argument, "unknown weights mode");
}

std::string fmt(double v) { return csv::format(v); }

std::string join(std::span<const double> v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        s += (i ? " " : "") + fmt(v[i]);
    }
    return s;
}

std::ofstream open_csv(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
    {
        throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
    }
    return f;
}

void describe(const ModelFile& m, std::ostream& out)
{
    out << "model: " << to_string(m.chain.kind()) << ", S=" << m.chain.states() << ", rates "
        << (m.chain.homogeneous() ? "constant" : "time-varying") << "\n";
}

int cmd_check(const Options& o, std::ostream& out)
{
    const Loaded l = load(o);
    const ChainSpec& spec = l.model.chain;
    const AnalysisConfig& a = l.model.analysis;
    describe(l.model, out);

    const std::vector<double> grid = spec.homogeneous() ? std::vector<double>{0.0} : uniform_grid(a.horizon, a.grid);
    out << "grid: " << grid.size() << " point(s) on [0, " << fmt(a.horizon) << "]\n";

    const RegularityReport reg = check_regularity(spec, grid);
    std::optional<std::pair<double, NonnegViolation>> first_bad;
    std::size_t bad_times = 0;
    bool irreducible = true;
    for (double t : grid)
    {
        const SquareMatrix bstar = bstar_at(spec, t);
        const NonnegReport nn = check_essential_nonnegativity(bstar);
        if (!nn.pass)
        {
            ++bad_times;
            if (!first_bad)
            {
                first_bad.emplace(t, nn.violations.front());
            }
        }
        irreducible = irreducible && check_irreducible(bstar);
    }

    out << "regular: " << (reg.regular ? "yes" : "no");
    if (!reg.regular)
    {
        const auto& v = reg.violations.front();
        out << " (" << reg.violations.size() << " violation(s); first at t=" << fmt(v.t) << ", state " << v.i
            << ", " << (v.upward ? "upward" : "downward") << " jump " << v.k << " -> " << v.k + 1 << ": "
            << fmt(v.value_k) << " < " << fmt(v.value_next) << ")";
    }
    out << "\n";
    out << "B* essentially non-negative: " << (first_bad ? "no" : "yes");
    if (first_bad)
    {
        const auto& [t, v] = *first_bad;
        out << " (" << bad_times << " grid time(s); first at t=" << fmt(t) << ", entry (" << v.i + 1 << ","
            << v.j + 1 << ") = " << fmt(v.value) << ")";
    }
    out << "\n";
    out << "B* irreducible: " << (irreducible ? "yes" : "no") << "\n";
    if (!reg.regular && !first_bad)
    {
        out << "warning: generator is not regular, but B* is essentially non-negative on the grid, so the "
               "bounds still apply\n";
    }
    return first_bad ? kFailed : kOk;
}

int cmd_rate(const Options& o, std::ostream& out)
{
    const Loaded l = load(o);
    const ChainSpec& spec = l.model.chain;
    const AnalysisConfig& a = l.model.analysis;
    describe(l.model, out);
    if (!spec.homogeneous())
    {
        throw Error(ErrorCode::inhomogeneous, "rate: the sharp rate needs constant rates");
    }

    if (spec.kind() == ChainKind::general)
    {
        out << "sharpness conditions: not applicable (general chain)\n";
    }
    else
    {
        const ConditionReport cond = check_sharpness_conditions(spec);
        out << "sharpness conditions: " << (cond.pass ? "pass" : "fail") << "\n";
        for (const auto& f : cond.failures)
        {
            out << "  - " << f << "\n";
        }
    }

    SharpOptions so;
    so.horizon = a.horizon;
    so.n_grid = a.grid;
    so.enforce_conditions = false;
    so.power.kernels = l.kern;
    const BoundReport rep = sharp_report(spec, so);
    const SharpRate& r = *rep.perron;

    out << "lambda0: " << fmt(r.lambda0) << "\n";
    out << "decay rate: " << fmt(-r.lambda0) << "\n";
    out << "weights (d1 = 1): " << join(r.weights.normalized_first().values()) << "\n";
    out << "power iteration: " << r.iterations << " iterations, residual " << fmt(r.residual)
        << ", column-sum spread " << fmt(r.column_sum_spread) << "\n";
    for (const auto& w : rep.warnings)
    {
        out << "warning: " << w << "\n";
    }

    if (o.cross_check)
    {
        bool ok = spec.kind() == ChainKind::birth_death;
        if (ok)
        {
            for (std::size_t i = 1; i < spec.states(); ++i)
            {
                ok = ok && spec.lambda()[i] == spec.lambda()[0] && spec.mu()[i] == spec.mu()[0];
            }
        }
        if (ok)
        {
            const double lam = spec.lambda()[0](0.0);
            const double mu = spec.mu()[0](0.0);
            const ClosedFormRates cf = closed_form_bd(lam, mu, spec.states());
            out << "closed form: beta* = " << fmt(cf.beta_star) << ", g* = " << fmt(cf.g_star)
                << ", |beta* + lambda0| = " << fmt(std::abs(cf.beta_star + r.lambda0)) << "\n";
        }
        else
        {
            out << "closed form: not available (needs birth-death rates with all lambda equal and all mu "
                   "equal)\n";
        }
    }

    if (!o.csv.empty())
    {
        std::ofstream f = open_csv(o.csv);
        write_csv(rep, f);
    }
    return kOk;
}

int cmd_bounds(const Options& o, std::ostream& out, std::ostream& err)
{
    const Loaded l = load(o);
    const ChainSpec& spec = l.model.chain;
    const AnalysisConfig& a = l.model.analysis;
    const ResolvedWeights w = resolve_weights(l);

    BoundReport rep;
    if (a.weights == WeightsMode::perron)
    {
        SharpOptions so;
        so.horizon = a.horizon;
        so.n_grid = a.grid;
        so.enforce_conditions = false;
        so.power.kernels = l.kern;
        rep = sharp_report(spec, so);
    }
    else
    {
        rep = compute_bounds(spec, w.d, a.horizon, a.grid, *l.kern);
    }

    // Without --csv the CSV is the report and everything else goes to err.
    std::ostream& info = o.csv.empty() ? err : out;
    describe(l.model, info);
    info << "weights: " << w.label << ": " << join(w.d.normalized_first().values()) << "\n";
    info << "sharp: " << (rep.sharp ? "yes" : "no");
    if (rep.lambda0)
    {
        info << " (lambda0 = " << fmt(*rep.lambda0) << ")";
    }
    info << "\n";
    info << "I_upper(T) = " << fmt(rep.integral_upper.back()) << ", I_lower(T) = " << fmt(rep.integral_lower.back())
         << "\n";
    for (const auto& msg : rep.warnings)
    {
        info << "warning: " << msg << "\n";
    }

    if (o.csv.empty())
    {
        write_csv(rep, out);
    }
    else
    {
        std::ofstream f = open_csv(o.csv);
        write_csv(rep, f);
    }
    return kOk;
}

void summarize(const VerificationReport& r, std::ostream& out)
{
    out << r.kind << ": " << r.trials << (r.kind == "bounds" ? " trials" : " pairs") << ", " << r.n_steps
        << " steps, seed " << r.seed << ", violations " << r.violations << "\n";
    if (r.worst_upper)
    {
        out << "  worst upper ratio " << fmt(r.worst_upper->ratio) << " (allowed " << fmt(r.worst_upper->allowed)
            << ") at t=" << fmt(r.worst_upper->t) << ", trial " << r.worst_upper->trial << "\n";
    }
    if (r.worst_lower)
    {
        out << "  worst lower ratio " << fmt(r.worst_lower->ratio) << " (allowed " << fmt(r.worst_lower->allowed)
            << ") at t=" << fmt(r.worst_lower->t) << ", trial " << r.worst_lower->trial << "\n";
    }
    out << "  integrator margin " << fmt(r.max_integrator_margin) << "\n";
    if (r.first_violation)
    {
        const auto& v = *r.first_violation;
        out << "  first violation: " << (v.upper ? "upper" : "lower") << " ratio " << fmt(v.ratio) << " vs allowed "
            << fmt(v.allowed) << " at t=" << fmt(v.t) << ", trial " << v.trial << "\n";
    }
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const Loaded l = load(o);
    const ChainSpec& spec = l.model.chain;
    const AnalysisConfig& a = l.model.analysis;
    const ResolvedWeights w = resolve_weights(l);
    describe(l.model, out);
    out << "weights: " << w.label << ": " << join(w.d.normalized_first().values()) << "\n";

    VerifyOptions vo;
    vo.horizon = a.horizon;
    vo.n_steps = a.steps;
    vo.trials = a.trials;
    vo.seed = a.seed;
    vo.slack = a.tol;
    vo.jobs = o.jobs;
    vo.kernels = l.kern;
    const VerificationReport bounds = verify_bounds(spec, w.d, vo);
    vo.trials = a.pairs;
    const VerificationReport coupling = verify_convergence_coupling(spec, w.d, vo);

    summarize(bounds, out);
    summarize(coupling, out);
    if (!o.csv.empty())
    {
        std::ofstream f = open_csv(o.csv);
        write_verification_csv(bounds, coupling, f);
    }
    const bool ok = bounds.passed() && coupling.passed();
    out << "result: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kFailed;
}

}  // namespace

int exit_code(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::invalid_argument:
    case ErrorCode::parse: return kUsage;
    case ErrorCode::not_nonnegative:
    case ErrorCode::conditions_not_met: return kFailed;
    case ErrorCode::evaluation:
    case ErrorCode::not_converged:
    case ErrorCode::blow_up: return kNumerical;
    case ErrorCode::inhomogeneous: return kInhomogeneous;
    case ErrorCode::reducible: return kReducible;
    }
    return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Convergence-rate bounds for finite continuous-time Markov chains", "ergobound"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("model", o.model, "Model file (JSON, see docs/model_schema.md)")->required();
        sub->add_option("--param-override", o.overrides, "Replace a named rate by a constant: NAME=VALUE");
        sub->add_option("--kernels", o.kernels, "Kernel variant: auto, scalar or avx2")
            ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
        sub->add_option("--horizon", o.horizon, "Time horizon T");
        sub->add_option("--grid", o.grid, "Grid points for B*(t) evaluation");
    };

    CLI::App* check = app.add_subcommand("check", "Regularity and essential non-negativity of B*(t)");
    common(check);

    CLI::App* rate = app.add_subcommand("rate", "Sharp convergence rate of a constant-rate chain");
    common(rate);
    rate->add_option("--csv", o.csv, "Write the bound report as CSV");
    rate->add_flag("--cross-check", o.cross_check, "Compare with the constant birth-death closed form");

    CLI::App* bounds = app.add_subcommand("bounds", "Two-sided envelopes over [0, T]");
    common(bounds);
    bounds->add_option("--weights", o.weights, "ones, perron, frozen-perron, or a JSON weights file");
    bounds->add_option("--csv", o.csv, "Write CSV here instead of stdout");

    CLI::App* verify = app.add_subcommand("verify", "Check the envelopes against integrated trajectories");
    common(verify);
    verify->add_option("--weights", o.weights, "ones, perron, frozen-perron, or a JSON weights file");
    verify->add_option("--csv", o.csv, "Write per-time ratio extremes as CSV");
    verify->add_option("--steps", o.steps, "RK4 steps over the horizon");
    verify->add_option("--trials", o.trials, "Random starts (and random pairs)");
    verify->add_option("--seed", o.seed, "Seed for the random starts");
    verify->add_option("--tol", o.tol, "Slack on top of the integrator margin");
    verify->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try
    {
        if (*check) return cmd_check(o, out);
        if (*rate) return cmd_rate(o, out);
        if (*bounds) return cmd_bounds(o, out, err);
        return cmd_verify(o, out);
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace ergobound::cli
