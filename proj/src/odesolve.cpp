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

#include "ergobound/odesolve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "ergobound/bounds.hpp"
#include "ergobound/csv.hpp"
#include "ergobound/error.hpp"
#include "ergobound/random.hpp"

namespace ergobound
{

std::string_view to_string(System system)
{
    switch (system)
    {
    case System::forward: return "forward";
    case System::reduced_hom: return "reduced_hom";
    case System::transformed: return "transformed";
    }
    return "unknown";
}

std::size_t system_dimension(System system, const ChainSpec& spec)
{
    return system == System::forward ? spec.states() + 1 : spec.states();
}

SquareMatrix system_matrix(System system, const ChainSpec& spec, const WeightVector* weights, double t)
{
    switch (system)
    {
    case System::forward: return eval_transposed(spec, t);
    case System::reduced_hom: return build_reduced(spec, t);
    case System::transformed:
        if (weights == nullptr)
        {
            throw Error(ErrorCode::invalid_argument, "transformed system needs weights");
        }
        return apply_weights(bstar_at(spec, t), *weights);
    }
    throw Error(ErrorCode::invalid_argument, "unknown system");
}

BlockStepper::BlockStepper(System system, const ChainSpec& spec, std::optional<WeightVector> weights,
                           std::vector<double> block, std::size_t width, double horizon, std::size_t n_steps,
                           const kernels::Table& k)
    : system_(system),
      spec_(spec),
      weights_(std::move(weights)),
      k_(k),
      dim_(system_dimension(system, spec)),
      width_(width),
      horizon_(horizon),
      n_steps_(n_steps),
      constant_(spec.homogeneous()),
      x_(std::move(block))
{
    if (n_steps_ < 1)
    {
        throw Error(ErrorCode::invalid_argument, "integrator needs n_steps >= 1");
    }
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    {
        throw Error(ErrorCode::invalid_argument, "integrator needs a positive finite horizon");
    }
    if (width_ == 0 || x_.size() != dim_ * width_)
    {
        throw Error(ErrorCode::invalid_argument, "initial block does not match system dimension x width");
    }
    if (system_ == System::transformed && (!weights_ || weights_->size() != dim_))
    {
        throw Error(ErrorCode::invalid_argument, "transformed system needs S weights");
    }
    const std::size_t len = x_.size();
    tmp_.resize(len);
    k1_.resize(len);
    k2_.resize(len);
    k3_.resize(len);
    k4_.resize(len);
    m_start_ = matrix_at(0.0);
}

double BlockStepper::time_at(std::size_t k) const
{
    if (k == n_steps_)
    {
        return horizon_;
    }
    return horizon_ * static_cast<double>(k) / static_cast<double>(n_steps_);
}

SquareMatrix BlockStepper::matrix_at(double t) const
{
    return system_matrix(system_, spec_, weights_ ? &*weights_ : nullptr, t);
}

void BlockStepper::apply(const SquareMatrix& m, const double* in, double* out) const
{
    if (width_ == 1)
    {
        k_.matvec(m.data().data(), dim_, in, out);
    }
    else
    {
        k_.matmul_block(m.data().data(), dim_, in, width_, out);
    }
}

void BlockStepper::advance()
{
    if (step_ >= n_steps_)
    {
        throw Error(ErrorCode::invalid_argument, "integrator already reached the horizon");
    }
    const double h = horizon_ / static_cast<double>(n_steps_);
    const std::size_t len = x_.size();

    SquareMatrix m_mid;
    SquareMatrix m_end;
    if (!constant_)
    {
        const double t_mid = horizon_ * static_cast<double>(2 * step_ + 1) / static_cast<double>(2 * n_steps_);
        m_mid = matrix_at(t_mid);
        m_end = matrix_at(time_at(step_ + 1));
    }
    const SquareMatrix& mid = constant_ ? m_start_ : m_mid;
    const SquareMatrix& end = constant_ ? m_start_ : m_end;

    apply(m_start_, x_.data(), k1_.data());
    k_.axpy_to(x_.data(), 0.5 * h, k1_.data(), len, tmp_.data());
    apply(mid, tmp_.data(), k2_.data());
    k_.axpy_to(x_.data(), 0.5 * h, k2_.data(), len, tmp_.data());
    apply(mid, tmp_.data(), k3_.data());
    k_.axpy_to(x_.data(), h, k3_.data(), len, tmp_.data());
    apply(end, tmp_.data(), k4_.data());
    k_.rk4_combine(x_.data(), k1_.data(), k2_.data(), k3_.data(), k4_.data(), h, len);

    ++step_;
    if (!constant_)
    {
        m_start_ = std::move(m_end);
    }

    for (double v : x_)
    {
        if (!(std::abs(v) <= kBlowUpThreshold))
        {
            std::ostringstream os;
            os << "integration blew up at t=" << time() << " (|state| = " << std::abs(v) << ")";
            throw Error(ErrorCode::blow_up, os.str());
        }
    }
}

Trajectory solve(System system, const ChainSpec& spec, const std::optional<WeightVector>& weights,
                 std::span<const double> x0, double horizon, std::size_t n_steps, const kernels::Table& k)
{
    BlockStepper stepper(system, spec, weights, std::vector<double>(x0.begin(), x0.end()), 1, horizon, n_steps, k);
    Trajectory traj;
    traj.coordinates = system;
    traj.grid.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.grid.push_back(0.0);
    traj.states.emplace_back(x0.begin(), x0.end());
    while (stepper.step() < stepper.steps())
    {
        stepper.advance();
        traj.grid.push_back(stepper.time());
        traj.states.emplace_back(stepper.state().begin(), stepper.state().end());
    }
    return traj;
}

namespace
{

// Columns [0, half) and [half, 2 half) of a chunk's block.
struct ChunkInput
{
    std::size_t first_trial = 0;
    std::size_t count = 0;
    std::vector<double> block;   // rows x (2 count)
    std::vector<double> w0_norm; // per column of the measured quantity
};

struct ChunkResult
{
    std::vector<double> max_upper;
    std::vector<double> min_lower;
    std::vector<double> margin;
    double nonneg_max_upper = -std::numeric_limits<double>::infinity();
    double nonneg_min_lower = std::numeric_limits<double>::infinity();
    double min_nonneg_component = std::numeric_limits<double>::infinity();
    double max_mass_defect = 0.0;
    double min_probability = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::optional<VerificationViolation> first;
    std::optional<VerificationViolation> worst_upper;
    std::optional<VerificationViolation> worst_lower;
};

bool earlier(const VerificationViolation& a, const VerificationViolation& b)
{
    return a.t < b.t || (a.t == b.t && a.trial < b.trial);
}

void keep_first(std::optional<VerificationViolation>& slot, const VerificationViolation& v)
{
    if (!slot || earlier(v, *slot))
    {
        slot = v;
    }
}

void keep_worst(std::optional<VerificationViolation>& slot, const VerificationViolation& v, bool larger)
{
    if (!slot)
    {
        slot = v;
        return;
    }
    const bool better = larger ? v.ratio > slot->ratio : v.ratio < slot->ratio;
    if (better || (v.ratio == slot->ratio && v.trial < slot->trial))
    {
        slot = v;
    }
}

enum class Mode
{
    bounds,
    coupling
};

struct Context
{
    Mode mode;
    System system;
    const ChainSpec* spec;
    std::optional<WeightVector> stepper_weights;
    const WeightVector* weights;
    const BoundReport* coarse;
    const BoundReport* fine;
    const VerifyOptions* opts;
    std::size_t n_steps;
    const kernels::Table* kern;
};

// Column l1 norms of the measured quantity: w itself (bounds), or
// D T (z1 - z2) formed from paired columns (coupling).
void measure(const Context& ctx, std::span<const double> state, std::size_t count, std::vector<double>& scratch,
             std::vector<double>& norms)
{
    const std::size_t S = ctx.spec->states();
    if (ctx.mode == Mode::bounds)
    {
        norms.resize(2 * count);
        ctx.kern->column_abs_sums(state.data(), S, 2 * count, norms.data());
        return;
    }
    const std::size_t width = 2 * count;
    scratch.assign(S * count, 0.0);
    std::vector<double> tail(count, 0.0);
    for (std::size_t i = S; i-- > 0;)
    {
        const double* row = state.data() + (i + 1) * width;  // p_{i+1}
        double* out = scratch.data() + i * count;
        const double d = (*ctx.weights)[i];
        for (std::size_t c = 0; c < count; ++c)
        {
            tail[c] += row[c] - row[count + c];
            out[c] = d * tail[c];
        }
    }
    norms.resize(count);
    ctx.kern->column_abs_sums(scratch.data(), S, count, norms.data());
}

ChunkResult run_chunk(const Context& ctx, const ChunkInput& in)
{
    const std::size_t n = ctx.n_steps;
    const std::size_t width = 2 * in.count;
    const std::size_t rows = system_dimension(ctx.system, *ctx.spec);
    ChunkResult res;
    res.max_upper.assign(n + 1, -std::numeric_limits<double>::infinity());
    res.min_lower.assign(n + 1, std::numeric_limits<double>::infinity());
    res.margin.assign(n + 1, 0.0);

    BlockStepper coarse(ctx.system, *ctx.spec, ctx.stepper_weights, in.block, width, ctx.opts->horizon, n, *ctx.kern);
    BlockStepper fine(ctx.system, *ctx.spec, ctx.stepper_weights, in.block, width, ctx.opts->horizon, 2 * n,
                      *ctx.kern);

    std::vector<double> norms_c, norms_f, scratch;
    const double slack = ctx.opts->slack;
    const std::size_t measured = ctx.mode == Mode::bounds ? width : in.count;

    for (std::size_t k = 0; k <= n; ++k)
    {
        if (k > 0)
        {
            coarse.advance();
            fine.advance();
            fine.advance();
        }
        const double t = coarse.time();
        measure(ctx, coarse.state(), in.count, scratch, norms_c);
        measure(ctx, fine.state(), in.count, scratch, norms_f);

        const double iu_c = ctx.coarse->integral_upper[k];
        const double il_c = ctx.coarse->integral_lower[k];
        const double quad_u = 2.0 * std::abs(iu_c - ctx.fine->integral_upper[2 * k]);
        const double quad_l = 2.0 * std::abs(il_c - ctx.fine->integral_lower[2 * k]);
        const double env_u = std::exp(iu_c);
        const double env_l = std::exp(il_c);

        for (std::size_t c = 0; c < measured; ++c)
        {
            const double w0 = in.w0_norm[c];
            if (w0 == 0.0)
            {
                continue;
            }
            const std::size_t trial = in.first_trial + (c % in.count);
            const bool nonneg = ctx.mode == Mode::bounds && c >= in.count;

            const double ratio_u = norms_c[c] / (env_u * w0);
            const double margin_u = 2.0 * std::abs(norms_c[c] - norms_f[c]) / (env_u * w0) + quad_u;
            const double allowed_u = 1.0 + slack + margin_u;
            res.max_upper[k] = std::max(res.max_upper[k], ratio_u);
            res.margin[k] = std::max(res.margin[k], margin_u);
            keep_worst(res.worst_upper, {trial, t, ratio_u, allowed_u, true}, true);
            if (ratio_u > allowed_u)
            {
                ++res.violations;
                keep_first(res.first, {trial, t, ratio_u, allowed_u, true});
            }

            if (nonneg)
            {
                const double ratio_l = norms_c[c] / (env_l * w0);
                const double margin_l = 2.0 * std::abs(norms_c[c] - norms_f[c]) / (env_l * w0) + quad_l;
                const double allowed_l = 1.0 - slack - margin_l;
                res.min_lower[k] = std::min(res.min_lower[k], ratio_l);
                res.margin[k] = std::max(res.margin[k], margin_l);
                res.nonneg_max_upper = std::max(res.nonneg_max_upper, ratio_u);
                res.nonneg_min_lower = std::min(res.nonneg_min_lower, ratio_l);
                keep_worst(res.worst_lower, {trial, t, ratio_l, allowed_l, false}, false);
                if (ratio_l < allowed_l)
                {
                    ++res.violations;
                    keep_first(res.first, {trial, t, ratio_l, allowed_l, false});
                }
            }
        }

        const auto state = coarse.state();
        if (ctx.mode == Mode::bounds)
        {
            for (std::size_t i = 0; i < rows; ++i)
            {
                for (std::size_t c = in.count; c < width; ++c)
                {
                    res.min_nonneg_component = std::min(res.min_nonneg_component, state[i * width + c]);
                }
            }
        }
        else
        {
            for (std::size_t c = 0; c < width; ++c)
            {
                double mass = 0.0;
                for (std::size_t i = 0; i < rows; ++i)
                {
                    const double p = state[i * width + c];
                    mass += p;
                    res.min_probability = std::min(res.min_probability, p);
                }
                res.max_mass_defect = std::max(res.max_mass_defect, std::abs(mass - 1.0));
            }
        }
    }
    return res;
}

VerificationReport run_verification(const Context& ctx, std::vector<ChunkInput> chunks, std::string_view kind)
{
    std::vector<ChunkResult> results(chunks.size());
    if (chunks.size() == 1)
    {
        results[0] = run_chunk(ctx, chunks[0]);
    }
    else
    {
        std::vector<std::exception_ptr> errors(chunks.size());
        std::vector<std::thread> workers;
        workers.reserve(chunks.size());
        for (std::size_t i = 0; i < chunks.size(); ++i)
        {
            workers.emplace_back([&, i] {
                try
                {
                    results[i] = run_chunk(ctx, chunks[i]);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            });
        }
        for (auto& w : workers)
        {
            w.join();
        }
        for (auto& e : errors)
        {
            if (e)
            {
                std::rethrow_exception(e);
            }
        }
    }

    const std::size_t n = ctx.n_steps;
    VerificationReport rep;
    rep.kind = kind;
    rep.seed = ctx.opts->seed;
    rep.n_steps = n;
    rep.horizon = ctx.opts->horizon;
    rep.slack = ctx.opts->slack;
    rep.grid = ctx.coarse->grid;
    rep.max_upper_ratio.assign(n + 1, -std::numeric_limits<double>::infinity());
    rep.margin.assign(n + 1, 0.0);
    if (ctx.mode == Mode::bounds)
    {
        rep.min_lower_ratio.assign(n + 1, std::numeric_limits<double>::infinity());
    }
    rep.nonneg_max_upper_ratio = -std::numeric_limits<double>::infinity();
    rep.nonneg_min_lower_ratio = std::numeric_limits<double>::infinity();
    rep.min_nonneg_component = std::numeric_limits<double>::infinity();
    rep.min_probability = std::numeric_limits<double>::infinity();

    for (std::size_t ci = 0; ci < results.size(); ++ci)
    {
        const ChunkResult& r = results[ci];
        rep.trials += chunks[ci].count;
        for (std::size_t k = 0; k <= n; ++k)
        {
            rep.max_upper_ratio[k] = std::max(rep.max_upper_ratio[k], r.max_upper[k]);
            rep.margin[k] = std::max(rep.margin[k], r.margin[k]);
            if (ctx.mode == Mode::bounds)
            {
                rep.min_lower_ratio[k] = std::min(rep.min_lower_ratio[k], r.min_lower[k]);
            }
        }
        rep.nonneg_max_upper_ratio = std::max(rep.nonneg_max_upper_ratio, r.nonneg_max_upper);
        rep.nonneg_min_lower_ratio = std::min(rep.nonneg_min_lower_ratio, r.nonneg_min_lower);
        rep.min_nonneg_component = std::min(rep.min_nonneg_component, r.min_nonneg_component);
        rep.max_mass_defect = std::max(rep.max_mass_defect, r.max_mass_defect);
        rep.min_probability = std::min(rep.min_probability, r.min_probability);
        rep.violations += r.violations;
        if (r.first)
        {
            keep_first(rep.first_violation, *r.first);
        }
        if (r.worst_upper)
        {
            keep_worst(rep.worst_upper, *r.worst_upper, true);
        }
        if (r.worst_lower)
        {
            keep_worst(rep.worst_lower, *r.worst_lower, false);
        }
    }
    for (double m : rep.margin)
    {
        rep.max_integrator_margin = std::max(rep.max_integrator_margin, m);
    }
    return rep;
}

std::size_t even_steps(std::size_t n)
{
    if (n < 2)
    {
        return 2;
    }
    return n + (n % 2);
}

// Splits [0, count) into at most `jobs` contiguous ranges.
std::vector<std::pair<std::size_t, std::size_t>> partition(std::size_t count, std::size_t jobs)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t base = count / jobs;
    const std::size_t extra = count % jobs;
    std::size_t start = 0;
    for (std::size_t j = 0; j < jobs; ++j)
    {
        const std::size_t len = base + (j < extra ? 1 : 0);
        out.emplace_back(start, len);
        start += len;
    }
    return out;
}

void validate(const ChainSpec& spec, const WeightVector& weights, const VerifyOptions& opts)
{
    if (weights.size() != spec.states())
    {
        throw Error(ErrorCode::invalid_argument, "verification: weight count must equal S");
    }
    if (opts.trials < 1)
    {
        throw Error(ErrorCode::invalid_argument, "verification: need at least one trial");
    }
    if (!(opts.horizon > 0.0))
    {
        throw Error(ErrorCode::invalid_argument, "verification: horizon must be positive");
    }
}

}  // namespace

VerificationReport verify_bounds(const ChainSpec& spec, const WeightVector& weights, const VerifyOptions& opts)
{
    validate(spec, weights, opts);
    const std::size_t S = spec.states();
    const std::size_t n = even_steps(opts.n_steps);
    const kernels::Table& kern = opts.kernels != nullptr ? *opts.kernels : kernels::best();

    const BoundReport coarse = compute_bounds(spec, weights, opts.horizon, n + 1, kern);
    const BoundReport fine = compute_bounds(spec, weights, opts.horizon, 2 * n + 1, kern);

    // All draws happen up front so results do not depend on the job split.
    Rng rng(opts.seed);
    auto draw = [&](double lo) {
        Vector v(S);
        do
        {
            for (double& e : v)
            {
                e = rng.uniform(lo, 1.0);
            }
        } while (l1_norm(v) < 1e-6);
        return v;
    };
    std::vector<Vector> signed_starts(opts.trials);
    std::vector<Vector> nonneg_starts(opts.trials);
    for (std::size_t i = 0; i < opts.trials; ++i)
    {
        signed_starts[i] = draw(-1.0);
        nonneg_starts[i] = draw(0.0);
    }

    std::vector<ChunkInput> chunks;
    for (const auto& [first, count] : partition(opts.trials, opts.jobs))
    {
        ChunkInput in;
        in.first_trial = first;
        in.count = count;
        const std::size_t width = 2 * count;
        in.block.assign(S * width, 0.0);
        in.w0_norm.resize(width);
        for (std::size_t c = 0; c < count; ++c)
        {
            const Vector& sv = signed_starts[first + c];
            const Vector& nv = nonneg_starts[first + c];
            for (std::size_t i = 0; i < S; ++i)
            {
                in.block[i * width + c] = sv[i];
                in.block[i * width + count + c] = nv[i];
            }
            in.w0_norm[c] = l1_norm(sv);
            in.w0_norm[count + c] = l1_norm(nv);
        }
        chunks.push_back(std::move(in));
    }

    const Context ctx{Mode::bounds, System::transformed, &spec, weights, &weights, &coarse, &fine, &opts, n, &kern};
    return run_verification(ctx, std::move(chunks), "bounds");
}

VerificationReport verify_convergence_coupling(const ChainSpec& spec, const WeightVector& weights,
                                               const VerifyOptions& opts, std::span<const DistributionPair> pairs)
{
    validate(spec, weights, opts);
    const std::size_t S = spec.states();
    const std::size_t n = even_steps(opts.n_steps);
    const kernels::Table& kern = opts.kernels != nullptr ? *opts.kernels : kernels::best();

    const BoundReport coarse = compute_bounds(spec, weights, opts.horizon, n + 1, kern);
    const BoundReport fine = compute_bounds(spec, weights, opts.horizon, 2 * n + 1, kern);

    auto w0_of = [&](const Vector& p1, const Vector& p2) {
        Vector y(S);
        for (std::size_t i = 0; i < S; ++i)
        {
            y[i] = p1[i + 1] - p2[i + 1];
        }
        return l1_norm(to_weighted(y, weights));
    };

    std::vector<DistributionPair> drawn;
    if (pairs.empty())
    {
        Rng rng(opts.seed);
        auto draw = [&] {
            Vector p(S + 1);
            double total = 0.0;
            do
            {
                total = 0.0;
                for (double& e : p)
                {
                    e = rng.uniform();
                    total += e;
                }
            } while (total <= 0.0);
            for (double& e : p)
            {
                e /= total;
            }
            return p;
        };
        for (std::size_t i = 0; i < opts.trials; ++i)
        {
            DistributionPair pr;
            do
            {
                pr.first = draw();
                pr.second = draw();
            } while (w0_of(pr.first, pr.second) < 1e-6);
            drawn.push_back(std::move(pr));
        }
        pairs = drawn;
    }
    for (const auto& [p1, p2] : pairs)
    {
        if (p1.size() != S + 1 || p2.size() != S + 1)
        {
            throw Error(ErrorCode::invalid_argument, "coupling: initial distributions need S+1 entries");
        }
    }

    std::vector<ChunkInput> chunks;
    for (const auto& [first, count] : partition(pairs.size(), opts.jobs))
    {
        ChunkInput in;
        in.first_trial = first;
        in.count = count;
        const std::size_t width = 2 * count;
        in.block.assign((S + 1) * width, 0.0);
        in.w0_norm.resize(count);
        for (std::size_t c = 0; c < count; ++c)
        {
            const auto& [p1, p2] = pairs[first + c];
            for (std::size_t i = 0; i <= S; ++i)
            {
                in.block[i * width + c] = p1[i];
                in.block[i * width + count + c] = p2[i];
            }
            in.w0_norm[c] = w0_of(p1, p2);
        }
        chunks.push_back(std::move(in));
    }

    const Context ctx{Mode::coupling, System::forward, &spec, std::nullopt, &weights, &coarse, &fine, &opts, n, &kern};
    return run_verification(ctx, std::move(chunks), "coupling");
}

void write_verification_csv(const VerificationReport& bounds, const VerificationReport& coupling, std::ostream& os)
{
    if (bounds.grid != coupling.grid)
    {
        throw Error(ErrorCode::invalid_argument, "verification reports use different grids");
    }
    csv::write_header(os, {"t", "bounds_max_upper_ratio", "bounds_min_lower_ratio", "bounds_margin",
                           "coupling_max_upper_ratio", "coupling_margin"});
    for (std::size_t k = 0; k < bounds.grid.size(); ++k)
    {
        csv::write_row(os, {bounds.grid[k], bounds.max_upper_ratio[k], bounds.min_lower_ratio[k], bounds.margin[k],
                            coupling.max_upper_ratio[k], coupling.margin[k]});
    }
}

}  // namespace ergobound
