// SPDX-License-Identifier: Apache-2.0
//
// oamrs: link-level simulator for rate-splitting OAM-MIMO downlinks
// Copyright (C) 2026 The oamrs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "oamrs/fp_precoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "oamrs/errors.hpp"

namespace oamrs {

namespace {

constexpr std::size_t max_step_halvings = 20;

Eigen::MatrixXcd &stream_of(RsPrecoder &p, Stream s)
{
    switch (s)
    {
    case Stream::private_a:
        return p.private_a;
    case Stream::private_b:
        return p.private_b;
    case Stream::common:
        break;
    }
    return p.common;
}

const Eigen::MatrixXcd &stream_of(const RsPrecoder &p, Stream s)
{
    return stream_of(const_cast<RsPrecoder &>(p), s);
}

const char *stream_name(Stream s)
{
    switch (s)
    {
    case Stream::private_a:
        return "private_a";
    case Stream::private_b:
        return "private_b";
    case Stream::common:
        break;
    }
    return "common";
}

const ChannelMatrix &channel_of(const PairChannels &channels, Receiver r)
{
    return r == Receiver::a ? channels.a : channels.b;
}

const std::vector<double> &tau_of(const PairTau &tau, Receiver r)
{
    return r == Receiver::a ? tau.a : tau.b;
}

// Power layout of one stream: entry powers with their row, column and total sums.
struct StreamPower
{
    Eigen::MatrixXd power;
    Eigen::VectorXd row;
    Eigen::VectorXd col;
    double total = 0.0;

    explicit StreamPower(const Eigen::MatrixXcd &p)
        : power(p.cwiseAbs2()), row(power.rowwise().sum()), col(power.colwise().sum().transpose()),
          total(power.sum())
    {
    }

    double coupled(Coupling c, Eigen::Index m, Eigen::Index n, InterferenceExclusion exclusion) const
    {
        switch (c)
        {
        case Coupling::none:
            return 0.0;
        case Coupling::full:
            return total;
        case Coupling::cross:
            break;
        }
        const bool inside = n < power.cols();
        const double own = inside ? power(m, n) : 0.0;
        double value = exclusion == InterferenceExclusion::row_and_column
                           ? total - row(m) - (inside ? col(n) : 0.0) + own
                           : total - own;
        return std::max(value, 0.0);
    }
};

struct Layout
{
    std::array<StreamPower, stream_count> streams;

    explicit Layout(const RsPrecoder &p)
        : streams{StreamPower(p.private_a), StreamPower(p.private_b), StreamPower(p.common)}
    {
    }
};

Eigen::Index family_cols(const FpProblem &problem, const RsPrecoder &p, const RatioFamily &f)
{
    return std::min(static_cast<Eigen::Index>(channel_of(problem.channels, f.receiver).rx_count()),
                    stream_of(p, f.signal).cols());
}

// a and b of every cell of one family
struct FamilyTerms
{
    Eigen::MatrixXcd a;
    Eigen::MatrixXd b;
    Eigen::MatrixXd gain;
};

FamilyTerms family_terms(const FpProblem &problem, const RsPrecoder &p, const Layout &layout, const RatioFamily &f)
{
    const ChannelMatrix &h = channel_of(problem.channels, f.receiver);
    const Eigen::MatrixXcd &signal = stream_of(p, f.signal);
    const Eigen::Index rows = signal.rows();
    const Eigen::Index cols = family_cols(problem, p, f);

    FamilyTerms t;
    t.a.resize(rows, cols);
    t.b.resize(rows, cols);
    t.gain.resize(rows, cols);
    for (Eigen::Index m = 0; m < rows; ++m)
        for (Eigen::Index n = 0; n < cols; ++n)
        {
            const cdouble hmn = h.entries(n, m);
            const double gain = std::norm(hmn);
            double interference = 0.0;
            for (std::size_t j = 0; j < stream_count; ++j)
                interference += layout.streams[j].coupled(f.coupling[j], m, n, problem.exclusion);
            t.a(m, n) = hmn * signal(m, n);
            t.b(m, n) = gain * interference + problem.noise_power;
            t.gain(m, n) = gain;
        }
    return t;
}

// sum_q log2(1 + x tau_q / M); NaN-free only for 1 + x tau_q / M > 0
double cell_capacity(double x, const std::vector<double> &tau, double inv_m)
{
    double c = 0.0;
    for (double t : tau)
    {
        const double arg = 1.0 + x * t * inv_m;
        if (!(arg > 0.0))
            return -std::numeric_limits<double>::infinity();
        c += std::log2(arg);
    }
    return c;
}

double cell_slope(double x, const std::vector<double> &tau, double inv_m)
{
    double s = 0.0;
    for (double t : tau)
        s += t * inv_m / ((1.0 + x * t * inv_m) * std::numbers::ln2);
    return s;
}

// Per-cell SINR (exact, or the quadratic-transform value when y is given).
Eigen::MatrixXd cell_ratios(const FamilyTerms &t, const Eigen::MatrixXcd *y)
{
    Eigen::MatrixXd x(t.a.rows(), t.a.cols());
    for (Eigen::Index i = 0; i < t.a.size(); ++i)
    {
        if (y == nullptr)
            x(i) = std::norm(t.a(i)) / t.b(i);
        else
            x(i) = 2.0 * std::real(std::conj((*y)(i)) * t.a(i)) - std::norm((*y)(i)) * t.b(i);
    }
    return x;
}

double family_capacity(const Eigen::MatrixXd &x, const std::vector<double> &tau, double inv_m)
{
    double c = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        c += cell_capacity(x(i), tau, inv_m);
    return c;
}

struct Evaluation
{
    std::vector<FamilyTerms> terms;
    std::vector<Eigen::MatrixXd> ratios;
    std::vector<double> capacity;     // per family
    std::vector<std::size_t> binding; // per group: member that attains the minimum
    double objective = 0.0;
};

Evaluation evaluate(const FpProblem &problem, const RsPrecoder &p, const AuxiliarySet *aux)
{
    const Layout layout(p);
    const double inv_m = 1.0 / static_cast<double>(problem.tx_count());
    const auto &families = problem.structure.families;

    Evaluation e;
    e.terms.reserve(families.size());
    for (std::size_t f = 0; f < families.size(); ++f)
    {
        e.terms.push_back(family_terms(problem, p, layout, families[f]));
        e.ratios.push_back(cell_ratios(e.terms.back(), aux ? &aux->values.at(f) : nullptr));
        e.capacity.push_back(family_capacity(e.ratios.back(), tau_of(problem.tau, families[f].receiver), inv_m));
    }
    for (const RateGroup &g : problem.structure.groups)
    {
        std::size_t best = g.members.front();
        for (std::size_t member : g.members)
            if (e.capacity[member] < e.capacity[best])
                best = member;
        e.binding.push_back(best);
        e.objective += e.capacity[best];
    }
    return e;
}

RsPrecoder zero_like(const RsPrecoder &p)
{
    return {Eigen::MatrixXcd::Zero(p.private_a.rows(), p.private_a.cols()),
            Eigen::MatrixXcd::Zero(p.private_b.rows(), p.private_b.cols()),
            Eigen::MatrixXcd::Zero(p.common.rows(), p.common.cols())};
}

void zero_inactive(const RateStructure &structure, RsPrecoder &p)
{
    for (std::size_t j = 0; j < stream_count; ++j)
        if (!structure.active[j])
            stream_of(p, static_cast<Stream>(j)).setZero();
}

RsPrecoder project(const RsPrecoder &p, double budget)
{
    return p.is_zero() ? p : scale_to_power(p, budget);
}

double gradient_norm(const RsPrecoder &g)
{
    return std::sqrt(total_power(g));
}

void check_finite_gradient(const RsPrecoder &g)
{
    for (std::size_t j = 0; j < stream_count; ++j)
    {
        const Eigen::MatrixXcd &s = stream_of(g, static_cast<Stream>(j));
        for (Eigen::Index m = 0; m < s.rows(); ++m)
            for (Eigen::Index n = 0; n < s.cols(); ++n)
                if (!std::isfinite(s(m, n).real()) || !std::isfinite(s(m, n).imag()))
                    throw NumericalError(std::string("non-finite surrogate gradient at ") +
                                         stream_name(static_cast<Stream>(j)) + "(" + std::to_string(m) + ", " +
                                         std::to_string(n) + ")");
    }
}

AuxTerms direct_terms(const ChannelMatrix &channel, const Eigen::MatrixXcd &signal, double interference_power,
                      double noise_power, std::size_t m, std::size_t n)
{
    const auto mi = static_cast<Eigen::Index>(m);
    const auto ni = static_cast<Eigen::Index>(n);
    if (mi >= signal.rows() || ni >= signal.cols() || ni >= static_cast<Eigen::Index>(channel.rx_count()) ||
        mi >= static_cast<Eigen::Index>(channel.tx_count()))
        throw DomainError("cell (" + std::to_string(m) + ", " + std::to_string(n) + ") is out of range");
    const cdouble h = channel.entries(ni, mi);
    return {h * signal(mi, ni), std::norm(h) * interference_power + noise_power};
}

double direct_cross(const Eigen::MatrixXcd &p, std::size_t m, std::size_t n, InterferenceExclusion exclusion)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index k = 0; k < p.cols(); ++k)
        {
            const bool same_m = i == static_cast<Eigen::Index>(m);
            const bool same_n = k == static_cast<Eigen::Index>(n);
            const bool counted =
                exclusion == InterferenceExclusion::row_and_column ? (!same_m && !same_n) : !(same_m && same_n);
            if (counted)
                sum += std::norm(p(i, k));
        }
    return sum;
}

} // namespace

RateStructure RateStructure::rate_splitting()
{
    using enum Coupling;
    RateStructure s;
    s.families = {
        {Receiver::a, Stream::private_a, {cross, full, none}},
        {Receiver::b, Stream::private_b, {full, cross, none}},
        {Receiver::a, Stream::common, {full, full, cross}},
        {Receiver::b, Stream::common, {full, full, cross}},
    };
    s.groups = {{GroupRole::private_a, {0}}, {GroupRole::private_b, {1}}, {GroupRole::common, {2, 3}}};
    return s;
}

RateStructure RateStructure::sdma()
{
    RateStructure s = rate_splitting();
    s.families.resize(2);
    s.groups.resize(2);
    s.active = {true, true, false};
    return s;
}

RateStructure RateStructure::noma(Receiver strong)
{
    using enum Coupling;
    const Receiver weak = strong == Receiver::a ? Receiver::b : Receiver::a;
    const Stream strong_stream = strong == Receiver::a ? Stream::private_a : Stream::private_b;
    const Stream weak_stream = strong == Receiver::a ? Stream::private_b : Stream::private_a;

    auto couple = [](Stream s, Coupling c, Stream t, Coupling d) {
        std::array<Coupling, stream_count> out{none, none, none};
        out[static_cast<std::size_t>(s)] = c;
        out[static_cast<std::size_t>(t)] = d;
        return out;
    };

    RateStructure s;
    s.families = {
        // strong user after cancelling the weak stream: no weak-user term
        {strong, strong_stream, couple(strong_stream, cross, weak_stream, none)},
        // weak stream at the weak user, and at the strong user (which must also decode it)
        {weak, weak_stream, couple(strong_stream, full, weak_stream, cross)},
        {strong, weak_stream, couple(strong_stream, full, weak_stream, cross)},
    };
    const GroupRole strong_role = strong == Receiver::a ? GroupRole::private_a : GroupRole::private_b;
    const GroupRole weak_role = strong == Receiver::a ? GroupRole::private_b : GroupRole::private_a;
    s.groups = {{strong_role, {0}}, {weak_role, {1, 2}}};
    s.active = {true, true, false};
    return s;
}

RateStructure RateStructure::single_user(Receiver user)
{
    using enum Coupling;
    RateStructure s;
    if (user == Receiver::a)
    {
        s.families = {{Receiver::a, Stream::private_a, {cross, none, none}}};
        s.groups = {{GroupRole::private_a, {0}}};
        s.active = {true, false, false};
    }
    else
    {
        s.families = {{Receiver::b, Stream::private_b, {none, cross, none}}};
        s.groups = {{GroupRole::private_b, {0}}};
        s.active = {false, true, false};
    }
    return s;
}

void FpProblem::validate() const
{
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        throw DomainError("noise_power must be positive");
    if (!(power_budget > 0.0) || !std::isfinite(power_budget))
        throw DomainError("power_budget must be positive");
    if (channels.a.tx_count() != channels.b.tx_count())
        throw DomainError("both channels of a pair must share the transmit array");
    if (channels.a.entries.size() == 0 || channels.b.entries.size() == 0)
        throw DomainError("channels must be nonempty");
    if (tau.a.empty() || tau.b.empty())
        throw DomainError("eigenvalue lists must be nonempty");
    if (structure.families.empty() || structure.groups.empty())
        throw DomainError("rate structure is empty");
    for (const RateGroup &g : structure.groups)
    {
        if (g.members.empty())
            throw DomainError("rate group without members");
        for (std::size_t member : g.members)
            if (member >= structure.families.size())
                throw DomainError("rate group refers to a missing family");
    }
}

void FpConfig::validate() const
{
    if (!(convergence_threshold > 0.0))
        throw DomainError("convergence_threshold must be positive");
    if (max_outer_iterations < 1 || inner_step_count < 1)
        throw DomainError("iteration counts must be at least 1");
    if (!(inner_step_size > 0.0) || !std::isfinite(inner_step_size))
        throw DomainError("inner_step_size must be positive");
    if (!(init_scale > 0.0 && init_scale <= 1.0))
        throw DomainError("init_scale must lie in (0, 1]");
}

AuxTerms aux_terms_private(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target,
                           double noise_power, std::size_t m, std::size_t n, InterferenceExclusion exclusion)
{
    const Eigen::MatrixXcd &own = target == Receiver::a ? precoder.private_a : precoder.private_b;
    const Eigen::MatrixXcd &other = target == Receiver::a ? precoder.private_b : precoder.private_a;
    const double interference = other.squaredNorm() + direct_cross(own, m, n, exclusion);
    return direct_terms(channel, own, interference, noise_power, m, n);
}

AuxTerms aux_terms_common(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver /*target*/,
                          double noise_power, std::size_t m, std::size_t n, InterferenceExclusion exclusion)
{
    const double interference = precoder.private_a.squaredNorm() + precoder.private_b.squaredNorm() +
                                direct_cross(precoder.common, m, n, exclusion);
    return direct_terms(channel, precoder.common, interference, noise_power, m, n);
}

AuxiliarySet update_auxiliaries(const FpProblem &problem, const RsPrecoder &precoder)
{
    const Layout layout(precoder);
    AuxiliarySet aux;
    for (const RatioFamily &f : problem.structure.families)
    {
        const FamilyTerms t = family_terms(problem, precoder, layout, f);
        aux.values.emplace_back(t.a.array() / t.b.array().cast<cdouble>());
    }
    return aux;
}

double true_objective(const FpProblem &problem, const RsPrecoder &precoder)
{
    return evaluate(problem, precoder, nullptr).objective;
}

double surrogate_objective(const FpProblem &problem, const RsPrecoder &precoder, const AuxiliarySet &auxiliaries)
{
    if (auxiliaries.values.size() != problem.structure.families.size())
        throw DomainError("auxiliary set does not match the rate structure");
    return evaluate(problem, precoder, &auxiliaries).objective;
}

RsPrecoder surrogate_gradient(const FpProblem &problem, const RsPrecoder &precoder, const AuxiliarySet &auxiliaries)
{
    const Evaluation e = evaluate(problem, precoder, &auxiliaries);
    const double inv_m = 1.0 / static_cast<double>(problem.tx_count());
    const auto &families = problem.structure.families;

    RsPrecoder grad = zero_like(precoder);
    // K_j(m', n'): total weight with which |p_j(m', n')|^2 enters the active denominators
    std::array<Eigen::MatrixXd, stream_count> weight;
    for (std::size_t j = 0; j < stream_count; ++j)
    {
        const Eigen::MatrixXcd &s = stream_of(precoder, static_cast<Stream>(j));
        weight[j] = Eigen::MatrixXd::Zero(s.rows(), s.cols());
    }

    for (std::size_t f : e.binding)
    {
        const RatioFamily &family = families[f];
        const FamilyTerms &t = e.terms[f];
        const Eigen::MatrixXcd &y = auxiliaries.values.at(f);
        const std::vector<double> &tau = tau_of(problem.tau, family.receiver);

        Eigen::MatrixXd u(t.a.rows(), t.a.cols());
        Eigen::MatrixXcd &signal_grad = stream_of(grad, family.signal);
        const ChannelMatrix &h = channel_of(problem.channels, family.receiver);
        for (Eigen::Index m = 0; m < t.a.rows(); ++m)
            for (Eigen::Index n = 0; n < t.a.cols(); ++n)
            {
                const double slope = cell_slope(e.ratios[f](m, n), tau, inv_m);
                signal_grad(m, n) += 2.0 * slope * y(m, n) * std::conj(h.entries(n, m));
                u(m, n) = slope * std::norm(y(m, n)) * t.gain(m, n);
            }

        const double u_total = u.sum();
        const Eigen::VectorXd u_row = u.rowwise().sum();
        const Eigen::VectorXd u_col = u.colwise().sum().transpose();
        for (std::size_t j = 0; j < stream_count; ++j)
        {
            Eigen::MatrixXd &k = weight[j];
            switch (family.coupling[j])
            {
            case Coupling::none:
                break;
            case Coupling::full:
                k.array() += u_total;
                break;
            case Coupling::cross:
                for (Eigen::Index m = 0; m < k.rows(); ++m)
                    for (Eigen::Index n = 0; n < k.cols(); ++n)
                    {
                        const bool inside = n < u.cols();
                        const double own = inside ? u(m, n) : 0.0;
                        k(m, n) += problem.exclusion == InterferenceExclusion::row_and_column
                                       ? u_total - u_row(m) - (inside ? u_col(n) : 0.0) + own
                                       : u_total - own;
                    }
                break;
            }
        }
    }

    for (std::size_t j = 0; j < stream_count; ++j)
    {
        const auto s = static_cast<Stream>(j);
        stream_of(grad, s).array() -= 2.0 * stream_of(precoder, s).array() * weight[j].array().cast<cdouble>();
    }
    zero_inactive(problem.structure, grad);
    return grad;
}

RsPrecoder inner_step(const FpProblem &problem, const RsPrecoder &precoder, const AuxiliarySet &auxiliaries,
                      const FpConfig &config)
{
    RsPrecoder current = project(precoder, problem.power_budget);
    double value = surrogate_objective(problem, current, auxiliaries);
    const double radius = std::sqrt(problem.power_budget);
    double step = config.inner_step_size;

    for (std::size_t k = 0; k < config.inner_step_count; ++k)
    {
        const RsPrecoder grad = surrogate_gradient(problem, current, auxiliaries);
        check_finite_gradient(grad);
        const double norm = gradient_norm(grad);
        if (norm == 0.0)
            break;

        bool accepted = false;
        for (std::size_t attempt = 0; attempt <= max_step_halvings; ++attempt)
        {
            const double scale = step * radius / norm;
            RsPrecoder trial{current.private_a + scale * grad.private_a, current.private_b + scale * grad.private_b,
                             current.common + scale * grad.common};
            trial = project(trial, problem.power_budget);
            const double trial_value = surrogate_objective(problem, trial, auxiliaries);
            if (trial_value >= value)
            {
                current = std::move(trial);
                value = trial_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
    }
    return current;
}

RsPrecoder initial_precoder(const FpProblem &problem, const FpConfig &config)
{
    const std::size_t m = problem.tx_count();
    RsPrecoder p = RsPrecoder::zeros(m, problem.channels.a.rx_count(), problem.channels.b.rx_count());

    std::mt19937_64 rng(config.init_seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (std::size_t j = 0; j < stream_count; ++j)
    {
        Eigen::MatrixXcd &s = stream_of(p, static_cast<Stream>(j));
        for (Eigen::Index i = 0; i < s.size(); ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            s(i) = {re, im};
        }
    }
    zero_inactive(problem.structure, p);
    const double power = total_power(p);
    if (power == 0.0)
        return p;
    p = std::sqrt(config.init_scale * problem.power_budget / power) * p;
    return project(p, problem.power_budget);
}

RateReport structure_report(const FpProblem &problem, const RsPrecoder &precoder, const SplitPolicy &policy)
{
    const Evaluation e = evaluate(problem, precoder, nullptr);
    double private_a = 0.0, private_b = 0.0, common_a = 0.0, common_b = 0.0;
    for (std::size_t g = 0; g < problem.structure.groups.size(); ++g)
    {
        const RateGroup &group = problem.structure.groups[g];
        switch (group.role)
        {
        case GroupRole::private_a:
            private_a += e.capacity[e.binding[g]];
            break;
        case GroupRole::private_b:
            private_b += e.capacity[e.binding[g]];
            break;
        case GroupRole::common:
            for (std::size_t member : group.members)
            {
                const double c = e.capacity[member];
                if (problem.structure.families[member].receiver == Receiver::a)
                    common_a = c;
                else
                    common_b = c;
            }
            break;
        }
    }
    return make_report(private_a, private_b, common_a, common_b, policy);
}

FpResult optimize(const FpProblem &problem, const FpConfig &config, const SplitPolicy &policy,
                  const FpTraceSink &trace)
{
    problem.validate();
    config.validate();

    FpState state;
    state.precoder = initial_precoder(problem, config);
    double previous = true_objective(problem, state.precoder);

    for (std::size_t iteration = 1; iteration <= config.max_outer_iterations; ++iteration)
    {
        state.auxiliaries = update_auxiliaries(problem, state.precoder);
        state.precoder = inner_step(problem, state.precoder, state.auxiliaries, config);
        const double value = surrogate_objective(problem, state.precoder, state.auxiliaries);
        state.objective_trace.push_back(value);
        state.iterations_used = iteration;
        if (trace)
            trace({iteration, value, total_power(state.precoder)});
        if (value - previous <= config.convergence_threshold)
        {
            state.converged = true;
            break;
        }
        previous = value;
    }

    FpResult result;
    result.report = structure_report(problem, state.precoder, policy);
    result.state = std::move(state);
    return result;
}

FpProblem make_problem(const ScenarioConfig &scenario, const ModeCase &mode_case, std::size_t pair_index,
                       RateStructure structure)
{
    scenario.validate();
    mode_case.validate();
    if (pair_index >= scenario.pairs.size())
        throw DomainError("pair index " + std::to_string(pair_index) + " out of range");
    const PairConfig &pair = scenario.pairs[pair_index];
    if (pair.tx.element_count != mode_case.tx_count || pair.rx_a.element_count != mode_case.rx_count ||
        pair.rx_b.element_count != mode_case.rx_count)
        throw DomainError("pair " + std::to_string(pair.pair_index) + " array sizes do not match mode case " +
                          mode_case.name);

    FpProblem problem;
    problem.channels = pair_channels(pair, scenario.propagation);
    if (scenario.tau_source == TauSource::table_preset)
        problem.tau = {mode_case.tau_sq, mode_case.tau_sq};
    else
        problem.tau = resolve_tau(scenario, problem.channels);
    problem.noise_power = scenario.noise_power;
    problem.power_budget = scenario.power_budget;
    problem.exclusion = scenario.exclusion;
    problem.structure = std::move(structure);
    return problem;
}

FpResult optimize(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                  std::size_t pair_index, const FpTraceSink &trace)
{
    return optimize(make_problem(scenario, mode_case, pair_index), config, SplitPolicy::equal(), trace);
}

} // namespace oamrs
