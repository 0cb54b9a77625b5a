#include "homeplan/metrics/rates.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace homeplan::metrics {

namespace {

// fraction * 100, rounded half-up to 2 decimals, as an integer count of 0.01.
std::int64_t hundredths(const Rational& fraction) {
    const std::int64_t num = fraction.numerator();
    const std::int64_t den = fraction.denominator();
    const std::int64_t twice = 2 * num * 10000 + den;
    const std::int64_t q = twice / (2 * den);
    // Floor division for negative inputs.
    return (twice % (2 * den) != 0 && twice < 0) ? q - 1 : q;
}

}  // namespace

EpisodeResult evaluate_episode(const Trajectory& trajectory, const KeypathSet& keypaths) {
    EpisodeResult r;
    r.task_id = trajectory.task_id();
    r.run_index = trajectory.run_index();
    r.tp = compute_tp(trajectory, keypaths);
    r.success = r.tp == Rational(1);
    r.ended = !trajectory.empty() && trajectory.steps().back().is_end();
    r.replans = count_replans(trajectory);
    r.length = trajectory_length(trajectory);
    return r;
}

Rate compute_ser(std::span<const EpisodeResult> results) {
    std::int64_t good_ends = 0;
    std::int64_t ends = 0;
    for (const auto& r : results) {
        if (!r.ended) continue;
        ++ends;
        if (r.success) ++good_ends;
    }
    if (ends == 0) return {Rational(0), true};
    return {Rational(good_ends, ends), false};
}

Rate compute_srr(std::span<const EpisodeResult> results) {
    std::int64_t in_success = 0;
    std::int64_t total = 0;
    for (const auto& r : results) {
        total += r.replans;
        if (r.success) in_success += r.replans;
    }
    if (total == 0) return {Rational(0), true};
    return {Rational(in_success, total), false};
}

Rational plwsr_weight(const EpisodeResult& result, int expert_length, PlwsrMode mode) {
    if (!result.success) return Rational(0);
    const std::int64_t longest = std::max(expert_length, result.length);
    if (longest == 0) return Rational(1);
    const std::int64_t numerator = mode == PlwsrMode::Alfred ? expert_length : result.length;
    return Rational(numerator, longest);
}

SuccessRates compute_sr_plwsr(std::span<const EpisodeResult> results,
                              const std::map<std::string, int>& expert_lengths, PlwsrMode mode) {
    for (const auto& r : results) {
        auto it = expert_lengths.find(r.task_id);
        if (it == expert_lengths.end() || it->second < 1) throw MissingExpertLength(r.task_id);
    }
    SuccessRates out;
    out.sr = macro_average(results, [](const EpisodeResult& r) { return Rational(r.success ? 1 : 0); });
    out.plwsr = macro_average(results, [&](const EpisodeResult& r) {
        return plwsr_weight(r, expert_lengths.at(r.task_id), mode);
    });
    return out;
}

std::string format_percent(const Rational& fraction) {
    const std::int64_t h = hundredths(fraction);
    const std::int64_t mag = h < 0 ? -h : h;
    return fmt::format("{}{}.{:02d}", h < 0 ? "-" : "", mag / 100, mag % 100);
}

double percent_value(const Rational& fraction) { return static_cast<double>(hundredths(fraction)) / 100.0; }

}  // namespace homeplan::metrics
