#include "sara/theory/checks.hpp"

#include <cmath>

namespace sara::theory {

using pgm::AnalysisHint;
using pgm::ErrorKind;
using pgm::ExplorationPolicy;
using pgm::Index;
using pgm::PathDistribution;
using pgm::QueryInstance;
using pgm::Rational;
using pgm::ReasoningPath;

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["claim_id"] = claim_id;
    j["instances_checked"] = instances_checked;
    j["pass"] = pass;
    j["seed"] = seed;
    j["tolerance"] = tolerance;
    j["precondition_violation"] = precondition_violation;
    if (!note.empty()) j["note"] = note;
    j["strict_flags"] = strict_flags;
    auto& ineqs = j["inequalities"] = nlohmann::ordered_json::array();
    for (const auto& q : inequalities) {
        nlohmann::ordered_json e;
        e["label"] = q.label;
        e["lhs"] = q.lhs;
        e["rhs"] = q.rhs;
        e["slack"] = q.slack;
        e["holds"] = q.holds;
        e["strict"] = q.strict;
        e["identity"] = q.identity;
        ineqs.push_back(std::move(e));
    }
    return j;
}

void VerificationReport::merge(const VerificationReport& other) {
    instances_checked += other.instances_checked;
    pass = pass && other.pass;
    precondition_violation =
        precondition_violation || other.precondition_violation;
    inequalities.insert(inequalities.end(), other.inequalities.begin(),
                        other.inequalities.end());
    strict_flags.insert(strict_flags.end(), other.strict_flags.begin(),
                        other.strict_flags.end());
    if (!other.note.empty())
        note += note.empty() ? other.note : "; " + other.note;
}

namespace {

bool hint_on_all_correct_paths(const QueryInstance& instance,
                               const AnalysisHint& hint) {
    for (const auto& path : instance.correct_paths) {
        ReasoningPath rp{path};
        if (!rp.contains_all(hint.indices)) return false;
    }
    return true;
}

VerificationReport precondition_report(std::string claim_id,
                                       std::string reason) {
    VerificationReport report;
    report.claim_id = std::move(claim_id);
    report.precondition_violation = true;
    report.note = std::move(reason);
    return report;
}

// Records lhs >= rhs with exact comparison.
void record(VerificationReport& report, std::string label,
            const Rational& lhs, const Rational& rhs, bool identity = false) {
    Inequality q;
    q.label = std::move(label);
    q.lhs = pgm::to_double(lhs);
    q.rhs = pgm::to_double(rhs);
    q.slack = pgm::to_double(lhs - rhs);
    q.identity = identity;
    q.holds = identity ? lhs == rhs : lhs >= rhs;
    q.strict = !identity && lhs > rhs;
    report.inequalities.push_back(q);
    report.pass = report.pass && q.holds;
}

Rational prefix_mass(const PathDistribution& dist, const AnalysisHint& hint) {
    Rational mass(0);
    for (const auto& [path, p] : dist.entries) {
        if (path.contains_all(hint.indices)) mass += p;
    }
    return mass;
}

}  // namespace

VerificationReport check_reach_chain(const QueryInstance& instance,
                                const AnalysisHint& hint,
                                const ExplorationPolicy& policy) {
    if (!hint_on_all_correct_paths(instance, hint))
        return precondition_report("reach", "hint not on the correct path");

    VerificationReport report;
    report.claim_id = "reach";
    report.instances_checked = 1;

    auto dist = pgm::enumerate_paths(instance, policy);
    Rational base = pgm::reach_probability(dist, instance.target);
    Rational prev = base;
    for (std::size_t i = 1; i <= hint.indices.size(); ++i) {
        auto prefix = hint.prefix(i);
        auto cond = pgm::condition_on_hint(dist, prefix);
        Rational reach = pgm::reach_probability(cond, instance.target);
        record(report, "reach[prefix " + std::to_string(i) +
                           "] >= reach[prefix " + std::to_string(i - 1) + "]",
               reach, prev);
        report.strict_flags.push_back(prefix_mass(dist, prefix) < 1);
        prev = reach;
    }
    record(report, "reach[full hint] >= reach[unconditioned]", prev, base);

    // Equality holds iff the full hint is visited almost surely; otherwise
    // the improvement must be strict.
    if (prefix_mass(dist, hint) < 1 && !(prev > base)) {
        report.pass = false;
        report.note = "expected strict improvement but found equality";
    }
    return report;
}

VerificationReport check_error_chain(const QueryInstance& instance,
                                  const AnalysisHint& hint,
                                  const ExplorationPolicy& policy,
                                  ErrorKind kind) {
    std::string claim = kind == ErrorKind::ZeroOne ? "error-zeroone"
                                                   : "error-prob";
    if (!hint_on_all_correct_paths(instance, hint))
        return precondition_report(claim, "hint not on the correct path");

    VerificationReport report;
    report.claim_id = claim;
    report.instances_checked = 1;

    auto dist = pgm::enumerate_paths(instance, policy);
    Rational base = pgm::expected_error(dist, kind, instance);
    Rational prev = base;
    for (std::size_t i = 1; i <= hint.indices.size(); ++i) {
        auto prefix = hint.prefix(i);
        auto cond = pgm::condition_on_hint(dist, prefix);
        Rational err = pgm::expected_error(cond, kind, instance);
        record(report, "error[prefix " + std::to_string(i - 1) +
                           "] >= error[prefix " + std::to_string(i) + "]",
               prev, err);
        report.strict_flags.push_back(prefix_mass(dist, prefix) < 1);
        prev = err;
    }
    record(report, "error[unconditioned] >= error[full hint]", base, prev);

    // Strictness holds whenever the hint is not almost-sure and the hint-free
    // paths carry positive error.
    if (prefix_mass(dist, hint) < 1) {
        PathDistribution rest;
        for (const auto& [path, p] : dist.entries) {
            if (!path.contains_all(hint.indices))
                rest.entries.emplace_back(path, p);
        }
        Rational rest_mass = rest.total();
        if (rest_mass > 0) {
            for (auto& [path, p] : rest.entries) p /= rest_mass;
            Rational rest_err = pgm::expected_error(rest, kind, instance);
            if (rest_err > 0 && !(base > prev)) {
                report.pass = false;
                report.note = "expected strict error reduction";
            }
        }
    }
    return report;
}

VerificationReport check_decomposition(const QueryInstance& instance,
                                       const ReasoningPath& path) {
    VerificationReport report;
    report.claim_id = "decomposition";
    report.instances_checked = 1;

    Rational err = pgm::error_prob(instance, path);
    auto dec = pgm::decompose_error_prob(instance, path);
    record(report, "bias + variance == error_prob", dec.bias + dec.variance,
           err, /*identity=*/true);
    record(report, "error_prob >= 0", err, Rational(0));
    for (const auto& correct : instance.correct_paths) {
        record(report, "error_prob[correct path] == 0",
               pgm::error_prob(instance, ReasoningPath{correct}), Rational(0),
               /*identity=*/true);
    }
    return report;
}

VerificationReport check_mixed_error(const QueryInstance& instance,
                                 const AnalysisHint& hint,
                                 const std::vector<double>& reach_grid,
                                 const ExplorationPolicy& policy,
                                 ErrorKind kind) {
    auto dist = pgm::enumerate_paths(instance, policy);

    PathDistribution with, without;
    for (const auto& [path, p] : dist.entries) {
        (path.contains_all(hint.indices) ? with : without)
            .entries.emplace_back(path, p);
    }
    if (with.entries.empty() || without.entries.empty())
        return precondition_report("mixed-error",
                                   "degenerate hint split (one side empty)");

    auto normalize = [](PathDistribution& d) {
        Rational mass = d.total();
        for (auto& [path, p] : d.entries) p /= mass;
    };
    normalize(with);
    normalize(without);

    VerificationReport report;
    report.claim_id = "mixed-error";
    report.instances_checked = 1;

    Rational e_with = pgm::expected_error(with, kind, instance);
    Rational e_without = pgm::expected_error(without, kind, instance);
    record(report, "error[no hint] >= error[hint]", e_without, e_with);

    auto total_at = [&](const Rational& p) {
        return p * e_with + (Rational(1) - p) * e_without;
    };

    std::vector<Rational> ps;
    for (double g : reach_grid)
        ps.emplace_back(static_cast<long long>(std::llround(g * 10000)), 10000);
    std::sort(ps.begin(), ps.end());

    for (std::size_t i = 1; i < ps.size(); ++i) {
        record(report, "total nonincreasing in reach probability",
               total_at(ps[i - 1]), total_at(ps[i]));
    }
    // Affine in p: second differences vanish on an equally-informative check,
    // verified via the defining linear form at three points.
    if (ps.size() >= 3) {
        Rational d1 = (total_at(ps[1]) - total_at(ps[0])) / (ps[1] - ps[0]);
        Rational d2 = (total_at(ps[2]) - total_at(ps[1])) / (ps[2] - ps[1]);
        record(report, "total affine in reach probability", d1, d2,
               /*identity=*/true);
    }
    record(report, "total(1) == error[hint]", total_at(Rational(1)), e_with,
           /*identity=*/true);
    record(report, "total(0) == error[no hint]", total_at(Rational(0)),
           e_without, /*identity=*/true);
    return report;
}

VerificationReport check_multipath(const QueryInstance& instance,
                                   const AnalysisHint& shared_hint,
                                   const ExplorationPolicy& policy) {
    if (instance.correct_paths.size() < 2)
        return precondition_report("multipath",
                                   "instance has a single correct path");
    if (!hint_on_all_correct_paths(instance, shared_hint))
        return precondition_report("multipath",
                                   "hint missing from some correct path");

    VerificationReport report;
    report.claim_id = "multipath";
    report.instances_checked = 1;

    auto reach = check_reach_chain(instance, shared_hint, policy);
    auto zeroone =
        check_error_chain(instance, shared_hint, policy, ErrorKind::ZeroOne);
    auto prob = check_error_chain(instance, shared_hint, policy, ErrorKind::Prob);
    reach.instances_checked = zeroone.instances_checked =
        prob.instances_checked = 0;
    report.merge(reach);
    report.merge(zeroone);
    report.merge(prob);
    return report;
}

}  // namespace sara::theory
