#include "sara/theory/suite.hpp"

#include <algorithm>
#include <limits>

namespace sara::theory {

using pgm::ErrorKind;
using pgm::ExplorationPolicy;

nlohmann::ordered_json SuiteResult::summary() const {
    nlohmann::ordered_json j;
    j["pass"] = pass;
    j["instances_checked"] = instances_checked;
    j["instances_skipped"] = instances_skipped;
    auto& claims = j["claims"] = nlohmann::ordered_json::array();
    for (const auto& report : reports) {
        nlohmann::ordered_json c;
        c["claim_id"] = report.claim_id;
        c["pass"] = report.pass;
        c["instances_checked"] = report.instances_checked;
        c["inequalities"] = report.inequalities.size();
        double min_slack = std::numeric_limits<double>::infinity();
        for (const auto& q : report.inequalities)
            min_slack = std::min(min_slack, q.identity ? -std::abs(q.slack)
                                                       : q.slack);
        if (report.inequalities.empty())
            c["min_slack"] = nullptr;
        else
            c["min_slack"] = min_slack;
        claims.push_back(std::move(c));
    }
    return j;
}

SuiteResult run_suite(const SuiteConfig& config) {
    if (config.count < 1)
        throw std::invalid_argument("suite: count must be >= 1");
    for (const auto& claim : config.claims) {
        if (std::find(kAllClaims.begin(), kAllClaims.end(), claim) ==
            kAllClaims.end())
            throw std::invalid_argument("suite: unknown claim '" + claim + "'");
    }

    SuiteResult result;
    result.pass = true;

    auto wants = [&](const std::string& claim) {
        return std::find(config.claims.begin(), config.claims.end(), claim) !=
               config.claims.end();
    };

    // One aggregate report per claim; instances contribute in index order so
    // the output is deterministic for a given seed.
    std::vector<VerificationReport> reports;
    for (const auto& claim : config.claims) {
        VerificationReport r;
        r.claim_id = claim;
        r.seed = config.generator.seed;
        r.tolerance = config.tolerance;
        reports.push_back(std::move(r));
    }
    auto report_for = [&](const std::string& claim) -> VerificationReport& {
        for (auto& r : reports)
            if (r.claim_id == claim) return r;
        throw std::logic_error("missing claim report");
    };

    auto absorb = [&](VerificationReport& agg,
                      const VerificationReport& one) {
        if (one.precondition_violation) {
            ++result.instances_skipped;
            return;
        }
        agg.merge(one);
    };

    bool needs_single = wants("reach") || wants("error-zeroone") ||
                        wants("error-prob") || wants("decomposition") ||
                        wants("mixed-error");
    if (needs_single) {
        InstanceGenerator gen(config.generator);
        ExplorationPolicy policy;
        const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
        for (int i = 0; i < config.count; ++i) {
            GeneratedCase item;
            try {
                item = gen.next();
            } catch (const GeneratorRejection&) {
                ++result.instances_skipped;
                continue;
            }
            ++result.instances_checked;
            if (wants("reach"))
                absorb(report_for("reach"),
                       check_reach_chain(item.instance, item.hint, policy));
            if (wants("error-zeroone"))
                absorb(report_for("error-zeroone"),
                       check_error_chain(item.instance, item.hint, policy,
                                      ErrorKind::ZeroOne));
            if (wants("error-prob"))
                absorb(report_for("error-prob"),
                       check_error_chain(item.instance, item.hint, policy,
                                      ErrorKind::Prob));
            if (wants("decomposition")) {
                auto dist = pgm::enumerate_paths(item.instance, policy);
                for (const auto& [path, p] : dist.entries) {
                    auto one = check_decomposition(item.instance, path);
                    one.instances_checked = 0;
                    absorb(report_for("decomposition"), one);
                }
                report_for("decomposition").instances_checked += 1;
            }
            if (wants("mixed-error")) {
                absorb(report_for("mixed-error"),
                       check_mixed_error(item.instance, item.hint, grid, policy,
                                     ErrorKind::ZeroOne));
                auto prob = check_mixed_error(item.instance, item.hint, grid,
                                          policy, ErrorKind::Prob);
                prob.instances_checked = 0;
                absorb(report_for("mixed-error"), prob);
            }
        }
    }

    if (wants("multipath")) {
        GeneratorConfig diamond = config.generator;
        diamond.shape = Shape::DiamondMultipath;
        InstanceGenerator gen(diamond);
        ExplorationPolicy policy;
        for (int i = 0; i < config.count; ++i) {
            GeneratedCase item;
            try {
                item = gen.next();
            } catch (const GeneratorRejection&) {
                ++result.instances_skipped;
                continue;
            }
            absorb(report_for("multipath"),
                   check_multipath(item.instance, item.hint, policy));
        }
    }

    for (auto& r : reports) result.pass = result.pass && r.pass;
    result.reports = std::move(reports);
    return result;
}

}  // namespace sara::theory
