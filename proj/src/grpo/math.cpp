#include "valor/grpo/math.hpp"

#include <algorithm>
#include <cmath>

namespace valor::grpo {

void GrpoConfig::validate() const {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    }
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("beta must be nonnegative");
    }
    if (group_size < 2) {
        throw std::invalid_argument("group size must be at least 2");
    }
}

std::vector<double> group_advantages(std::span<const double> rewards) {
    if (rewards.size() < 2) throw GroupTooSmall(rewards.size());
    double mean = 0.0;
    for (double r : rewards) {
        if (!std::isfinite(r)) throw std::invalid_argument("rewards must be finite");
        mean += r;
    }
    mean /= static_cast<double>(rewards.size());
    std::vector<double> out(rewards.size());
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        out[i] = rewards[i] - mean;
    }
    return out;
}

RatioResult importance_ratio(const SequenceLogProbs& lp) {
    double delta = lp.logp_new - lp.logp_old;
    RatioResult out;
    if (std::fabs(delta) > kMaxExpArg) {
        out.overflowed = true;
        delta = std::clamp(delta, -kMaxExpArg, kMaxExpArg);
    }
    out.value = std::exp(delta);
    return out;
}

double clipped_objective(double ratio, double advantage, double epsilon) {
    const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
    return std::min(ratio * advantage, clipped * advantage);
}

KlResult kl_penalty(const SequenceLogProbs& lp) {
    double delta = lp.logp_ref - lp.logp_new;
    KlResult out;
    if (std::fabs(delta) > kMaxExpArg) {
        out.overflowed = true;
        delta = std::clamp(delta, -kMaxExpArg, kMaxExpArg);
    }
    out.value = std::exp(delta) - delta - 1.0;
    return out;
}

double grpo_group_loss(const GrpoGroup& group, std::span<const SequenceLogProbs> lps,
                       const GrpoConfig& cfg) {
    cfg.validate();
    if (lps.size() != group.rewards.size()) {
        throw SizeMismatch("got " + std::to_string(lps.size()) + " log-prob rows for " +
                           std::to_string(group.rewards.size()) + " rewards");
    }
    const std::vector<double> advantages = group_advantages(group.rewards);
    double total = 0.0;
    for (std::size_t i = 0; i < lps.size(); ++i) {
        const double s = importance_ratio(lps[i]).value;
        const double kl = kl_penalty(lps[i]).value;
        total += clipped_objective(s, advantages[i], cfg.epsilon) - cfg.beta * kl;
    }
    return total / static_cast<double>(lps.size());
}

}  // namespace valor::grpo
