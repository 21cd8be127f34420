#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace valor::grpo {

struct GroupTooSmall : std::invalid_argument {
    explicit GroupTooSmall(std::size_t n)
        : std::invalid_argument("a group needs at least 2 rollouts, got " + std::to_string(n)) {}
};

struct SizeMismatch : std::invalid_argument {
    explicit SizeMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

struct GrpoConfig {
    double epsilon = 0.2;
    double beta = 0.01;
    int group_size = 5;

    void validate() const;
};

// Per-sequence log-probabilities handed over by the external trainer.
struct SequenceLogProbs {
    double logp_new = 0.0;
    double logp_old = 0.0;
    double logp_ref = 0.0;
};

// Exponent arguments beyond this clamp and flag instead of overflowing.
inline constexpr double kMaxExpArg = 700.0;

// A^(i) = R^(i) - mean(R). No variance normalization.
std::vector<double> group_advantages(std::span<const double> rewards);

struct RatioResult {
    double value = 1.0;
    bool overflowed = false;
};

// s = exp(logp_new - logp_old)
RatioResult importance_ratio(const SequenceLogProbs& lp);

// min(s*A, clip(s, 1-eps, 1+eps)*A)
double clipped_objective(double ratio, double advantage, double epsilon);

struct KlResult {
    double value = 0.0;
    bool overflowed = false;
};

// k(d) = exp(d) - d - 1 with d = logp_ref - logp_new; nonnegative, zero iff
// the two log-probs agree.
KlResult kl_penalty(const SequenceLogProbs& lp);

struct GrpoGroup {
    std::string query_id;
    std::vector<double> rewards;
    std::vector<double> advantages;  // derived; group_advantages(rewards)
};

// (1/G) sum_i [ clipped_objective(s_i, A_i, eps) - beta * kl_i ]
double grpo_group_loss(const GrpoGroup& group, std::span<const SequenceLogProbs> lps,
                       const GrpoConfig& cfg);

}  // namespace valor::grpo
