#pragma once

#include <stdexcept>

namespace valor::reward {

struct InvalidWeights : std::invalid_argument {
    explicit InvalidWeights(const std::string& msg) : std::invalid_argument(msg) {}
};

// Head weights of the scalar reward. The format head carries no weight: it
// multiplies the whole sum.
struct RewardWeights {
    double sn = 0.1;
    double log = 0.3;
    double att = 0.2;
    double sp = 0.2;
    double ad = 0.2;

    // Nonnegative and summing to 1 within 1e-12.
    void validate() const;

    static RewardWeights defaults() { return {}; }
};

struct RewardBits {
    int fmt = 0;
    int sn = 0;
    int log = 0;
    int att = 0;
    int sp = 0;
    int ad = 0;
};

// R = fmt * (sn*w_sn + log*w_log + att*w_att + sp*w_sp + ad*w_ad)
double aggregate_reward(const RewardBits& bits, const RewardWeights& weights);

}  // namespace valor::reward
