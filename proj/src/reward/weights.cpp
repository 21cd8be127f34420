#include "valor/reward/weights.hpp"

#include <cmath>
#include <string>

namespace valor::reward {

void RewardWeights::validate() const {
    const double values[] = {sn, log, att, sp, ad};
    double total = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InvalidWeights("reward weights must be nonnegative finite values");
        }
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw InvalidWeights("reward weights must sum to 1.0, got " + std::to_string(total));
    }
}

static void require_bit(int b, const char* name) {
    if (b != 0 && b != 1) {
        throw InvalidWeights(std::string("reward head ") + name + " must be 0 or 1");
    }
}

double aggregate_reward(const RewardBits& bits, const RewardWeights& weights) {
    weights.validate();
    require_bit(bits.fmt, "fmt");
    require_bit(bits.sn, "sn");
    require_bit(bits.log, "log");
    require_bit(bits.att, "att");
    require_bit(bits.sp, "sp");
    require_bit(bits.ad, "ad");
    return bits.fmt * (weights.sn * bits.sn + weights.log * bits.log + weights.att * bits.att +
                       weights.sp * bits.sp + weights.ad * bits.ad);
}

}  // namespace valor::reward
