#pragma once

#include <utility>
#include <vector>

#include "valor/grpo/math.hpp"
#include "valor/tools/provider.hpp"

namespace valor::parallel {

// Batch kernels behind the numeric pipelines. Each has an OpenMP inner loop
// and a serial twin under serial:: kept as the reference implementation;
// tests pin them against each other and the bench target times both.

std::vector<std::vector<double>> batch_advantages(
    const std::vector<std::vector<double>>& reward_groups);

std::vector<double> batch_group_loss(const std::vector<grpo::GrpoGroup>& groups,
                                     const std::vector<std::vector<grpo::SequenceLogProbs>>& lps,
                                     const grpo::GrpoConfig& cfg);

std::vector<double> batch_mra(const std::vector<double>& preds,
                              const std::vector<double>& golds);

// Same-label box pairs with IoU >= iou_threshold or min-area containment >=
// containment_threshold; the forge's duplicate grouping unions these edges.
std::vector<std::pair<int, int>> duplicate_edges(const std::vector<tools::Detection>& detections,
                                                 double iou_threshold,
                                                 double containment_threshold);

namespace serial {

std::vector<std::vector<double>> batch_advantages(
    const std::vector<std::vector<double>>& reward_groups);

std::vector<double> batch_group_loss(const std::vector<grpo::GrpoGroup>& groups,
                                     const std::vector<std::vector<grpo::SequenceLogProbs>>& lps,
                                     const grpo::GrpoConfig& cfg);

std::vector<double> batch_mra(const std::vector<double>& preds,
                              const std::vector<double>& golds);

std::vector<std::pair<int, int>> duplicate_edges(const std::vector<tools::Detection>& detections,
                                                 double iou_threshold,
                                                 double containment_threshold);

}  // namespace serial
}  // namespace valor::parallel
