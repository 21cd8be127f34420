#include "valor/parallel/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "valor/evalharness/metrics.hpp"
#include "valor/util/text.hpp"

namespace valor::parallel {

std::vector<std::vector<double>> batch_advantages(
    const std::vector<std::vector<double>>& reward_groups) {
    std::vector<std::vector<double>> out(reward_groups.size());
    const long n = static_cast<long>(reward_groups.size());
    #pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out[i] = grpo::group_advantages(reward_groups[i]);
    }
    return out;
}

std::vector<double> batch_group_loss(const std::vector<grpo::GrpoGroup>& groups,
                                     const std::vector<std::vector<grpo::SequenceLogProbs>>& lps,
                                     const grpo::GrpoConfig& cfg) {
    if (groups.size() != lps.size()) {
        throw grpo::SizeMismatch("group and log-prob batch sizes differ");
    }
    std::vector<double> out(groups.size());
    const long n = static_cast<long>(groups.size());
    #pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out[i] = grpo::grpo_group_loss(groups[i], lps[i], cfg);
    }
    return out;
}

std::vector<double> batch_mra(const std::vector<double>& preds,
                              const std::vector<double>& golds) {
    if (preds.size() != golds.size()) {
        throw std::invalid_argument("batch_mra needs matching prediction/gold sizes");
    }
    std::vector<double> out(preds.size());
    const long n = static_cast<long>(preds.size());
    #pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out[i] = evalharness::mra(preds[i], golds[i]);
    }
    return out;
}

static bool duplicate_pair(const tools::Detection& a, const tools::Detection& b,
                           double iou_threshold, double containment_threshold) {
    if (util::to_lower(a.label) != util::to_lower(b.label)) return false;
    if (geometry::iou(a.bbox, b.bbox) >= iou_threshold) return true;
    const double inter_over_min =
        std::max(geometry::containment(a.bbox, b.bbox), geometry::containment(b.bbox, a.bbox));
    return inter_over_min >= containment_threshold;
}

std::vector<std::pair<int, int>> duplicate_edges(const std::vector<tools::Detection>& detections,
                                                 double iou_threshold,
                                                 double containment_threshold) {
    const long n = static_cast<long>(detections.size());
    std::vector<std::vector<std::pair<int, int>>> per_row(detections.size());
    #pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        for (long j = i + 1; j < n; ++j) {
            if (duplicate_pair(detections[i], detections[j], iou_threshold,
                               containment_threshold)) {
                per_row[i].push_back({static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& row : per_row) {
        edges.insert(edges.end(), row.begin(), row.end());
    }
    return edges;
}

namespace serial {

std::vector<std::vector<double>> batch_advantages(
    const std::vector<std::vector<double>>& reward_groups) {
    std::vector<std::vector<double>> out(reward_groups.size());
    for (std::size_t i = 0; i < reward_groups.size(); ++i) {
        out[i] = grpo::group_advantages(reward_groups[i]);
    }
    return out;
}

std::vector<double> batch_group_loss(const std::vector<grpo::GrpoGroup>& groups,
                                     const std::vector<std::vector<grpo::SequenceLogProbs>>& lps,
                                     const grpo::GrpoConfig& cfg) {
    if (groups.size() != lps.size()) {
        throw grpo::SizeMismatch("group and log-prob batch sizes differ");
    }
    std::vector<double> out(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        out[i] = grpo::grpo_group_loss(groups[i], lps[i], cfg);
    }
    return out;
}

std::vector<double> batch_mra(const std::vector<double>& preds,
                              const std::vector<double>& golds) {
    if (preds.size() != golds.size()) {
        throw std::invalid_argument("batch_mra needs matching prediction/gold sizes");
    }
    std::vector<double> out(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        out[i] = evalharness::mra(preds[i], golds[i]);
    }
    return out;
}

std::vector<std::pair<int, int>> duplicate_edges(const std::vector<tools::Detection>& detections,
                                                 double iou_threshold,
                                                 double containment_threshold) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        for (std::size_t j = i + 1; j < detections.size(); ++j) {
            if (duplicate_pair(detections[i], detections[j], iou_threshold,
                               containment_threshold)) {
                edges.push_back({static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    return edges;
}

}  // namespace serial
}  // namespace valor::parallel
