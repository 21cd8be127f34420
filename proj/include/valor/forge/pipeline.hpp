#pragma once

#include <map>
#include <string>
#include <vector>

#include "valor/forge/verdict.hpp"
#include "valor/reward/prompt_store.hpp"
#include "valor/tools/chat_client.hpp"
#include "valor/tools/provider.hpp"

namespace valor::forge {

// Detection thresholds for the over-prediction pass (recall over precision).
struct ForgeThresholds {
    double box = 0.2;
    double text = 0.2;
};

struct PseudoLabel {
    std::string image_id;
    tools::Detection detection;
    std::string source_tag;
    std::vector<std::string> stage_history;  // prefix of overpredict/coarse/crop/dedup
};

// Over-prediction pass: detect at lowered thresholds.
std::vector<tools::Detection> overpredict(const tools::ImageHandle& image,
                                          const std::string& prompt,
                                          tools::ToolProvider& provider,
                                          ForgeThresholds thresholds = {});

struct StageOutcome {
    std::vector<tools::Detection> survivors;
    std::vector<std::string> flags;
};

// Listing-based first pass: overlay + numbered listing to the VLM, apply the
// keep/drop partition. An invalid partition re-asks once, then keeps all.
StageOutcome coarse_filter(const tools::ImageHandle& image,
                           const std::vector<tools::Detection>& detections,
                           tools::ChatClient& vlm, const reward::PromptStore& prompts,
                           const std::string& model = "");

// Strict per-box pass: crop, upscale, ask; an unusable reply re-asks once and
// then drops the box.
StageOutcome per_crop_verify(const tools::ImageHandle& image,
                             const std::vector<tools::Detection>& detections,
                             tools::ChatClient& vlm, const reward::PromptStore& prompts,
                             const std::string& model = "");

// Final listing pass focused on duplicates, then the deterministic geometric
// net keeps one box per residual same-label group.
StageOutcome deduplicate(const tools::ImageHandle& image,
                         const std::vector<tools::Detection>& detections,
                         tools::ChatClient& vlm, const reward::PromptStore& prompts,
                         const std::string& model = "");

// Transitive same-label groups under IoU >= iou_threshold or min-area
// containment >= containment_threshold. Only groups of two or more are
// returned; each is sorted by index.
std::vector<std::vector<int>> geometric_duplicates(const std::vector<tools::Detection>& detections,
                                                   double iou_threshold = 0.9,
                                                   double containment_threshold = 0.9);

// Index (0-based) of the box to keep inside one duplicate group: largest
// area, ties to the earlier index.
int keeper_index(const std::vector<tools::Detection>& detections, const std::vector<int>& group);

struct PrecisionCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

struct EmptyCounts : std::invalid_argument {
    EmptyCounts() : std::invalid_argument("precision needs tp+fp+fn > 0") {}
};

// P = TP / (TP + FP + FN)
double precision(const PrecisionCounts& counts);

struct ForgeTask {
    std::string image_id;
    std::string source_tag;
    std::string code;  // reasoning program whose grounding calls seed detection
};

struct ForgeItemReport {
    std::string image_id;
    std::map<std::string, int> stage_counts;  // overpredict/coarse/crop/dedup
    std::vector<std::string> flags;
    int dynamic_prompts = 0;
};

struct ForgeResult {
    std::vector<PseudoLabel> labels;
    std::vector<ForgeItemReport> reports;
};

// Full per-image pipeline: parse grounding calls from the program, then
// overpredict -> coarse_filter -> per_crop_verify -> deduplicate. Failures
// are isolated per image and logged, never thrown.
ForgeResult run_pipeline(const std::vector<ForgeTask>& tasks, tools::ToolProvider& provider,
                         tools::ImageResolver& resolver, tools::ChatClient& vlm,
                         const reward::PromptStore& prompts, ForgeThresholds thresholds = {},
                         const std::string& model = "");

}  // namespace valor::forge
