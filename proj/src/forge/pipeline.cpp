#include "valor/forge/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>

#include "valor/parallel/kernels.hpp"
#include "valor/runtime/grounding.hpp"
#include "valor/toolprog/ast.hpp"
#include "valor/tools/overlay.hpp"

namespace valor::forge {

std::vector<tools::Detection> overpredict(const tools::ImageHandle& image,
                                          const std::string& prompt,
                                          tools::ToolProvider& provider,
                                          ForgeThresholds thresholds) {
    return provider.detect(image, prompt, thresholds.box, thresholds.text);
}

namespace {

// Ask a listing-based pass; nullopt after one re-ask means unusable.
std::optional<KeepDropVerdict> ask_keep_drop(const tools::ImageHandle& image,
                                             const std::vector<tools::Detection>& detections,
                                             tools::ChatClient& vlm,
                                             const reward::PromptStore& prompts,
                                             const std::string& template_name,
                                             const std::string& model, int n) {
    const std::string prompt = prompts.fill(
        template_name, {{"detections", tools::detection_listing(detections)}});
    tools::ChatRequest request;
    request.model = model;
    tools::ChatMessage msg;
    msg.role = "user";
    msg.parts.push_back(tools::ChatPart::from_text(prompt));
    msg.parts.push_back(tools::ChatPart::from_image(image));
    msg.parts.push_back(tools::ChatPart::from_image(tools::render_overlay(image, detections)));
    request.messages.push_back(std::move(msg));

    for (int ask = 0; ask < 2; ++ask) {
        std::string reply;
        try {
            reply = vlm.complete(request);
        } catch (const std::exception&) {
            continue;
        }
        const auto verdict = parse_keep_drop(reply);
        if (!verdict) continue;
        try {
            validate_partition(*verdict, n);
            return verdict;
        } catch (const VerdictInvalid&) {
            continue;
        }
    }
    return std::nullopt;
}

StageOutcome listing_stage(const tools::ImageHandle& image,
                           const std::vector<tools::Detection>& detections,
                           tools::ChatClient& vlm, const reward::PromptStore& prompts,
                           const std::string& template_name, const std::string& model) {
    StageOutcome out;
    if (detections.empty()) return out;
    const auto verdict = ask_keep_drop(image, detections, vlm, prompts, template_name, model,
                                       static_cast<int>(detections.size()));
    if (!verdict) {
        // listing malfunctions keep everything rather than wipe the image
        out.survivors = detections;
        out.flags.push_back(template_name + ":verdict_invalid_keep_all");
        return out;
    }
    std::vector<int> keep = verdict->keep_indices;
    std::sort(keep.begin(), keep.end());
    for (int index : keep) {
        out.survivors.push_back(detections[static_cast<std::size_t>(index - 1)]);
    }
    return out;
}

}  // namespace

StageOutcome coarse_filter(const tools::ImageHandle& image,
                           const std::vector<tools::Detection>& detections,
                           tools::ChatClient& vlm, const reward::PromptStore& prompts,
                           const std::string& model) {
    return listing_stage(image, detections, vlm, prompts, "coarse_filter", model);
}

StageOutcome per_crop_verify(const tools::ImageHandle& image,
                             const std::vector<tools::Detection>& detections,
                             tools::ChatClient& vlm, const reward::PromptStore& prompts,
                             const std::string& model) {
    StageOutcome out;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const auto& det = detections[i];
        const auto crop = tools::crop_and_upscale(image, det.bbox);
        const std::string prompt = prompts.fill("per_crop", {{"label", det.label}});
        tools::ChatRequest request;
        request.model = model;
        tools::ChatMessage msg;
        msg.role = "user";
        msg.parts.push_back(tools::ChatPart::from_text(prompt));
        msg.parts.push_back(tools::ChatPart::from_image(crop));
        request.messages.push_back(std::move(msg));

        std::optional<bool> keep;
        for (int ask = 0; ask < 2 && !keep; ++ask) {
            try {
                keep = parse_keep_flag(vlm.complete(request));
            } catch (const std::exception&) {
            }
        }
        if (!keep) {
            // this stage exists to prune: an unusable reply drops the box
            out.flags.push_back("per_crop:unparseable_drop:" + std::to_string(i + 1));
            continue;
        }
        if (*keep) out.survivors.push_back(det);
    }
    return out;
}

std::vector<std::vector<int>> geometric_duplicates(const std::vector<tools::Detection>& detections,
                                                   double iou_threshold,
                                                   double containment_threshold) {
    const auto edges =
        parallel::duplicate_edges(detections, iou_threshold, containment_threshold);
    std::vector<int> parent(detections.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [a, b] : edges) {
        parent[find(a)] = find(b);
    }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(detections.size()); ++i) {
        groups[find(i)].push_back(i);
    }
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

int keeper_index(const std::vector<tools::Detection>& detections, const std::vector<int>& group) {
    int best = group.front();
    double best_area = geometry::area(detections[static_cast<std::size_t>(best)].bbox);
    for (int candidate : group) {
        const double a = geometry::area(detections[static_cast<std::size_t>(candidate)].bbox);
        if (a > best_area) {
            best = candidate;
            best_area = a;
        }
    }
    return best;
}

StageOutcome deduplicate(const tools::ImageHandle& image,
                         const std::vector<tools::Detection>& detections,
                         tools::ChatClient& vlm, const reward::PromptStore& prompts,
                         const std::string& model) {
    StageOutcome out = listing_stage(image, detections, vlm, prompts, "dedup_filter", model);

    // deterministic net under the VLM pass
    const auto groups = geometric_duplicates(out.survivors);
    if (groups.empty()) return out;
    std::vector<bool> drop(out.survivors.size(), false);
    for (const auto& group : groups) {
        const int keep = keeper_index(out.survivors, group);
        for (int member : group) {
            if (member != keep) drop[static_cast<std::size_t>(member)] = true;
        }
        out.flags.push_back("dedup:geometric_merge:" + std::to_string(group.size()) + "->1");
    }
    std::vector<tools::Detection> pruned;
    for (std::size_t i = 0; i < out.survivors.size(); ++i) {
        if (!drop[i]) pruned.push_back(out.survivors[i]);
    }
    out.survivors = std::move(pruned);
    return out;
}

double precision(const PrecisionCounts& counts) {
    const long denom = counts.tp + counts.fp + counts.fn;
    if (denom <= 0) throw EmptyCounts();
    return static_cast<double>(counts.tp) / static_cast<double>(denom);
}

ForgeResult run_pipeline(const std::vector<ForgeTask>& tasks, tools::ToolProvider& provider,
                         tools::ImageResolver& resolver, tools::ChatClient& vlm,
                         const reward::PromptStore& prompts, ForgeThresholds thresholds,
                         const std::string& model) {
    ForgeResult out;
    for (const auto& task : tasks) {
        ForgeItemReport report;
        report.image_id = task.image_id;
        try {
            toolprog::ToolProgram program = toolprog::parse_program(task.code);
            const auto grounding = runtime::collect_grounding_calls(program);
            report.dynamic_prompts = grounding.dynamic_count;

            const auto image = resolver.resolve(task.image_id);
            std::vector<tools::Detection> pool;
            for (const auto& prompt : grounding.prompts) {
                const auto dets = overpredict(image, prompt, provider, thresholds);
                pool.insert(pool.end(), dets.begin(), dets.end());
            }
            report.stage_counts["overpredict"] = static_cast<int>(pool.size());

            if (pool.empty()) {
                report.stage_counts["coarse"] = 0;
                report.stage_counts["crop"] = 0;
                report.stage_counts["dedup"] = 0;
                out.reports.push_back(std::move(report));
                continue;  // zero labels, zero VLM traffic
            }

            auto coarse = coarse_filter(image, pool, vlm, prompts, model);
            report.stage_counts["coarse"] = static_cast<int>(coarse.survivors.size());
            for (auto& f : coarse.flags) report.flags.push_back(std::move(f));

            auto crop = per_crop_verify(image, coarse.survivors, vlm, prompts, model);
            report.stage_counts["crop"] = static_cast<int>(crop.survivors.size());
            for (auto& f : crop.flags) report.flags.push_back(std::move(f));

            auto final_pass = deduplicate(image, crop.survivors, vlm, prompts, model);
            report.stage_counts["dedup"] = static_cast<int>(final_pass.survivors.size());
            for (auto& f : final_pass.flags) report.flags.push_back(std::move(f));

            for (const auto& det : final_pass.survivors) {
                PseudoLabel label;
                label.image_id = task.image_id;
                label.detection = det;
                label.source_tag = task.source_tag;
                label.stage_history = {"overpredict", "coarse", "crop", "dedup"};
                out.labels.push_back(std::move(label));
            }
        } catch (const std::exception& e) {
            report.flags.push_back(std::string("failed:") + e.what());
        }
        out.reports.push_back(std::move(report));
    }
    return out;
}

}  // namespace valor::forge
