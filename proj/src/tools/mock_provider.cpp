#include "valor/tools/mock_provider.hpp"

#include <algorithm>

#include "valor/util/text.hpp"

namespace valor::tools {

static bool label_matches(const std::string& label, const std::vector<std::string>& nouns) {
    const std::string l = util::to_lower(label);
    for (const auto& noun : nouns) {
        const std::string n = util::to_lower(noun);
        if (l.find(n) != std::string::npos || n.find(l) != std::string::npos) return true;
    }
    return false;
}

std::vector<Detection> MockToolProvider::detect(const ImageHandle& image,
                                                const std::string& prompt,
                                                double box_threshold, double) {
    const auto nouns = util::split_nouns(prompt);
    if (nouns.empty()) throw EmptyPrompt();
    const MockFixture* fx = fixture_for(image.id());
    std::vector<Detection> out;
    if (fx == nullptr) return out;
    for (const auto& det : fx->detections) {
        if (det.score < box_threshold) continue;
        if (!label_matches(det.label, nouns)) continue;
        if (!image.contains(det.bbox)) continue;
        out.push_back(det);
    }
    return out;
}

double MockToolProvider::depth_at(const ImageHandle& image, const BBox& box) {
    geometry::require_valid(box);
    if (!image.contains(box)) {
        throw OutOfBounds("depth bbox exceeds image bounds");
    }
    const MockFixture* fx = fixture_for(image.id());
    if (fx == nullptr) return 1.0;
    const auto c = geometry::center(box);
    for (const auto& [region, depth] : fx->depth_regions) {
        if (c.x >= region.x1 && c.x < region.x2 && c.y >= region.y1 && c.y < region.y2) {
            return depth;
        }
    }
    return fx->default_depth;
}

std::string MockToolProvider::vqa(const ImageHandle& image, const std::optional<BBox>& box,
                                  const std::string& question) {
    if (box) {
        geometry::require_valid(*box);
        if (!image.contains(*box)) {
            throw OutOfBounds("vqa bbox exceeds image bounds");
        }
    }
    const MockFixture* fx = fixture_for(image.id());
    if (fx == nullptr) return "yes";
    const auto it = fx->vqa_answers.find(question);
    return it == fx->vqa_answers.end() ? fx->default_vqa : it->second;
}

}  // namespace valor::tools
