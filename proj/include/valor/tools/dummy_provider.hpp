#pragma once

#include "valor/tools/provider.hpp"

namespace valor::tools {

// Stand-in tools for dry runs. Detection answers every prompt with two
// synthetic boxes whose labels echo the prompt's comma-separated nouns, so
// label-matching loops see both branches; depth is 1.0; VQA says "yes".
class DummyToolProvider : public ToolProvider {
  public:
    std::vector<Detection> detect(const ImageHandle& image, const std::string& prompt,
                                  double box_threshold, double text_threshold) override;
    double depth_at(const ImageHandle& image, const BBox& box) override;
    std::string vqa(const ImageHandle& image, const std::optional<BBox>& box,
                    const std::string& question) override;
    bool deterministic() const override { return true; }
};

}  // namespace valor::tools
