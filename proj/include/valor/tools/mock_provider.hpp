#pragma once

#include <map>

#include "valor/tools/provider.hpp"

namespace valor::tools {

// Authored per-image fixtures for tests and offline runs.
struct MockFixture {
    std::vector<Detection> detections;
    // Depth regions matched by bbox-center containment, first hit wins.
    std::vector<std::pair<BBox, double>> depth_regions;
    double default_depth = 1.0;
    std::map<std::string, std::string> vqa_answers;  // keyed by question text
    std::string default_vqa = "yes";
};

class MockToolProvider : public ToolProvider {
  public:
    void add_fixture(const std::string& image_id, MockFixture fixture) {
        fixtures_[image_id] = std::move(fixture);
    }

    std::vector<Detection> detect(const ImageHandle& image, const std::string& prompt,
                                  double box_threshold, double text_threshold) override;
    double depth_at(const ImageHandle& image, const BBox& box) override;
    std::string vqa(const ImageHandle& image, const std::optional<BBox>& box,
                    const std::string& question) override;
    bool deterministic() const override { return true; }

  private:
    const MockFixture* fixture_for(const std::string& image_id) const {
        const auto it = fixtures_.find(image_id);
        return it == fixtures_.end() ? nullptr : &it->second;
    }

    std::map<std::string, MockFixture> fixtures_;
};

}  // namespace valor::tools
