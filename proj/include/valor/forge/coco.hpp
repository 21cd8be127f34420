#pragma once

#include <map>
#include <string>
#include <vector>

#include "valor/forge/pipeline.hpp"
#include "valor/tools/provider.hpp"

namespace valor::forge {

struct DanglingReference : std::runtime_error {
    explicit DanglingReference(const std::string& msg) : std::runtime_error(msg) {}
};

struct ImageInfo {
    int width = 640;
    int height = 480;
};

// COCO-style detection dataset: images[], annotations[] with [x, y, w, h]
// boxes, categories[] from the distinct label texts. Per-image source tags
// and per-annotation stage histories ride along so a re-import is lossless.
std::string export_coco(const std::vector<PseudoLabel>& labels,
                        const std::map<std::string, ImageInfo>& image_sizes = {});

void export_coco_file(const std::vector<PseudoLabel>& labels, const std::string& path,
                      const std::map<std::string, ImageInfo>& image_sizes = {});

std::vector<PseudoLabel> import_coco(const std::string& coco_json);
std::vector<PseudoLabel> import_coco_file(const std::string& path);

}  // namespace valor::forge
