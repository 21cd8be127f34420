#pragma once

#include "valor/tools/provider.hpp"

namespace valor::tools {

// Copy of `image` with every detection drawn as a rectangle plus its 1-based
// index and label anchored inside the box top-left. Input is untouched.
ImageHandle render_overlay(const ImageHandle& image, const std::vector<Detection>& detections);

// The "(index, label, [x1,y1,x2,y2])" listing the filter prompts reference.
std::string detection_listing(const std::vector<Detection>& detections);

}  // namespace valor::tools
