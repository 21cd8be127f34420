#include "valor/tools/dummy_provider.hpp"

#include "valor/util/text.hpp"

namespace valor::tools {

std::vector<Detection> DummyToolProvider::detect(const ImageHandle& image,
                                                 const std::string& prompt,
                                                 double box_threshold, double) {
    auto nouns = util::split_nouns(prompt);
    if (nouns.empty()) throw EmptyPrompt();

    const double w = image.empty() ? 640.0 : image.width();
    const double h = image.empty() ? 480.0 : image.height();

    std::vector<Detection> out;
    for (int i = 0; i < 2; ++i) {
        Detection det;
        det.label = nouns[static_cast<std::size_t>(i) % nouns.size()];
        const double x = 10.0 + 30.0 * i;
        const double y = 20.0 + 40.0 * i;
        det.bbox = {x, y, std::min(w - 1.0, x + 100.0), std::min(h - 1.0, y + 120.0)};
        det.score = 0.9 - 0.1 * i;
        if (det.score >= box_threshold) out.push_back(det);
    }
    return out;
}

double DummyToolProvider::depth_at(const ImageHandle& image, const BBox& box) {
    if (!image.contains(box)) {
        throw OutOfBounds("dummy depth: bbox outside image bounds");
    }
    return 1.0;
}

std::string DummyToolProvider::vqa(const ImageHandle&, const std::optional<BBox>&,
                                   const std::string&) {
    return "yes";
}

}  // namespace valor::tools
