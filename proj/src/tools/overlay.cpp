#include "valor/tools/overlay.hpp"

#include <opencv2/imgproc.hpp>

#include <cmath>

#include "valor/util/jsonl.hpp"

namespace valor::tools {

ImageHandle render_overlay(const ImageHandle& image, const std::vector<Detection>& detections) {
    for (const auto& det : detections) {
        geometry::require_valid(det.bbox);
        if (!image.contains(det.bbox)) {
            throw OutOfBounds("overlay bbox exceeds image bounds");
        }
    }
    cv::Mat canvas(image.height(), image.width(), CV_8UC3);
    std::copy(image.rgb().begin(), image.rgb().end(), canvas.data);

    static const cv::Scalar kPalette[] = {
        {230, 60, 60}, {60, 160, 230}, {60, 200, 90},  {240, 180, 40},
        {200, 80, 220}, {40, 210, 200}, {250, 120, 30}, {130, 130, 250},
    };
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const auto& det = detections[i];
        const cv::Scalar color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const cv::Point tl(static_cast<int>(std::lround(det.bbox.x1)),
                           static_cast<int>(std::lround(det.bbox.y1)));
        const cv::Point br(static_cast<int>(std::lround(det.bbox.x2)) - 1,
                           static_cast<int>(std::lround(det.bbox.y2)) - 1);
        cv::rectangle(canvas, tl, br, color, 2);
        const std::string tag = std::to_string(i + 1) + " " + det.label;
        cv::putText(canvas, tag, cv::Point(tl.x + 3, tl.y + 14), cv::FONT_HERSHEY_SIMPLEX,
                    0.45, color, 1, cv::LINE_8);
    }

    std::vector<std::uint8_t> rgb(canvas.data,
                                  canvas.data + static_cast<std::size_t>(canvas.total()) * 3);
    return ImageHandle::from_rgb(image.id() + "#overlay", image.width(), image.height(),
                                 std::move(rgb));
}

std::string detection_listing(const std::vector<Detection>& detections) {
    std::string out;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const auto& det = detections[i];
        out += std::to_string(i + 1) + ", " + det.label + ", [" +
               util::format_double17(det.bbox.x1) + ", " + util::format_double17(det.bbox.y1) +
               ", " + util::format_double17(det.bbox.x2) + ", " +
               util::format_double17(det.bbox.y2) + "]\n";
    }
    return out;
}

}  // namespace valor::tools
