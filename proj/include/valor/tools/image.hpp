#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "valor/geometry.hpp"

namespace valor::tools {

// Opaque raster reference: identity + pixels. Copies share pixel storage.
class ImageHandle {
  public:
    ImageHandle() = default;

    static ImageHandle from_file(const std::string& path);
    // Deterministic synthetic image; the id seeds a pixel pattern.
    static ImageHandle synthetic(const std::string& id, int width, int height);
    static ImageHandle from_rgb(const std::string& id, int width, int height,
                                std::vector<std::uint8_t> rgb);

    const std::string& id() const { return id_; }
    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ <= 0 || height_ <= 0; }

    // Row-major RGB8, 3 bytes per pixel.
    const std::vector<std::uint8_t>& rgb() const { return *rgb_; }

    // Stable digest of the pixel content; cassette keys hang off this.
    const std::string& content_digest() const;

    // PNG bytes for wire transport. Original file bytes when the handle was
    // loaded from disk, re-encoded pixels otherwise.
    std::vector<std::uint8_t> encoded_png() const;

    bool contains(const BBox& box) const {
        return box.valid() && box.x2 <= static_cast<double>(width_) &&
               box.y2 <= static_cast<double>(height_);
    }

  private:
    std::string id_;
    int width_ = 0;
    int height_ = 0;
    std::shared_ptr<std::vector<std::uint8_t>> rgb_;
    std::shared_ptr<std::vector<std::uint8_t>> file_bytes_;  // may be null
    mutable std::shared_ptr<std::string> digest_;
};

struct OutOfBounds : std::runtime_error {
    explicit OutOfBounds(const std::string& msg) : std::runtime_error(msg) {}
};

// Crop to `box` and, when the crop's longest side is below the target,
// upscale so the longest side lands on target_long_side with the aspect
// ratio preserved. Crops already at or above the target pass through.
ImageHandle crop_and_upscale(const ImageHandle& image, const BBox& box,
                             int target_long_side = 640);

}  // namespace valor::tools
