#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "valor/geometry.hpp"
#include "valor/tools/image.hpp"

namespace valor::tools {

struct Detection {
    BBox bbox;
    std::string label;
    double score = 1.0;

    bool valid() const {
        return bbox.valid() && !label.empty() && score >= 0.0 && score <= 1.0;
    }
};

struct ProviderError : std::runtime_error {
    explicit ProviderError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyPrompt : ProviderError {
    EmptyPrompt() : ProviderError("detection prompt is empty") {}
};

// The three-tool vision API. Implementations: mock fixtures, dummy (dry-run),
// HTTP services, and record/replay wrappers around any of them.
class ToolProvider {
  public:
    virtual ~ToolProvider() = default;

    virtual std::vector<Detection> detect(const ImageHandle& image, const std::string& prompt,
                                          double box_threshold, double text_threshold) = 0;
    virtual double depth_at(const ImageHandle& image, const BBox& box) = 0;
    virtual std::string vqa(const ImageHandle& image, const std::optional<BBox>& box,
                            const std::string& question) = 0;

    // Deterministic providers return identical outputs for identical inputs.
    virtual bool deterministic() const = 0;
};

// Maps the img_pth text value a program holds to actual raster content.
class ImageResolver {
  public:
    virtual ~ImageResolver() = default;
    virtual ImageHandle resolve(const std::string& image_ref) = 0;
};

// Resolver for execution paths that never look at pixels (dry runs, pure
// replay): hands back a fixed-size synthetic raster for any reference.
class SyntheticResolver : public ImageResolver {
  public:
    explicit SyntheticResolver(int width = 640, int height = 480)
        : width_(width), height_(height) {}
    ImageHandle resolve(const std::string& image_ref) override {
        return ImageHandle::synthetic(image_ref, width_, height_);
    }

  private:
    int width_;
    int height_;
};

// Loads image files from a base directory, falling back to synthetic rasters
// for unknown references.
class FileResolver : public ImageResolver {
  public:
    explicit FileResolver(std::string base_dir) : base_dir_(std::move(base_dir)) {}
    ImageHandle resolve(const std::string& image_ref) override;

  private:
    std::string base_dir_;
};

}  // namespace valor::tools
