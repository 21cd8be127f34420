#include "valor/tools/image.hpp"

#include "valor/tools/provider.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>

#include "valor/util/atomic_file.hpp"
#include "valor/util/sha256.hpp"

namespace valor::tools {

ImageHandle ImageHandle::from_file(const std::string& path) {
    const std::string bytes = util::read_file(path);
    const std::vector<std::uint8_t> raw(bytes.begin(), bytes.end());
    cv::Mat decoded = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (decoded.empty()) {
        throw std::runtime_error("cannot decode image " + path);
    }
    cv::Mat rgb_mat;
    cv::cvtColor(decoded, rgb_mat, cv::COLOR_BGR2RGB);

    ImageHandle img;
    img.id_ = path;
    img.width_ = rgb_mat.cols;
    img.height_ = rgb_mat.rows;
    auto pixels = std::make_shared<std::vector<std::uint8_t>>();
    pixels->assign(rgb_mat.data, rgb_mat.data + static_cast<std::size_t>(rgb_mat.total()) * 3);
    img.rgb_ = std::move(pixels);
    img.file_bytes_ = std::make_shared<std::vector<std::uint8_t>>(raw);
    return img;
}

ImageHandle ImageHandle::synthetic(const std::string& id, int width, int height) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
    std::uint32_t h = 2166136261u;
    for (unsigned char c : id) {
        h ^= c;
        h *= 16777619u;
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
            rgb[i] = static_cast<std::uint8_t>((x + h) & 0xFF);
            rgb[i + 1] = static_cast<std::uint8_t>((y + (h >> 8)) & 0xFF);
            rgb[i + 2] = static_cast<std::uint8_t>(((x ^ y) + (h >> 16)) & 0xFF);
        }
    }
    return from_rgb(id, width, height, std::move(rgb));
}

ImageHandle ImageHandle::from_rgb(const std::string& id, int width, int height,
                                  std::vector<std::uint8_t> rgb) {
    if (width < 1 || height < 1 ||
        rgb.size() != static_cast<std::size_t>(width) * height * 3) {
        throw std::invalid_argument("from_rgb: bad dimensions");
    }
    ImageHandle img;
    img.id_ = id;
    img.width_ = width;
    img.height_ = height;
    img.rgb_ = std::make_shared<std::vector<std::uint8_t>>(std::move(rgb));
    return img;
}

const std::string& ImageHandle::content_digest() const {
    if (!digest_) {
        std::string header = std::to_string(width_) + "x" + std::to_string(height_) + ":";
        std::vector<std::uint8_t> buf(header.begin(), header.end());
        if (rgb_) buf.insert(buf.end(), rgb_->begin(), rgb_->end());
        digest_ = std::make_shared<std::string>(util::sha256_hex(buf));
    }
    return *digest_;
}

std::vector<std::uint8_t> ImageHandle::encoded_png() const {
    if (file_bytes_) return *file_bytes_;
    cv::Mat rgb_mat(height_, width_, CV_8UC3, const_cast<std::uint8_t*>(rgb_->data()));
    cv::Mat bgr;
    cv::cvtColor(rgb_mat, bgr, cv::COLOR_RGB2BGR);
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", bgr, out)) {
        throw std::runtime_error("png encode failed");
    }
    return out;
}

ImageHandle crop_and_upscale(const ImageHandle& image, const BBox& box, int target_long_side) {
    geometry::require_valid(box);
    if (!image.contains(box)) {
        throw OutOfBounds("crop bbox exceeds image bounds");
    }
    const int x1 = static_cast<int>(std::floor(box.x1));
    const int y1 = static_cast<int>(std::floor(box.y1));
    const int x2 = std::min(image.width(), static_cast<int>(std::ceil(box.x2)));
    const int y2 = std::min(image.height(), static_cast<int>(std::ceil(box.y2)));
    const int cw = std::max(1, x2 - x1);
    const int ch = std::max(1, y2 - y1);

    cv::Mat src(image.height(), image.width(), CV_8UC3,
                const_cast<std::uint8_t*>(image.rgb().data()));
    cv::Mat crop = src(cv::Rect(x1, y1, cw, ch)).clone();

    const int long_side = std::max(cw, ch);
    if (long_side < target_long_side) {
        const double scale = static_cast<double>(target_long_side) / long_side;
        int nw, nh;
        if (cw >= ch) {
            nw = target_long_side;
            nh = std::max(1, static_cast<int>(std::lround(ch * scale)));
        } else {
            nh = target_long_side;
            nw = std::max(1, static_cast<int>(std::lround(cw * scale)));
        }
        cv::Mat scaled;
        cv::resize(crop, scaled, cv::Size(nw, nh), 0, 0, cv::INTER_LINEAR);
        crop = scaled;
    }

    std::vector<std::uint8_t> rgb(crop.data,
                                  crop.data + static_cast<std::size_t>(crop.total()) * 3);
    return ImageHandle::from_rgb(image.id() + "#crop", crop.cols, crop.rows, std::move(rgb));
}

ImageHandle FileResolver::resolve(const std::string& image_ref) {
    const std::string path =
        base_dir_.empty() ? image_ref : base_dir_ + "/" + image_ref;
    if (util::file_exists(path)) {
        return ImageHandle::from_file(path);
    }
    if (util::file_exists(image_ref)) {
        return ImageHandle::from_file(image_ref);
    }
    return ImageHandle::synthetic(image_ref, 640, 480);
}

}  // namespace valor::tools
