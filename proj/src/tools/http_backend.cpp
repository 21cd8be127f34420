#include "valor/tools/http_backend.hpp"

#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "valor/util/base64.hpp"

namespace valor::tools {

struct HttpToolProvider::Impl {
    std::string detector_host, detector_prefix;
    std::string depth_host, depth_prefix;
    std::shared_ptr<ChatClient> vqa_client;
    std::string vqa_model;
    std::shared_ptr<ConcurrencyGate> gate;
    int max_attempts = 3;

    nlohmann::json post_json(const std::string& host, const std::string& path,
                             const nlohmann::ordered_json& body) {
        ConcurrencyGate::Slot slot(gate.get());
        const std::string payload = body.dump();
        std::string last_error;
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
            }
            httplib::Client client(host);
            client.set_read_timeout(120, 0);
            client.set_connection_timeout(10, 0);
            auto res = client.Post(path, payload, "application/json");
            if (!res) {
                last_error = "transport failure: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "http status " + std::to_string(res->status);
                continue;
            }
            try {
                return nlohmann::json::parse(res->body);
            } catch (const std::exception& e) {
                last_error = std::string("malformed response: ") + e.what();
            }
        }
        throw ProviderError(last_error);
    }
};

static std::pair<std::string, std::string> split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    const std::size_t host_begin = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t slash = url.find('/', host_begin);
    if (slash == std::string::npos) return {url, ""};
    return {url.substr(0, slash), url.substr(slash)};
}

HttpToolProvider::HttpToolProvider(std::string detector_url, std::string depth_url,
                                   std::shared_ptr<ChatClient> vqa_client, std::string vqa_model,
                                   std::shared_ptr<ConcurrencyGate> gate, int max_attempts)
    : impl_(std::make_unique<Impl>()) {
    std::tie(impl_->detector_host, impl_->detector_prefix) = split_url(detector_url);
    std::tie(impl_->depth_host, impl_->depth_prefix) = split_url(depth_url);
    impl_->vqa_client = std::move(vqa_client);
    impl_->vqa_model = std::move(vqa_model);
    impl_->gate = std::move(gate);
    impl_->max_attempts = std::max(1, max_attempts);
}

HttpToolProvider::~HttpToolProvider() = default;

std::vector<Detection> HttpToolProvider::detect(const ImageHandle& image,
                                                const std::string& prompt, double box_threshold,
                                                double text_threshold) {
    if (prompt.empty()) throw EmptyPrompt();
    nlohmann::ordered_json body;
    body["image"] = util::base64_encode(image.encoded_png());
    body["prompt"] = prompt;
    body["box_threshold"] = box_threshold;
    body["text_threshold"] = text_threshold;
    const auto response = impl_->post_json(impl_->detector_host,
                                           impl_->detector_prefix + "/detect", body);

    std::vector<Detection> out;
    try {
        for (const auto& d : response.at("detections")) {
            Detection det;
            const auto& bb = d.at("bbox");
            det.bbox = {bb.at(0).get<double>(), bb.at(1).get<double>(), bb.at(2).get<double>(),
                        bb.at(3).get<double>()};
            det.label = d.at("label").get<std::string>();
            det.score = d.contains("score") ? d.at("score").get<double>() : 1.0;
            // clamp service output into the image frame
            det.bbox.x1 = std::max(0.0, det.bbox.x1);
            det.bbox.y1 = std::max(0.0, det.bbox.y1);
            det.bbox.x2 = std::min(static_cast<double>(image.width()), det.bbox.x2);
            det.bbox.y2 = std::min(static_cast<double>(image.height()), det.bbox.y2);
            if (!det.valid() || det.score < box_threshold) continue;
            out.push_back(det);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed detector response: ") + e.what());
    }
    return out;
}

double HttpToolProvider::depth_at(const ImageHandle& image, const BBox& box) {
    geometry::require_valid(box);
    if (!image.contains(box)) throw OutOfBounds("depth bbox exceeds image bounds");
    nlohmann::ordered_json body;
    body["image"] = util::base64_encode(image.encoded_png());
    body["bbox"] = nlohmann::ordered_json::array({box.x1, box.y1, box.x2, box.y2});
    const auto response = impl_->post_json(impl_->depth_host, impl_->depth_prefix + "/depth", body);
    try {
        const double depth = response.at("depth_m").get<double>();
        if (!(depth > 0.0) || !std::isfinite(depth)) {
            throw ProviderError("depth service returned a non-positive depth");
        }
        return depth;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed depth response: ") + e.what());
    }
}

std::string HttpToolProvider::vqa(const ImageHandle& image, const std::optional<BBox>& box,
                                  const std::string& question) {
    ImageHandle region = image;
    if (box) {
        region = crop_and_upscale(image, *box);
    }
    ChatRequest req = ChatRequest::simple(impl_->vqa_model, question, region);
    try {
        return impl_->vqa_client->complete(req);
    } catch (const std::exception& e) {
        throw ProviderError(std::string("vqa backend failed: ") + e.what());
    }
}

}  // namespace valor::tools
