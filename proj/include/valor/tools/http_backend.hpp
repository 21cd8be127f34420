#pragma once

#include <memory>

#include "valor/tools/chat_client.hpp"
#include "valor/tools/provider.hpp"

namespace valor::tools {

// Live backend: detection and depth via the minimal JSON services, VQA via a
// chat-completions client fed the (cropped, upscaled) region.
class HttpToolProvider : public ToolProvider {
  public:
    HttpToolProvider(std::string detector_url, std::string depth_url,
                     std::shared_ptr<ChatClient> vqa_client, std::string vqa_model,
                     std::shared_ptr<ConcurrencyGate> gate = nullptr, int max_attempts = 3);
    ~HttpToolProvider() override;

    std::vector<Detection> detect(const ImageHandle& image, const std::string& prompt,
                                  double box_threshold, double text_threshold) override;
    double depth_at(const ImageHandle& image, const BBox& box) override;
    std::string vqa(const ImageHandle& image, const std::optional<BBox>& box,
                    const std::string& question) override;
    bool deterministic() const override { return false; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace valor::tools
