#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "valor/tools/chat_client.hpp"
#include "valor/tools/provider.hpp"

namespace valor::tools {

enum class CassetteMode { Off, Record, Replay };

CassetteMode cassette_mode_from_text(const std::string& text);

// Recorded external-service exchanges: a JSON array of
// {key, tool, request, response, recorded_at}. Concurrent readers are free;
// appends serialize behind a mutex and rewrite the file atomically.
class CassetteStore {
  public:
    static std::shared_ptr<CassetteStore> open(const std::string& path, CassetteMode mode);

    std::optional<nlohmann::ordered_json> lookup(const std::string& key) const;
    void record(const std::string& key, const std::string& tool,
                nlohmann::ordered_json request, nlohmann::ordered_json response);

    std::size_t size() const;
    const std::string& path() const { return path_; }

    // Content hash of (tool, canonical arguments). Image payloads must
    // already appear as digests inside `request`.
    static std::string make_key(const std::string& tool, const nlohmann::ordered_json& request);

  private:
    CassetteStore(std::string path, CassetteMode mode);
    void save_locked();

    std::string path_;
    CassetteMode mode_;
    mutable std::mutex mu_;
    nlohmann::ordered_json entries_;  // array
    std::map<std::string, std::size_t> index_;
};

struct UnrecordedCall : ProviderError {
    explicit UnrecordedCall(const std::string& key)
        : ProviderError("replay mode has no recording for request key " + key) {}
};

// Serves tool calls from a cassette; any unrecorded call is a hard error.
class ReplayToolProvider : public ToolProvider {
  public:
    explicit ReplayToolProvider(std::shared_ptr<CassetteStore> store) : store_(std::move(store)) {}

    std::vector<Detection> detect(const ImageHandle& image, const std::string& prompt,
                                  double box_threshold, double text_threshold) override;
    double depth_at(const ImageHandle& image, const BBox& box) override;
    std::string vqa(const ImageHandle& image, const std::optional<BBox>& box,
                    const std::string& question) override;
    bool deterministic() const override { return true; }

  private:
    std::shared_ptr<CassetteStore> store_;
};

// Passes calls through to `inner` and records every exchange.
class RecordingToolProvider : public ToolProvider {
  public:
    RecordingToolProvider(ToolProvider& inner, std::shared_ptr<CassetteStore> store)
        : inner_(inner), store_(std::move(store)) {}

    std::vector<Detection> detect(const ImageHandle& image, const std::string& prompt,
                                  double box_threshold, double text_threshold) override;
    double depth_at(const ImageHandle& image, const BBox& box) override;
    std::string vqa(const ImageHandle& image, const std::optional<BBox>& box,
                    const std::string& question) override;
    bool deterministic() const override { return inner_.deterministic(); }

  private:
    ToolProvider& inner_;
    std::shared_ptr<CassetteStore> store_;
};

class ReplayChatClient : public ChatClient {
  public:
    explicit ReplayChatClient(std::shared_ptr<CassetteStore> store) : store_(std::move(store)) {}
    std::string complete(const ChatRequest& request) override;
    bool deterministic() const override { return true; }

  private:
    std::shared_ptr<CassetteStore> store_;
};

class RecordingChatClient : public ChatClient {
  public:
    RecordingChatClient(ChatClient& inner, std::shared_ptr<CassetteStore> store)
        : inner_(inner), store_(std::move(store)) {}
    std::string complete(const ChatRequest& request) override;
    bool deterministic() const override { return inner_.deterministic(); }

  private:
    ChatClient& inner_;
    std::shared_ptr<CassetteStore> store_;
};

// Canonical request bodies shared by the replay and recording wrappers.
nlohmann::ordered_json detect_request_json(const ImageHandle& image, const std::string& prompt,
                                           double box_threshold, double text_threshold);
nlohmann::ordered_json depth_request_json(const ImageHandle& image, const BBox& box);
nlohmann::ordered_json vqa_request_json(const ImageHandle& image, const std::optional<BBox>& box,
                                        const std::string& question);

}  // namespace valor::tools
