#pragma once

#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "valor/tools/image.hpp"

namespace valor::tools {

struct ChatPart {
    enum class Kind { Text, Image } kind = Kind::Text;
    std::string text;          // Kind::Text
    ImageHandle image;         // Kind::Image

    static ChatPart from_text(std::string t) {
        ChatPart p;
        p.kind = Kind::Text;
        p.text = std::move(t);
        return p;
    }
    static ChatPart from_image(ImageHandle img) {
        ChatPart p;
        p.kind = Kind::Image;
        p.image = std::move(img);
        return p;
    }
};

struct ChatMessage {
    std::string role;  // "system" | "user"
    std::vector<ChatPart> parts;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    // Distinguishes otherwise-identical sampled requests (e.g. the i-th
    // group member) in cassette keys; never sent over the wire.
    std::string tag;

    static ChatRequest simple(std::string model, std::string user_text,
                              std::optional<ImageHandle> image = std::nullopt);
};

// Canonical form for hashing and cassette storage: images appear as their
// content digests, never as pixel payloads.
nlohmann::ordered_json chat_request_canonical(const ChatRequest& request);

class ChatClient {
  public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual bool deterministic() const = 0;
};

// Test double: replies from a fixed queue or a handler, and counts every
// request it sees.
class ScriptedChatClient : public ChatClient {
  public:
    ScriptedChatClient() = default;
    explicit ScriptedChatClient(std::vector<std::string> replies)
        : replies_(std::move(replies)) {}
    explicit ScriptedChatClient(std::function<std::string(const ChatRequest&)> handler)
        : handler_(std::move(handler)) {}

    std::string complete(const ChatRequest& request) override;
    bool deterministic() const override { return true; }

    int request_count() const {
        std::lock_guard<std::mutex> lock(mu_);
        return request_count_;
    }
    const std::vector<nlohmann::ordered_json>& requests_seen() const { return seen_; }

  private:
    std::vector<std::string> replies_;
    std::function<std::string(const ChatRequest&)> handler_;
    mutable std::mutex mu_;
    std::size_t next_ = 0;
    int request_count_ = 0;
    std::vector<nlohmann::ordered_json> seen_;
};

// A client that always fails; stands in for an unreachable endpoint.
class UnreachableChatClient : public ChatClient {
  public:
    std::string complete(const ChatRequest&) override;
    bool deterministic() const override { return true; }
};

// Cap on concurrent outbound requests, shared across clients.
class ConcurrencyGate {
  public:
    explicit ConcurrencyGate(int cap);
    void acquire();
    void release();

    class Slot {
      public:
        explicit Slot(ConcurrencyGate* gate) : gate_(gate) {
            if (gate_) gate_->acquire();
        }
        ~Slot() {
            if (gate_) gate_->release();
        }
        Slot(const Slot&) = delete;
        Slot& operator=(const Slot&) = delete;

      private:
        ConcurrencyGate* gate_;
    };

  private:
    std::mutex mu_;
    std::condition_variable_any cv_;
    int available_;
};

// Chat-completions over HTTP. Any OpenAI-style endpoint serves: the body is
// {model, messages, temperature} and the reply's first choice is returned.
class HttpChatClient : public ChatClient {
  public:
    HttpChatClient(std::string base_url, std::string model, std::string bearer_token,
                   std::shared_ptr<ConcurrencyGate> gate = nullptr, int max_attempts = 3);
    ~HttpChatClient() override;

    std::string complete(const ChatRequest& request) override;
    bool deterministic() const override { return false; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace valor::tools
