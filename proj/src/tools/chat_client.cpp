#include "valor/tools/chat_client.hpp"

#include <condition_variable>
#include <stdexcept>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "valor/util/base64.hpp"

namespace valor::tools {

ChatRequest ChatRequest::simple(std::string model, std::string user_text,
                                std::optional<ImageHandle> image) {
    ChatRequest req;
    req.model = std::move(model);
    ChatMessage msg;
    msg.role = "user";
    msg.parts.push_back(ChatPart::from_text(std::move(user_text)));
    if (image) msg.parts.push_back(ChatPart::from_image(std::move(*image)));
    req.messages.push_back(std::move(msg));
    return req;
}

nlohmann::ordered_json chat_request_canonical(const ChatRequest& request) {
    nlohmann::ordered_json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    if (!request.tag.empty()) body["tag"] = request.tag;
    auto messages = nlohmann::ordered_json::array();
    for (const auto& msg : request.messages) {
        nlohmann::ordered_json m;
        m["role"] = msg.role;
        auto parts = nlohmann::ordered_json::array();
        for (const auto& part : msg.parts) {
            if (part.kind == ChatPart::Kind::Text) {
                parts.push_back({{"type", "text"}, {"text", part.text}});
            } else {
                parts.push_back({{"type", "image"}, {"digest", part.image.content_digest()}});
            }
        }
        m["parts"] = std::move(parts);
        messages.push_back(std::move(m));
    }
    body["messages"] = std::move(messages);
    return body;
}

std::string ScriptedChatClient::complete(const ChatRequest& request) {
    std::lock_guard<std::mutex> lock(mu_);
    ++request_count_;
    seen_.push_back(chat_request_canonical(request));
    if (handler_) return handler_(request);
    if (replies_.empty()) throw std::runtime_error("scripted client has no replies");
    const std::string& reply = replies_[std::min(next_, replies_.size() - 1)];
    ++next_;
    return reply;
}

std::string UnreachableChatClient::complete(const ChatRequest&) {
    throw std::runtime_error("chat endpoint unreachable");
}

ConcurrencyGate::ConcurrencyGate(int cap) : available_(cap > 0 ? cap : 1) {}

void ConcurrencyGate::acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
}

void ConcurrencyGate::release() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++available_;
    }
    cv_.notify_one();
}

struct HttpChatClient::Impl {
    std::string host;
    std::string path_prefix;
    std::string model;
    std::string token;
    std::shared_ptr<ConcurrencyGate> gate;
    int max_attempts;
};

// splits "http://host:port/prefix" into client host and path prefix
static std::pair<std::string, std::string> split_url(const std::string& url) {
    std::size_t scheme = url.find("://");
    const std::size_t host_begin = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t slash = url.find('/', host_begin);
    if (slash == std::string::npos) return {url, ""};
    return {url.substr(0, slash), url.substr(slash)};
}

HttpChatClient::HttpChatClient(std::string base_url, std::string model, std::string bearer_token,
                               std::shared_ptr<ConcurrencyGate> gate, int max_attempts)
    : impl_(std::make_unique<Impl>()) {
    auto [host, prefix] = split_url(base_url);
    impl_->host = std::move(host);
    impl_->path_prefix = std::move(prefix);
    impl_->model = std::move(model);
    impl_->token = std::move(bearer_token);
    impl_->gate = std::move(gate);
    impl_->max_attempts = std::max(1, max_attempts);
}

HttpChatClient::~HttpChatClient() = default;

std::string HttpChatClient::complete(const ChatRequest& request) {
    ConcurrencyGate::Slot slot(impl_->gate.get());

    nlohmann::ordered_json body;
    body["model"] = request.model.empty() ? impl_->model : request.model;
    auto messages = nlohmann::ordered_json::array();
    for (const auto& msg : request.messages) {
        nlohmann::ordered_json m;
        m["role"] = msg.role;
        if (msg.parts.size() == 1 && msg.parts[0].kind == ChatPart::Kind::Text) {
            m["content"] = msg.parts[0].text;
        } else {
            auto content = nlohmann::ordered_json::array();
            for (const auto& part : msg.parts) {
                if (part.kind == ChatPart::Kind::Text) {
                    content.push_back({{"type", "text"}, {"text", part.text}});
                } else {
                    const std::string b64 = util::base64_encode(part.image.encoded_png());
                    content.push_back(
                        {{"type", "image_url"},
                         {"image_url", {{"url", "data:image/png;base64," + b64}}}});
                }
            }
            m["content"] = std::move(content);
        }
        messages.push_back(std::move(m));
    }
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;

    const std::string payload = body.dump();
    httplib::Headers headers;
    if (!impl_->token.empty()) {
        headers.emplace("Authorization", "Bearer " + impl_->token);
    }

    std::string last_error;
    for (int attempt = 0; attempt < impl_->max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        }
        httplib::Client client(impl_->host);
        client.set_read_timeout(120, 0);
        client.set_connection_timeout(10, 0);
        auto res = client.Post(impl_->path_prefix + "/chat/completions", headers, payload,
                               "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        try {
            const auto parsed = nlohmann::json::parse(res->body);
            return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const std::exception& e) {
            last_error = std::string("malformed response: ") + e.what();
        }
    }
    throw std::runtime_error("chat completion failed: " + last_error);
}

}  // namespace valor::tools
