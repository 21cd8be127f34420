#include "valor/tools/cassette.hpp"

#include <ctime>

#include "valor/util/atomic_file.hpp"
#include "valor/util/jsonl.hpp"
#include "valor/util/sha256.hpp"

namespace valor::tools {

CassetteMode cassette_mode_from_text(const std::string& text) {
    if (text == "off") return CassetteMode::Off;
    if (text == "record") return CassetteMode::Record;
    if (text == "replay") return CassetteMode::Replay;
    throw std::invalid_argument("cassette mode must be off|record|replay, got '" + text + "'");
}

CassetteStore::CassetteStore(std::string path, CassetteMode mode)
    : path_(std::move(path)), mode_(mode), entries_(nlohmann::ordered_json::array()) {}

std::shared_ptr<CassetteStore> CassetteStore::open(const std::string& path, CassetteMode mode) {
    auto store = std::shared_ptr<CassetteStore>(new CassetteStore(path, mode));
    if (util::file_exists(path)) {
        store->entries_ = nlohmann::ordered_json::parse(util::read_file(path));
        if (!store->entries_.is_array()) {
            throw std::runtime_error("cassette file must hold a JSON array: " + path);
        }
        for (std::size_t i = 0; i < store->entries_.size(); ++i) {
            store->index_[store->entries_[i].at("key").get<std::string>()] = i;
        }
    } else if (mode == CassetteMode::Replay) {
        throw std::runtime_error("replay mode needs an existing cassette: " + path);
    }
    return store;
}

std::optional<nlohmann::ordered_json> CassetteStore::lookup(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second].at("response");
}

static std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void CassetteStore::record(const std::string& key, const std::string& tool,
                           nlohmann::ordered_json request, nlohmann::ordered_json response) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = index_.find(key);
    if (it != index_.end()) return;  // first recording wins
    nlohmann::ordered_json entry;
    entry["key"] = key;
    entry["tool"] = tool;
    entry["request"] = std::move(request);
    entry["response"] = std::move(response);
    entry["recorded_at"] = utc_timestamp();
    index_[key] = entries_.size();
    entries_.push_back(std::move(entry));
    save_locked();
}

void CassetteStore::save_locked() {
    util::write_file_atomic(path_, util::stable_dump(entries_));
}

std::size_t CassetteStore::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

std::string CassetteStore::make_key(const std::string& tool,
                                    const nlohmann::ordered_json& request) {
    return util::sha256_hex(tool + "\n" + util::stable_dump(request));
}

// ---- canonical requests ----

static nlohmann::ordered_json bbox_json(const BBox& box) {
    return nlohmann::ordered_json::array({box.x1, box.y1, box.x2, box.y2});
}

nlohmann::ordered_json detect_request_json(const ImageHandle& image, const std::string& prompt,
                                           double box_threshold, double text_threshold) {
    nlohmann::ordered_json req;
    req["image"] = image.content_digest();
    req["prompt"] = prompt;
    req["box_threshold"] = box_threshold;
    req["text_threshold"] = text_threshold;
    return req;
}

nlohmann::ordered_json depth_request_json(const ImageHandle& image, const BBox& box) {
    nlohmann::ordered_json req;
    req["image"] = image.content_digest();
    req["bbox"] = bbox_json(box);
    return req;
}

nlohmann::ordered_json vqa_request_json(const ImageHandle& image, const std::optional<BBox>& box,
                                        const std::string& question) {
    nlohmann::ordered_json req;
    req["image"] = image.content_digest();
    req["bbox"] = box ? bbox_json(*box) : nlohmann::ordered_json(nullptr);
    req["question"] = question;
    return req;
}

// ---- replay provider ----

std::vector<Detection> ReplayToolProvider::detect(const ImageHandle& image,
                                                  const std::string& prompt,
                                                  double box_threshold, double text_threshold) {
    const auto req = detect_request_json(image, prompt, box_threshold, text_threshold);
    const std::string key = CassetteStore::make_key("detect", req);
    const auto response = store_->lookup(key);
    if (!response) throw UnrecordedCall(key);
    std::vector<Detection> out;
    for (const auto& d : response->at("detections")) {
        Detection det;
        const auto& bb = d.at("bbox");
        det.bbox = {bb.at(0).get<double>(), bb.at(1).get<double>(), bb.at(2).get<double>(),
                    bb.at(3).get<double>()};
        det.label = d.at("label").get<std::string>();
        det.score = d.at("score").get<double>();
        out.push_back(det);
    }
    return out;
}

double ReplayToolProvider::depth_at(const ImageHandle& image, const BBox& box) {
    const auto req = depth_request_json(image, box);
    const std::string key = CassetteStore::make_key("depth", req);
    const auto response = store_->lookup(key);
    if (!response) throw UnrecordedCall(key);
    return response->at("depth_m").get<double>();
}

std::string ReplayToolProvider::vqa(const ImageHandle& image, const std::optional<BBox>& box,
                                    const std::string& question) {
    const auto req = vqa_request_json(image, box, question);
    const std::string key = CassetteStore::make_key("vqa", req);
    const auto response = store_->lookup(key);
    if (!response) throw UnrecordedCall(key);
    return response->at("answer").get<std::string>();
}

// ---- recording provider ----

std::vector<Detection> RecordingToolProvider::detect(const ImageHandle& image,
                                                     const std::string& prompt,
                                                     double box_threshold,
                                                     double text_threshold) {
    auto result = inner_.detect(image, prompt, box_threshold, text_threshold);
    auto req = detect_request_json(image, prompt, box_threshold, text_threshold);
    const std::string key = CassetteStore::make_key("detect", req);
    nlohmann::ordered_json dets = nlohmann::ordered_json::array();
    for (const auto& det : result) {
        dets.push_back({{"bbox", bbox_json(det.bbox)}, {"label", det.label}, {"score", det.score}});
    }
    store_->record(key, "detect", std::move(req),
                   nlohmann::ordered_json{{"detections", std::move(dets)}});
    return result;
}

double RecordingToolProvider::depth_at(const ImageHandle& image, const BBox& box) {
    const double result = inner_.depth_at(image, box);
    auto req = depth_request_json(image, box);
    const std::string key = CassetteStore::make_key("depth", req);
    store_->record(key, "depth", std::move(req),
                   nlohmann::ordered_json{{"depth_m", result}});
    return result;
}

std::string RecordingToolProvider::vqa(const ImageHandle& image, const std::optional<BBox>& box,
                                       const std::string& question) {
    const std::string result = inner_.vqa(image, box, question);
    auto req = vqa_request_json(image, box, question);
    const std::string key = CassetteStore::make_key("vqa", req);
    store_->record(key, "vqa", std::move(req),
                   nlohmann::ordered_json{{"answer", result}});
    return result;
}

// ---- chat wrappers ----

std::string ReplayChatClient::complete(const ChatRequest& request) {
    const auto req = chat_request_canonical(request);
    const std::string key = CassetteStore::make_key("chat", req);
    const auto response = store_->lookup(key);
    if (!response) throw UnrecordedCall(key);
    return response->at("content").get<std::string>();
}

std::string RecordingChatClient::complete(const ChatRequest& request) {
    const std::string reply = inner_.complete(request);
    auto req = chat_request_canonical(request);
    const std::string key = CassetteStore::make_key("chat", req);
    store_->record(key, "chat", std::move(req),
                   nlohmann::ordered_json{{"content", reply}});
    return reply;
}

}  // namespace valor::tools
