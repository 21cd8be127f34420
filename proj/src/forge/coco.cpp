#include "valor/forge/coco.hpp"

#include <algorithm>
#include <set>

#include "valor/util/atomic_file.hpp"
#include "valor/util/jsonl.hpp"

namespace valor::forge {

std::string export_coco(const std::vector<PseudoLabel>& labels,
                        const std::map<std::string, ImageInfo>& image_sizes) {
    using oj = nlohmann::ordered_json;

    // image ids by first appearance, category ids by sorted label text
    std::vector<std::string> image_order;
    std::map<std::string, int> image_ids;
    std::map<std::string, std::string> image_sources;
    std::set<std::string> label_texts;
    for (const auto& label : labels) {
        if (image_ids.find(label.image_id) == image_ids.end()) {
            image_ids[label.image_id] = static_cast<int>(image_order.size()) + 1;
            image_order.push_back(label.image_id);
            image_sources[label.image_id] = label.source_tag;
        }
        label_texts.insert(label.detection.label);
    }
    std::map<std::string, int> category_ids;
    for (const auto& text : label_texts) {
        category_ids[text] = static_cast<int>(category_ids.size()) + 1;
    }

    oj doc;
    oj images = oj::array();
    for (const auto& image_id : image_order) {
        ImageInfo info;
        const auto it = image_sizes.find(image_id);
        if (it != image_sizes.end()) info = it->second;
        oj entry;
        entry["id"] = image_ids[image_id];
        entry["file_name"] = image_id;
        entry["width"] = info.width;
        entry["height"] = info.height;
        entry["source"] = image_sources[image_id];
        images.push_back(std::move(entry));
    }
    doc["images"] = std::move(images);

    oj annotations = oj::array();
    int next_annotation = 1;
    for (const auto& label : labels) {
        const auto& box = label.detection.bbox;
        oj entry;
        entry["id"] = next_annotation++;
        entry["image_id"] = image_ids.at(label.image_id);
        entry["category_id"] = category_ids.at(label.detection.label);
        entry["bbox"] = oj::array({box.x1, box.y1, box.x2 - box.x1, box.y2 - box.y1});
        entry["area"] = (box.x2 - box.x1) * (box.y2 - box.y1);
        entry["iscrowd"] = 0;
        entry["score"] = label.detection.score;
        entry["stage_history"] = label.stage_history;
        annotations.push_back(std::move(entry));
    }
    doc["annotations"] = std::move(annotations);

    oj categories = oj::array();
    for (const auto& [text, id] : category_ids) {
        categories.push_back(oj{{"id", id}, {"name", text}});
    }
    doc["categories"] = std::move(categories);

    return util::stable_dump(doc);
}

void export_coco_file(const std::vector<PseudoLabel>& labels, const std::string& path,
                      const std::map<std::string, ImageInfo>& image_sizes) {
    util::write_file_atomic(path, export_coco(labels, image_sizes));
}

std::vector<PseudoLabel> import_coco(const std::string& coco_json) {
    const auto doc = nlohmann::ordered_json::parse(coco_json);
    std::map<int, std::string> image_names;
    std::map<int, std::string> image_sources;
    for (const auto& image : doc.at("images")) {
        image_names[image.at("id").get<int>()] = image.at("file_name").get<std::string>();
        image_sources[image.at("id").get<int>()] =
            image.contains("source") ? image.at("source").get<std::string>() : "";
    }
    std::map<int, std::string> category_names;
    for (const auto& category : doc.at("categories")) {
        category_names[category.at("id").get<int>()] = category.at("name").get<std::string>();
    }

    std::vector<PseudoLabel> out;
    for (const auto& ann : doc.at("annotations")) {
        const int image_id = ann.at("image_id").get<int>();
        const int category_id = ann.at("category_id").get<int>();
        if (image_names.find(image_id) == image_names.end()) {
            throw DanglingReference("annotation references unknown image " +
                                    std::to_string(image_id));
        }
        if (category_names.find(category_id) == category_names.end()) {
            throw DanglingReference("annotation references unknown category " +
                                    std::to_string(category_id));
        }
        PseudoLabel label;
        label.image_id = image_names.at(image_id);
        label.source_tag = image_sources.at(image_id);
        const auto& box = ann.at("bbox");
        const double x = box.at(0).get<double>();
        const double y = box.at(1).get<double>();
        const double w = box.at(2).get<double>();
        const double h = box.at(3).get<double>();
        if (!(w > 0.0) || !(h > 0.0)) {
            throw DanglingReference("annotation has non-positive width/height");
        }
        label.detection.bbox = {x, y, x + w, y + h};
        label.detection.label = category_names.at(category_id);
        label.detection.score = ann.contains("score") ? ann.at("score").get<double>() : 1.0;
        if (ann.contains("stage_history")) {
            label.stage_history = ann.at("stage_history").get<std::vector<std::string>>();
        }
        out.push_back(std::move(label));
    }
    return out;
}

std::vector<PseudoLabel> import_coco_file(const std::string& path) {
    return import_coco(util::read_file(path));
}

}  // namespace valor::forge
