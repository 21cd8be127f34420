#include "valor/reward/prompt_store.hpp"

#include <cstdlib>
#include <stdexcept>

#include "valor/util/atomic_file.hpp"
#include "valor/util/text.hpp"

namespace valor::reward {

const std::vector<std::string>& PromptStore::template_names() {
    static const std::vector<std::string> names = {
        "api_doc",        "system_prompt",  "icl_examples",     "logic_reward",
        "spatial_reward", "attribute_reward", "adherence_reward", "query_generation",
        "synonym_judge",  "coarse_filter",  "per_crop",         "dedup_filter",
    };
    return names;
}

PromptStore PromptStore::load(const std::string& dir) {
    PromptStore store;
    for (const auto& name : template_names()) {
        const std::string path = dir + "/" + name + ".txt";
        if (!util::file_exists(path)) {
            throw std::runtime_error("prompt template missing: " + path);
        }
        store.templates_[name] = util::read_file(path);
    }
    return store;
}

const std::string& PromptStore::raw(const std::string& name) const {
    const auto it = templates_.find(name);
    if (it == templates_.end()) {
        throw std::out_of_range("unknown prompt template '" + name + "'");
    }
    return it->second;
}

std::string PromptStore::fill(const std::string& name,
                              const std::vector<std::pair<std::string, std::string>>& subs) const {
    return util::fill_placeholders(raw(name), subs);
}

std::string default_asset_dir() {
    const char* env = std::getenv("VALOR_ASSETS");
    if (env != nullptr && *env != '\0') return std::string(env) + "/prompts";
#ifdef VALOR_SOURCE_ASSET_DIR
    return std::string(VALOR_SOURCE_ASSET_DIR) + "/prompts";
#else
    return "assets/prompts";
#endif
}

}  // namespace valor::reward
