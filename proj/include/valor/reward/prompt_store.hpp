#pragma once

#include <map>
#include <string>
#include <vector>

namespace valor::reward {

// Versioned text assets with {name} placeholders. Loaded once, immutable.
class PromptStore {
  public:
    // Reads every known template from `dir`; missing files throw.
    static PromptStore load(const std::string& dir);

    const std::string& raw(const std::string& name) const;
    std::string fill(const std::string& name,
                     const std::vector<std::pair<std::string, std::string>>& subs) const;

    const std::string& api_doc() const { return raw("api_doc"); }

    static const std::vector<std::string>& template_names();

  private:
    std::map<std::string, std::string> templates_;
};

// Default asset directory: $VALOR_ASSETS if set, else the source tree copy.
std::string default_asset_dir();

}  // namespace valor::reward
