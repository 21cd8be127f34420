#pragma once

#include <string>

#include "valor/util/atomic_file.hpp"

namespace valor::test {

inline std::string asset_dir() {
#ifdef VALOR_SOURCE_ASSET_DIR
    return VALOR_SOURCE_ASSET_DIR;
#else
    return "assets";
#endif
}

inline std::string golden_raw(int n) {
    return util::read_file(asset_dir() + "/golden/q" + std::to_string(n) + ".txt");
}

}  // namespace valor::test
