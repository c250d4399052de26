#pragma once

#include "hrt/world.hpp"

#include <memory>
#include <string>

namespace hrt::testing {

inline const char* kSampleLayout = "XXOXX\n"
                                   "X1  X\n"
                                   "P  2S\n"
                                   "X   X\n"
                                   "XXDXX\n";

inline std::shared_ptr<const Layout> sample_layout() {
    static const auto l = std::make_shared<const Layout>(load_layout(kSampleLayout));
    return l;
}

inline std::shared_ptr<const Layout> make_layout(const std::string& text) {
    return std::make_shared<const Layout>(load_layout(text));
}

inline std::string data_path(const std::string& rel) { return std::string(HRT_SOURCE_DIR) + "/" + rel; }

} // namespace hrt::testing
