#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coordsynth {

using ActionId = std::uint32_t;
using StateId = std::uint32_t;

// Finite action sequence.
using Word = std::vector<ActionId>;

// Ultimately periodic word: prefix followed by loop repeated forever.
struct Lasso {
    Word prefix;
    Word loop;

    std::size_t horizon() const { return prefix.size() + loop.size(); }
    // Letter at position i of the infinite word.
    ActionId at(std::size_t i) const {
        if (i < prefix.size()) return prefix[i];
        return loop[(i - prefix.size()) % loop.size()];
    }
    bool operator==(const Lasso&) const = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace coordsynth
