#pragma once

#include <array>
#include <cstdint>

namespace shadowtree {

// Philox4x32-10 counter-based generator.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

// Independent stream per (seed, stream id); draw n is a pure function of (seed, stream, n).
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    double next_uniform();  // in [0, 1), 53-bit resolution

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buf_{};
    int pos_ = 4;
};

}  // namespace shadowtree
