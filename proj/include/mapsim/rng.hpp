#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace mapsim {

// splitmix64, used to derive independent stream seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives a named child seed so that e.g. mobility and channel randomness are
// independent streams: consuming one never shifts the other.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) {
    std::uint64_t s = master ^ fnv1a64(stream);
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::string_view stream) {
    return std::mt19937_64(derive_seed(master, stream));
}

// The per-purpose random streams one episode owns. Copying an RngPool forks
// every stream, so a copied state replays identically.
struct RngPool {
    std::mt19937_64 placement;  // initial UE/MAP positions
    std::mt19937_64 demand;
    std::mt19937_64 mobility;   // waypoints + jitter
    std::mt19937_64 blockage;
    std::mt19937_64 channel;    // shadowing, LoS draws, fading
    std::mt19937_64 kmeans;
    std::mt19937_64 control;    // spawn offsets, policy sampling at deployment

    RngPool() : RngPool(0) {}

    explicit RngPool(std::uint64_t master)
        : placement(make_engine(master, "placement")),
          demand(make_engine(master, "demand")),
          mobility(make_engine(master, "mobility")),
          blockage(make_engine(master, "blockage")),
          channel(make_engine(master, "channel")),
          kmeans(make_engine(master, "kmeans")),
          control(make_engine(master, "control")) {}
};

}  // namespace mapsim
