#pragma once

// Independent construction of {p,q} tiling balls: BFS over the orbit of the
// disk origin under tiling symmetries (vertex rotations and edge half-turns),
// deduplicated by position.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

struct TilingBall {
    std::vector<std::int64_t> layer_counts;
    std::int64_t edge_count = 0;
};

inline TilingBall tiling_ball(int p, int q, int layers) {
    using C = std::complex<double>;
    struct Mobius {
        C a, b;  // z -> (a z + b) / (conj(b) z + conj(a))
        C apply(C z) const { return (a * z + b) / (std::conj(b) * z + std::conj(a)); }
        Mobius then(const Mobius& o) const {  // this after o
            return {a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)};
        }
    };
    const double pi = std::numbers::pi;
    const double half_len = std::acosh(std::cos(pi / p) / std::sin(pi / q));
    auto translate = [](double d) { return Mobius{C(std::cosh(d / 2), 0), C(std::sinh(d / 2), 0)}; };
    auto rotate = [](double th) { return Mobius{std::polar(1.0, th / 2), C(0, 0)}; };
    const Mobius half_turn = translate(half_len).then(rotate(pi)).then(translate(-half_len));
    std::vector<Mobius> steps;
    for (int k = 0; k < q; ++k) steps.push_back(rotate(2 * pi * k / q).then(half_turn));

    const double cell = 1e-7;
    std::map<std::pair<long long, long long>, std::vector<int>> grid;
    std::vector<C> pos;
    std::vector<Mobius> frames;
    std::vector<int> layer;
    auto find = [&](C z) -> int {
        const long long gx = std::llround(z.real() / cell), gy = std::llround(z.imag() / cell);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({gx + dx, gy + dy});
                if (it == grid.end()) continue;
                for (int id : it->second)
                    if (std::abs(pos[id] - z) < cell / 4) return id;
            }
        return -1;
    };
    auto add = [&](C z, Mobius f, int l) {
        const int id = static_cast<int>(pos.size());
        pos.push_back(z);
        frames.push_back(f);
        layer.push_back(l);
        grid[{std::llround(z.real() / cell), std::llround(z.imag() / cell)}].push_back(id);
        return id;
    };
    add(C(0, 0), rotate(0), 0);
    std::int64_t edges = 0;
    for (std::size_t u = 0; u < pos.size(); ++u) {
        for (const auto& s : steps) {
            const Mobius f = frames[u].then(s);
            const C z = f.apply(C(0, 0));
            int v = find(z);
            if (v < 0) {
                if (layer[u] == layers) continue;
                v = add(z, f, layer[u] + 1);
            }
            if (static_cast<int>(u) < v) ++edges;
        }
    }
    TilingBall out;
    out.layer_counts.assign(layers + 1, 0);
    for (int l : layer) ++out.layer_counts[l];
    out.edge_count = edges;
    return out;
}

}  // namespace oracle
