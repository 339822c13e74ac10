#pragma once

#include <memory>
#include <random>
#include <vector>

#include "nlgame/game.hpp"

namespace nlgame::testing {

inline std::shared_ptr<const Lattice> lattice(int r, int c, Boundary b) { return std::make_shared<const Lattice>(r, c, b); }

/// Each edge independently non-identity with probability `density`, uniform nonzero shift.
inline Labeling random_shift_labeling(std::shared_ptr<const Lattice> lat, int d, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution flip(density);
    std::uniform_int_distribution<int> cls(1, d - 1);
    std::vector<int> s(lat->num_edges(), 0);
    for (int& x : s)
        if (flip(rng)) x = cls(rng);
    return Labeling::from_shifts(std::move(lat), d, s);
}

inline Labeling random_switches(Labeling k, int count, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> vd(0, k.lattice().num_vertices() - 1), sd(0, k.d() - 1);
    for (int i = 0; i < count; ++i) k = apply_switch(k, vd(rng), Perm::shift(k.d(), sd(rng)));
    return k;
}

inline Boundary random_boundary(std::mt19937_64& rng) {
    static constexpr Boundary all[] = {Boundary::Plane, Boundary::CylinderX, Boundary::CylinderY, Boundary::Torus};
    return all[std::uniform_int_distribution<int>(0, 3)(rng)];
}

} // namespace nlgame::testing
