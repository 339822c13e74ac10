#pragma once

/**
 * @file perm.hpp
 * @brief Exact permutation algebra on {0..d-1}.
 *
 * Composition convention, used by every class computation in the library:
 *
 *     compose(p, q)(x) = p(q(x))
 *
 * i.e. q is applied first. Two families get special treatment:
 *   shift(d, i)      : x -> x + i mod d   (cyclic shifts)
 *   reflection(d, i) : x -> i - x mod d   (reflections, each its own inverse)
 */

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlgame/error.hpp"

namespace nlgame {

inline int mod(long long a, int d) {
    long long r = a % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

class Perm {
public:
    Perm() = default;

    /// Validates that `images` is a bijection on {0..d-1} with d >= 2.
    explicit Perm(std::vector<int> images) : map_(std::move(images)) {
        const int d = static_cast<int>(map_.size());
        if (d < 2) throw InvalidArgument("permutation needs d >= 2, got " + std::to_string(d));
        std::vector<char> seen(map_.size(), 0);
        for (int v : map_) {
            if (v < 0 || v >= d || seen[v]) throw InvalidArgument("not a bijection on {0.." + std::to_string(d - 1) + "}");
            seen[v] = 1;
        }
    }

    static Perm identity(int d) { return shift(d, 0); }

    static Perm shift(int d, int i) {
        check_d(d);
        std::vector<int> m(d);
        for (int x = 0; x < d; ++x) m[x] = mod(x + i, d);
        return Perm(std::move(m), Unchecked{});
    }

    static Perm reflection(int d, int i) {
        check_d(d);
        std::vector<int> m(d);
        for (int x = 0; x < d; ++x) m[x] = mod(i - x, d);
        return Perm(std::move(m), Unchecked{});
    }

    int d() const noexcept { return static_cast<int>(map_.size()); }
    int operator()(int x) const { return map_[x]; }
    const std::vector<int>& images() const noexcept { return map_; }

    bool is_identity() const {
        for (int x = 0; x < d(); ++x)
            if (map_[x] != x) return false;
        return true;
    }

    Perm inverse() const {
        std::vector<int> m(map_.size());
        for (int x = 0; x < d(); ++x) m[map_[x]] = x;
        return Perm(std::move(m), Unchecked{});
    }

    /// Shift index i if this is x -> x + i, otherwise nullopt.
    std::optional<int> shift_index() const {
        const int i = map_[0];
        for (int x = 0; x < d(); ++x)
            if (map_[x] != mod(x + i, d())) return std::nullopt;
        return i;
    }

    /// Reflection index i if this is x -> i - x, otherwise nullopt.
    std::optional<int> reflection_index() const {
        const int i = map_[0];
        for (int x = 0; x < d(); ++x)
            if (map_[x] != mod(i - x, d())) return std::nullopt;
        return i;
    }

    bool operator==(const Perm&) const = default;
    auto operator<=>(const Perm&) const = default;

private:
    struct Unchecked {};
    Perm(std::vector<int> m, Unchecked) : map_(std::move(m)) {}

    static void check_d(int d) {
        if (d < 2) throw InvalidArgument("permutation needs d >= 2, got " + std::to_string(d));
    }

    std::vector<int> map_;
};

/// result(x) = p(q(x)).
inline Perm compose(const Perm& p, const Perm& q) {
    if (p.d() != q.d())
        throw InvalidArgument("compose: dimension mismatch " + std::to_string(p.d()) + " vs " + std::to_string(q.d()));
    std::vector<int> m(p.d());
    for (int x = 0; x < p.d(); ++x) m[x] = p(q(x));
    return Perm(std::move(m));
}

inline Perm inverse(const Perm& p) { return p.inverse(); }

enum class FamilyKind { Shift, Reflection, Other };

struct Family {
    FamilyKind kind;
    int index; // meaningful for Shift and Reflection

    bool operator==(const Family&) const = default;
};

/// Shift wins over Reflection when both apply (d = 2, where the two families coincide).
inline Family classify_family(const Perm& p) {
    if (auto i = p.shift_index()) return {FamilyKind::Shift, *i};
    if (auto i = p.reflection_index()) return {FamilyKind::Reflection, *i};
    return {FamilyKind::Other, 0};
}

/// Unit u with pi o shift(x) o pi^-1 = shift(u*x) for all x, if pi normalizes the shift family.
inline std::optional<int> conjugation_unit(const Perm& pi) {
    const int d = pi.d();
    const Perm c = compose(compose(pi, Perm::shift(d, 1)), pi.inverse());
    auto u = c.shift_index();
    if (!u) return std::nullopt;
    // conjugation preserves order, so u generates Z_d; check anyway
    if (std::gcd(*u, d) != 1) return std::nullopt;
    return u;
}

/// Units of Z_d in increasing order.
inline std::vector<int> units_mod(int d) {
    std::vector<int> us;
    for (int u = 1; u < d; ++u)
        if (std::gcd(u, d) == 1) us.push_back(u);
    if (d == 1) us.push_back(0);
    return us;
}

/// `s<i>`, `r<i>` or `[a0,a1,...]`. Shifts print as `s`, reflections as `r`, anything else explicitly.
inline std::string to_token(const Perm& p) {
    if (auto i = p.shift_index()) return "s" + std::to_string(*i);
    if (auto i = p.reflection_index()) return "r" + std::to_string(*i);
    std::string s = "[";
    for (int x = 0; x < p.d(); ++x) {
        if (x) s += ',';
        s += std::to_string(p(x));
    }
    return s + "]";
}

inline Perm parse_perm_token(std::string_view tok, int d) {
    auto bad = [&](const std::string& why) {
        return InvalidArgument("bad permutation token '" + std::string(tok) + "': " + why);
    };
    auto parse_int = [&](std::string_view s) {
        if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw bad("expected a nonnegative integer");
        return std::stoi(std::string(s));
    };
    if (tok.empty()) throw bad("empty");
    if (tok[0] == 's' || tok[0] == 'r') {
        const int i = parse_int(tok.substr(1));
        if (i >= d) throw bad("index " + std::to_string(i) + " out of range for d=" + std::to_string(d));
        return tok[0] == 's' ? Perm::shift(d, i) : Perm::reflection(d, i);
    }
    if (tok.front() == '[' && tok.back() == ']') {
        std::vector<int> m;
        std::string_view body = tok.substr(1, tok.size() - 2);
        while (!body.empty()) {
            auto comma = body.find(',');
            m.push_back(parse_int(body.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        if (static_cast<int>(m.size()) != d) throw bad("expected " + std::to_string(d) + " images");
        try {
            return Perm(std::move(m));
        } catch (const InvalidArgument& e) {
            throw bad(e.what());
        }
    }
    throw bad("expected s<i>, r<i> or [a0,...]");
}

} // namespace nlgame
