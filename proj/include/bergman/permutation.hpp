#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "common.hpp"

namespace bergman {

/// Bijection on {0, ..., n-1}; image(i) is where i is sent.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(std::size_t n) {
        Permutation p;
        p.map_.resize(n);
        std::iota(p.map_.begin(), p.map_.end(), std::size_t{0});
        return p;
    }

    /// The 2-cycle exchanging j and k (0-based).
    static Permutation transposition(std::size_t n, std::size_t j, std::size_t k) {
        require(j < n && k < n, "transposition index out of range");
        auto p = identity(n);
        std::swap(p.map_[j], p.map_[k]);
        return p;
    }

    static Permutation from_images(std::vector<std::size_t> images) {
        std::vector<bool> seen(images.size(), false);
        for (auto v : images) {
            require(v < images.size() && !seen[v], "not a bijection");
            seen[v] = true;
        }
        Permutation p;
        p.map_ = std::move(images);
        return p;
    }

    std::size_t size() const noexcept { return map_.size(); }
    std::size_t operator()(std::size_t i) const { return map_[i]; }
    std::span<const std::size_t> images() const noexcept { return map_; }

    /// Parity via cycle decomposition: +1 even, -1 odd.
    int sign() const {
        std::vector<bool> visited(map_.size(), false);
        int s = 1;
        for (std::size_t i = 0; i < map_.size(); ++i) {
            if (visited[i]) continue;
            std::size_t len = 0;
            for (std::size_t j = i; !visited[j]; j = map_[j]) {
                visited[j] = true;
                ++len;
            }
            if (len % 2 == 0) s = -s;
        }
        return s;
    }

    /// (this ∘ other)(i) = this(other(i)).
    Permutation compose(const Permutation& other) const {
        require(size() == other.size(), "compose: size mismatch");
        Permutation r;
        r.map_.resize(size());
        for (std::size_t i = 0; i < size(); ++i) r.map_[i] = map_[other.map_[i]];
        return r;
    }

    Permutation inverse() const {
        Permutation r;
        r.map_.resize(size());
        for (std::size_t i = 0; i < size(); ++i) r.map_[map_[i]] = i;
        return r;
    }

    /// Coordinate action: (τw)_i = w_{τ(i)}.
    template <class T>
    std::vector<T> apply(std::span<const T> w) const {
        require(w.size() == size(), "apply: size mismatch");
        std::vector<T> out(size());
        for (std::size_t i = 0; i < size(); ++i) out[i] = w[map_[i]];
        return out;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> map_;
};

/// All n! permutations in lexicographic order of their image sequences.
inline std::vector<Permutation> all_permutations(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_images(v));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

inline std::size_t factorial(std::size_t n) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace bergman
