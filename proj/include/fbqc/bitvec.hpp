// Copyright 2026 The fbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fbqc {

/// Dynamically sized bit vector packed into 64-bit words.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {
    }

    std::size_t size() const {
        return n_;
    }
    std::size_t num_words() const {
        return words_.size();
    }
    const std::uint64_t *data() const {
        return words_.data();
    }
    std::uint64_t *data() {
        return words_.data();
    }

    bool get(std::size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    bool operator[](std::size_t k) const {
        return get(k);
    }
    void set(std::size_t k, bool v = true) {
        std::uint64_t m = std::uint64_t{1} << (k & 63);
        if (v) {
            words_[k >> 6] |= m;
        } else {
            words_[k >> 6] &= ~m;
        }
    }
    void flip(std::size_t k) {
        words_[k >> 6] ^= std::uint64_t{1} << (k & 63);
    }
    void clear() {
        std::fill(words_.begin(), words_.end(), 0);
    }

    BitVec &operator^=(const BitVec &o) {
        check_size(o);
        for (std::size_t w = 0; w < words_.size(); w++) {
            words_[w] ^= o.words_[w];
        }
        return *this;
    }
    BitVec &operator&=(const BitVec &o) {
        check_size(o);
        for (std::size_t w = 0; w < words_.size(); w++) {
            words_[w] &= o.words_[w];
        }
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec &b) {
        a ^= b;
        return a;
    }
    friend BitVec operator&(BitVec a, const BitVec &b) {
        a &= b;
        return a;
    }
    bool operator==(const BitVec &o) const = default;

    bool any() const {
        for (auto w : words_) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) {
            c += std::popcount(w);
        }
        return c;
    }
    /// Parity of the bitwise AND with another vector.
    bool dot(const BitVec &o) const {
        check_size(o);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); w++) {
            acc ^= words_[w] & o.words_[w];
        }
        return std::popcount(acc) & 1;
    }
    /// Index of the lowest set bit, or size() if none.
    std::size_t first_set() const {
        for (std::size_t w = 0; w < words_.size(); w++) {
            if (words_[w]) {
                return w * 64 + std::countr_zero(words_[w]);
            }
        }
        return n_;
    }
    std::vector<std::size_t> ones() const {
        std::vector<std::size_t> out;
        for (std::size_t w = 0; w < words_.size(); w++) {
            std::uint64_t v = words_[w];
            while (v) {
                out.push_back(w * 64 + std::countr_zero(v));
                v &= v - 1;
            }
        }
        return out;
    }

   private:
    void check_size(const BitVec &o) const {
        if (o.n_ != n_) {
            throw std::invalid_argument("BitVec size mismatch");
        }
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace fbqc
