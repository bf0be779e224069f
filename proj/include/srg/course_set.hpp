#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace srg {

// Dense bitset over course indices of one instance. Sized once; all sets that
// are combined must come from the same instance (same capacity).
class CourseSet {
public:
    CourseSet() = default;
    explicit CourseSet(std::size_t capacity) : words_((capacity + 63) / 64, 0) {}

    void insert(std::size_t course) { words_[course / 64] |= (std::uint64_t{1} << (course % 64)); }

    [[nodiscard]] bool contains(std::size_t course) const {
        return (words_[course / 64] >> (course % 64)) & 1u;
    }

    [[nodiscard]] int count() const {
        int n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    // Number of courses in `other` not already present here.
    [[nodiscard]] int count_added(const CourseSet& other) const {
        int n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(other.words_[i] & ~words_[i]);
        return n;
    }

    CourseSet& operator|=(const CourseSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    friend bool operator==(const CourseSet&, const CourseSet&) = default;

private:
    std::vector<std::uint64_t> words_;
};

}  // namespace srg
