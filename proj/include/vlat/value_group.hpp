#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace vlat {

// Element of the value group Z or Z x Z (lexicographic), or the top element.
class ValGroupElem {
public:
    ValGroupElem() = default;

    static ValGroupElem of(int64_t a) { return ValGroupElem(1, a, 0, false); }
    static ValGroupElem of(int64_t a, int64_t b) { return ValGroupElem(2, a, b, false); }
    static ValGroupElem zero(int rank) { return ValGroupElem(rank, 0, 0, false); }
    static ValGroupElem top(int rank) { return ValGroupElem(rank, 0, 0, true); }

    int rank() const { return rank_; }
    bool is_top() const { return top_; }
    int64_t operator[](int i) const { return i == 0 ? a_ : b_; }

    ValGroupElem operator+(const ValGroupElem& o) const;
    ValGroupElem operator-(const ValGroupElem& o) const;
    ValGroupElem operator-() const;
    ValGroupElem times(int64_t k) const;

    // Divisibility by 2 inside the group, and the half when it exists.
    bool is_even() const;
    ValGroupElem half() const;

    bool is_zero() const { return !top_ && a_ == 0 && b_ == 0; }
    bool positive() const;

    std::string to_string() const;

    std::strong_ordering operator<=>(const ValGroupElem& o) const;
    bool operator==(const ValGroupElem& o) const;

private:
    ValGroupElem(int rank, int64_t a, int64_t b, bool top) : rank_(rank), a_(a), b_(b), top_(top) {}
    void check_same(const ValGroupElem& o) const;

    int rank_ = 1;
    int64_t a_ = 0;
    int64_t b_ = 0;
    bool top_ = false;
};

std::strong_ordering vg_compare(const ValGroupElem& a, const ValGroupElem& b);

}  // namespace vlat
