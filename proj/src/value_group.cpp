#include "vlat/value_group.hpp"

#include "vlat/errors.hpp"

namespace vlat {

void ValGroupElem::check_same(const ValGroupElem& o) const {
    if (rank_ != o.rank_) throw ConfigError("value groups of different rank");
}

ValGroupElem ValGroupElem::operator+(const ValGroupElem& o) const {
    check_same(o);
    if (top_ || o.top_) return top(rank_);
    return ValGroupElem(rank_, a_ + o.a_, b_ + o.b_, false);
}

ValGroupElem ValGroupElem::operator-(const ValGroupElem& o) const {
    check_same(o);
    if (o.top_) throw DomainError("cannot subtract the top element");
    if (top_) return *this;
    return ValGroupElem(rank_, a_ - o.a_, b_ - o.b_, false);
}

ValGroupElem ValGroupElem::operator-() const {
    if (top_) throw DomainError("cannot negate the top element");
    return ValGroupElem(rank_, -a_, -b_, false);
}

ValGroupElem ValGroupElem::times(int64_t k) const {
    if (top_) {
        if (k <= 0) throw DomainError("non-positive multiple of the top element");
        return *this;
    }
    return ValGroupElem(rank_, a_ * k, b_ * k, false);
}

bool ValGroupElem::is_even() const {
    if (top_) return true;
    return a_ % 2 == 0 && b_ % 2 == 0;
}

ValGroupElem ValGroupElem::half() const {
    if (!is_even()) throw DomainError("value " + to_string() + " is not divisible by 2");
    if (top_) return *this;
    return ValGroupElem(rank_, a_ / 2, b_ / 2, false);
}

bool ValGroupElem::positive() const {
    return *this > zero(rank_);
}

std::string ValGroupElem::to_string() const {
    if (top_) return "inf";
    if (rank_ == 1) return std::to_string(a_);
    return "(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
}

std::strong_ordering ValGroupElem::operator<=>(const ValGroupElem& o) const {
    check_same(o);
    if (top_ || o.top_) {
        if (top_ && o.top_) return std::strong_ordering::equal;
        return top_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (auto c = a_ <=> o.a_; c != 0) return c;
    return b_ <=> o.b_;
}

bool ValGroupElem::operator==(const ValGroupElem& o) const {
    return (*this <=> o) == 0;
}

std::strong_ordering vg_compare(const ValGroupElem& a, const ValGroupElem& b) {
    return a <=> b;
}

}  // namespace vlat
