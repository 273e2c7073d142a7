#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "demuskin/zmod.hpp"

namespace demuskin {

// Freely reduced word on generators x_0..x_{k-1}, stored run-length as
// (generator, signed exponent) with adjacent runs merged eagerly.
class Word {
  public:
    Word() = default;

    static Word generator(int g, int exp = 1);

    const std::vector<std::pair<int, int>>& runs() const { return runs_; }
    bool empty() const { return runs_.empty(); }
    std::size_t letter_length() const;
    int max_generator() const;

    Word& append(int g, int exp);  // multiply by x_g^exp on the right, reducing
    Word inverse() const;
    Word pow(int e) const;

    friend Word operator*(const Word& a, const Word& b);
    auto operator<=>(const Word&) const = default;

    std::string str() const;  // e.g. "x0^5 x1^-1"

  private:
    std::vector<std::pair<int, int>> runs_;
};

Word commutator(const Word& a, const Word& b);  // (a,b) = a^-1 b^-1 a b

// Finite Z-linear combination of words.
class GroupRingElt {
  public:
    GroupRingElt() = default;
    explicit GroupRingElt(const Word& w, std::int64_t c = 1);

    static GroupRingElt zero() { return {}; }
    static GroupRingElt one() { return GroupRingElt(Word{}); }

    const std::map<Word, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    GroupRingElt& add(const Word& w, std::int64_t c);
    friend GroupRingElt operator+(const GroupRingElt& a, const GroupRingElt& b);
    friend GroupRingElt operator-(const GroupRingElt& a, const GroupRingElt& b);
    friend GroupRingElt operator*(const GroupRingElt& a, const GroupRingElt& b);
    friend GroupRingElt operator*(const Word& w, const GroupRingElt& b);
    bool operator==(const GroupRingElt&) const = default;

    std::string str() const;

  private:
    std::map<Word, std::int64_t> terms_;
};

// Demuškin presentation <x_0..x_{n+1} | x_0^q (x_0,x_1)(x_2,x_3)...(x_n,x_{n+1})>.
struct DemuskinPresentation {
    int n = 0;               // even, >= 2; number of generators is n+2
    std::uint64_t q = 0;     // relator exponent, a prime power
    std::uint64_t q_prime = 0;  // the prime of which q is a power
    Word relator;

    int num_generators() const { return n + 2; }
};

DemuskinPresentation build_relator(int n, std::uint64_t q);

// ∂w/∂x_i with ∂(uv) = ∂u + u·∂v, ∂x_i/∂x_i = 1, ∂x_i^{-1}/∂x_i = -x_i^{-1}.
GroupRingElt fox_derivative(const Word& w, int i);

// Word and group-ring evaluation through a matrix representation of the free
// group; one invertible action matrix per generator.
Matrix evaluate_word(const Word& w, const std::vector<Matrix>& actions, const RingModulus& m);
Matrix evaluate(const GroupRingElt& e, const std::vector<Matrix>& actions, const RingModulus& m,
                std::size_t dim);

}  // namespace demuskin
