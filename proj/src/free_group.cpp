#include "demuskin/free_group.hpp"

#include <algorithm>

namespace demuskin {

Word Word::generator(int g, int exp) {
    Word w;
    w.append(g, exp);
    return w;
}

std::size_t Word::letter_length() const {
    std::size_t n = 0;
    for (auto& [g, e] : runs_) n += static_cast<std::size_t>(e < 0 ? -e : e);
    return n;
}

int Word::max_generator() const {
    int mg = -1;
    for (auto& [g, e] : runs_) mg = std::max(mg, g);
    return mg;
}

Word& Word::append(int g, int exp) {
    if (g < 0) throw std::invalid_argument("Word::append: negative generator index");
    if (exp == 0) return *this;
    if (!runs_.empty() && runs_.back().first == g) {
        runs_.back().second += exp;
        if (runs_.back().second == 0) runs_.pop_back();
    } else {
        runs_.emplace_back(g, exp);
    }
    return *this;
}

Word Word::inverse() const {
    Word w;
    for (auto it = runs_.rbegin(); it != runs_.rend(); ++it) w.append(it->first, -it->second);
    return w;
}

Word Word::pow(int e) const {
    Word base = e < 0 ? inverse() : *this;
    int k = e < 0 ? -e : e;
    Word r;
    for (int i = 0; i < k; ++i) r = r * base;
    return r;
}

Word operator*(const Word& a, const Word& b) {
    Word r = a;
    for (auto& [g, e] : b.runs_) r.append(g, e);
    return r;
}

std::string Word::str() const {
    if (runs_.empty()) return "1";
    std::string s;
    for (auto& [g, e] : runs_) {
        if (!s.empty()) s += ' ';
        s += "x" + std::to_string(g);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

Word commutator(const Word& a, const Word& b) { return a.inverse() * b.inverse() * a * b; }

GroupRingElt::GroupRingElt(const Word& w, std::int64_t c) {
    if (c != 0) terms_[w] = c;
}

GroupRingElt& GroupRingElt::add(const Word& w, std::int64_t c) {
    if (c == 0) return *this;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_[w] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
    return *this;
}

GroupRingElt operator+(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt r = a;
    for (auto& [w, c] : b.terms_) r.add(w, c);
    return r;
}

GroupRingElt operator-(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt r = a;
    for (auto& [w, c] : b.terms_) r.add(w, -c);
    return r;
}

GroupRingElt operator*(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt r;
    for (auto& [wa, ca] : a.terms_)
        for (auto& [wb, cb] : b.terms_) r.add(wa * wb, ca * cb);
    return r;
}

GroupRingElt operator*(const Word& w, const GroupRingElt& b) {
    GroupRingElt r;
    for (auto& [wb, cb] : b.terms_) r.add(w * wb, cb);
    return r;
}

std::string GroupRingElt::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto& [w, c] : terms_) {
        if (!s.empty()) s += " + ";
        if (c != 1) s += std::to_string(c) + "*";
        s += "(" + w.str() + ")";
    }
    return s;
}

namespace {

bool is_prime_power(std::uint64_t q, std::uint64_t& prime) {
    if (q < 2) return false;
    std::uint64_t d = 2;
    while (d * d <= q && q % d != 0) ++d;
    prime = d * d <= q ? d : q;
    while (q % prime == 0) q /= prime;
    return q == 1;
}

}  // namespace

DemuskinPresentation build_relator(int n, std::uint64_t q) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("build_relator: n must be even and >= 2");
    std::uint64_t prime = 0;
    if (!is_prime_power(q, prime) || prime == 1)
        throw std::invalid_argument("build_relator: q must be a prime power >= 2");
    DemuskinPresentation pres;
    pres.n = n;
    pres.q = q;
    pres.q_prime = prime;
    Word r = Word::generator(0, static_cast<int>(q));
    for (int k = 0; k <= n / 2; ++k)
        r = r * commutator(Word::generator(2 * k), Word::generator(2 * k + 1));
    pres.relator = r;
    return pres;
}

GroupRingElt fox_derivative(const Word& w, int i) {
    if (i < 0) throw std::invalid_argument("fox_derivative: generator index out of range");
    GroupRingElt d;       // derivative of the processed prefix
    Word prefix;          // the processed prefix itself
    for (auto& [g, e] : w.runs()) {
        if (g == i) {
            // ∂(x^e): 1 + x + ... + x^{e-1} for e>0; -(x^-1 + ... + x^e) for e<0
            if (e > 0) {
                for (int k = 0; k < e; ++k) d.add(prefix * Word::generator(g, k), 1);
            } else {
                for (int k = -1; k >= e; --k) d.add(prefix * Word::generator(g, k), -1);
            }
        }
        prefix.append(g, e);
    }
    return d;
}

Matrix evaluate_word(const Word& w, const std::vector<Matrix>& actions, const RingModulus& m) {
    if (actions.empty()) throw std::invalid_argument("evaluate_word: no actions");
    std::size_t dim = actions[0].rows();
    Matrix r = Matrix::identity(dim);
    for (auto& [g, e] : w.runs()) {
        if (g >= static_cast<int>(actions.size()))
            throw std::invalid_argument("evaluate_word: generator index out of range");
        Matrix base = e >= 0 ? actions[g] : mat_inv(actions[g], m);
        r = mat_mul(r, mat_pow(base, static_cast<std::uint64_t>(e < 0 ? -e : e), m), m);
    }
    return r;
}

Matrix evaluate(const GroupRingElt& e, const std::vector<Matrix>& actions, const RingModulus& m,
                std::size_t dim) {
    for (auto& a : actions)
        if (a.rows() != dim || a.cols() != dim)
            throw std::invalid_argument("evaluate: action dimension mismatch");
    Matrix r(dim, dim);
    for (auto& [w, c] : e.terms()) {
        Matrix t = evaluate_word(w, actions, m);
        r = mat_add(r, mat_scale(t, mod_of(c, m), m), m);
    }
    return r;
}

}  // namespace demuskin
