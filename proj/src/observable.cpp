/*
   Copyright 2026 The langevin-stopped authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "langevin/observable.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "langevin/errors.hpp"

namespace langevin {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidInput("malformed number '" + std::string(text) + "'");
    return v;
}

// Recursive-descent parser over the polynomial grammar
//   expr   := ['-'|'+'] term (('+'|'-') term)*
//   term   := item ('*' item)*
//   item   := number | ('x'|'y') digits ['^' digits]
class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    std::vector<Monomial> parse() {
        std::vector<Monomial> terms;
        skip();
        double sign = 1.0;
        if (peek() == '-' || peek() == '+') sign = take() == '-' ? -1.0 : 1.0;
        terms.push_back(term(sign));
        for (skip(); pos_ < text_.size(); skip()) {
            const char op = take();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            terms.push_back(term(op == '-' ? -1.0 : 1.0));
        }
        return terms;
    }

private:
    Monomial term(double sign) {
        Monomial m{sign, {}};
        item(m);
        for (skip(); peek() == '*'; skip()) {
            take();
            item(m);
        }
        return m;
    }

    void item(Monomial& m) {
        skip();
        const char c = peek();
        if (c == 'x' || c == 'y') {
            take();
            const Variable v{c == 'y', digits()};
            unsigned power = 1;
            skip();
            if (peek() == '^') {
                take();
                power = static_cast<unsigned>(digits());
                if (power == 0) fail("zero exponent");
            }
            auto it = std::find_if(m.factors.begin(), m.factors.end(),
                                   [&](const auto& f) { return f.first == v; });
            if (it != m.factors.end())
                it->second += power;
            else
                m.factors.emplace_back(v, power);
        } else {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                    text_[pos_] == 'e' || text_[pos_] == 'E' ||
                    ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
                     (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
                ++pos_;
            if (pos_ == start) fail("expected a number or variable");
            m.coefficient *= parse_number(text_.substr(start, pos_ - start));
        }
    }

    std::size_t digits() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected digits");
        std::size_t v = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, v);
        return v;
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }
    [[noreturn]] void fail(const char* what) const {
        throw InvalidInput("polynomial '" + std::string(text_) + "': " + what + " at offset " +
                           std::to_string(pos_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double ipow(double v, unsigned p) {
    double r = 1.0;
    for (unsigned i = 0; i < p; ++i) r *= v;
    return r;
}

}  // namespace

Polynomial::Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

Polynomial Polynomial::parse(std::string_view text) {
    if (trim(text).empty()) throw InvalidInput("empty polynomial");
    return Polynomial(PolyParser(text).parse());
}

Polynomial Polynomial::constant(double c) { return Polynomial({Monomial{c, {}}}); }

double Polynomial::evaluate(const State& s) const {
    if (min_dim() > s.dim()) throw InvalidInput("polynomial uses a coordinate beyond the state");
    double total = 0.0;
    for (const auto& m : terms_) {
        double v = m.coefficient;
        for (const auto& [var, p] : m.factors) v *= ipow(var.velocity ? s.y[var.index] : s.x[var.index], p);
        total += v;
    }
    return total;
}

Polynomial Polynomial::derivative(Variable v) const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        auto it = std::find_if(m.factors.begin(), m.factors.end(),
                               [&](const auto& f) { return f.first == v; });
        if (it == m.factors.end()) continue;
        Monomial d = m;
        auto dit = d.factors.begin() + (it - m.factors.begin());
        d.coefficient *= static_cast<double>(dit->second);
        if (--dit->second == 0) d.factors.erase(dit);
        out.push_back(std::move(d));
    }
    return Polynomial(std::move(out));
}

bool Polynomial::is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Monomial& m) { return m.factors.empty(); });
}

bool Polynomial::is_affine() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) {
        return m.factors.empty() || (m.factors.size() == 1 && m.factors[0].second == 1);
    });
}

std::size_t Polynomial::min_dim() const {
    std::size_t n = 0;
    for (const auto& m : terms_)
        for (const auto& f : m.factors) n = std::max(n, f.first.index + 1);
    return n;
}

Observable Observable::of(ObservableKind kind) {
    Observable o;
    o.kind = kind;
    switch (kind) {
        case ObservableKind::hamiltonian: o.name = "hamiltonian"; break;
        case ObservableKind::potential_energy: o.name = "potential_energy"; break;
        case ObservableKind::kinetic_energy: o.name = "kinetic_energy"; break;
        case ObservableKind::first_coordinate:
            o.name = "first_coordinate";
            o.poly = Polynomial::parse("x0");
            break;
        case ObservableKind::exp_bh:
        case ObservableKind::polynomial:
            throw InvalidInput("observable kind needs a parameter");
    }
    return o;
}

Observable Observable::exp_bh(double b) {
    Observable o;
    o.kind = ObservableKind::exp_bh;
    o.b = b;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, b);
    o.name = "exp_bh(" + std::string(buf, res.ptr) + ")";
    return o;
}

Observable Observable::polynomial(std::string_view text) {
    Observable o;
    o.kind = ObservableKind::polynomial;
    o.poly = Polynomial::parse(text);
    o.name = "poly(" + std::string(trim(text)) + ")";
    return o;
}

Observable Observable::constant(double c) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, c);
    return polynomial(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

Observable Observable::parse(std::string_view spec) {
    spec = trim(spec);
    if (spec == "hamiltonian") return of(ObservableKind::hamiltonian);
    if (spec == "potential_energy") return of(ObservableKind::potential_energy);
    if (spec == "kinetic_energy") return of(ObservableKind::kinetic_energy);
    if (spec == "first_coordinate") return of(ObservableKind::first_coordinate);
    auto inner = [&](std::string_view prefix) -> std::string_view {
        if (spec.size() > prefix.size() + 1 && spec.substr(0, prefix.size()) == prefix &&
            spec[prefix.size()] == '(' && spec.back() == ')')
            return spec.substr(prefix.size() + 1, spec.size() - prefix.size() - 2);
        return {};
    };
    if (auto arg = inner("exp_bh"); !arg.empty()) return exp_bh(parse_number(arg));
    if (auto arg = inner("poly"); !arg.empty()) return polynomial(arg);
    throw InvalidInput("unknown observable '" + std::string(spec) + "'");
}

double Observable::operator()(const Potential& potential, const State& s) const {
    switch (kind) {
        case ObservableKind::hamiltonian: return potential.hamiltonian(s);
        case ObservableKind::potential_energy: return potential.energy(s.x);
        case ObservableKind::kinetic_energy: return kinetic_energy(s);
        case ObservableKind::first_coordinate: return s.x.at(0);
        case ObservableKind::exp_bh: return std::exp(b * potential.hamiltonian(s));
        case ObservableKind::polynomial: return poly.evaluate(s);
    }
    return 0.0;
}

std::vector<Observable> parse_observables(std::string_view list) {
    std::vector<Observable> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= list.size(); ++i) {
        const char c = i < list.size() ? list[i] : ',';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            const auto item = trim(list.substr(start, i - start));
            if (!item.empty()) out.push_back(Observable::parse(item));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace langevin
