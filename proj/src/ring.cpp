#include "hjelmslev/ring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace hjelmslev {

namespace {

struct Label {
    RingKind kind;
    int p, r, s;
};

const std::map<std::string, Label, std::less<>>& label_table() {
    static const std::map<std::string, Label, std::less<>> table = {
        {"F2", {RingKind::Field, 2, 1, 0}},
        {"F3", {RingKind::Field, 3, 1, 0}},
        {"F4", {RingKind::Field, 2, 2, 0}},
        {"F5", {RingKind::Field, 5, 1, 0}},
        {"Z4", {RingKind::IntegersModSquare, 2, 1, 0}},
        {"S2", {RingKind::SkewDualNumbers, 2, 1, 0}},
        {"Z9", {RingKind::IntegersModSquare, 3, 1, 0}},
        {"S3", {RingKind::SkewDualNumbers, 3, 1, 0}},
        {"G4", {RingKind::GaloisRing, 2, 2, 0}},
        {"S4", {RingKind::SkewDualNumbers, 2, 2, 0}},
        {"T4", {RingKind::SkewDualNumbers, 2, 2, 1}},
        {"Z25", {RingKind::IntegersModSquare, 5, 1, 0}},
        {"S5", {RingKind::SkewDualNumbers, 5, 1, 0}},
    };
    return table;
}

int ipow(int base, int e) {
    int v = 1;
    while (e-- > 0) v *= base;
    return v;
}

// Z_n[Y]/(Y^2 + Y + 1), element a + b*y stored at a + n*b.
void quadratic_extension_tables(int n, std::vector<Element>& add, std::vector<Element>& mul) {
    const int order = n * n;
    add.assign(order * order, 0);
    mul.assign(order * order, 0);
    auto md = [n](int v) { return ((v % n) + n) % n; };
    for (int x = 0; x < order; ++x) {
        const int a0 = x % n, a1 = x / n;
        for (int y = 0; y < order; ++y) {
            const int b0 = y % n, b1 = y / n;
            add[x * order + y] = static_cast<Element>(md(a0 + b0) + n * md(a1 + b1));
            // y^2 = -1 - y
            const int c0 = md(a0 * b0 - a1 * b1);
            const int c1 = md(a0 * b1 + a1 * b0 - a1 * b1);
            mul[x * order + y] = static_cast<Element>(c0 + n * c1);
        }
    }
}

void cyclic_tables(int n, std::vector<Element>& add, std::vector<Element>& mul) {
    add.assign(n * n, 0);
    mul.assign(n * n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            add[x * n + y] = static_cast<Element>((x + y) % n);
            mul[x * n + y] = static_cast<Element>((x * y) % n);
        }
}

Element power(const RingTable& f, Element a, int e) {
    Element v = 1;
    while (e-- > 0) v = f.mul(v, a);
    return v;
}

Element frobenius_power(const RingTable& f, Element a, int s) {
    const int p = f.spec().p;
    for (int i = 0; i < s; ++i) a = power(f, a, p);
    return a;
}

RingPtr build_field(int p, int r, const std::string& name) {
    RingSpec spec{RingKind::Field, p, r, 0, ipow(p, r), 1, name};
    std::vector<Element> add, mul;
    if (r == 1)
        cyclic_tables(p, add, mul);
    else if (r == 2)
        quadratic_extension_tables(p, add, mul);
    else
        throw Error("unsupported field degree");
    return std::make_shared<const RingTable>(RingTable::from_tables(spec, std::move(add), std::move(mul)));
}

std::string trim_parens(std::string_view s) {
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') return std::string(s.substr(1, s.size() - 2));
    return std::string(s);
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

const std::vector<std::string>& supported_rings() {
    static const std::vector<std::string> names = {"F2", "F3", "F4", "F5", "Z4", "S2", "Z9",
                                                   "S3", "G4", "S4", "T4", "Z25", "S5"};
    return names;
}

Element RingTable::inv(Element a) const {
    if (!is_unit(a)) throw Error("element " + format(a) + " is not a unit in " + name());
    return inv_[a];
}

RingTable RingTable::from_tables(RingSpec spec, std::vector<Element> add, std::vector<Element> mul) {
    RingTable t;
    t.spec_ = std::move(spec);
    t.order_ = t.spec_.order();
    const int n = t.order_;
    if (static_cast<int>(add.size()) != n * n || static_cast<int>(mul.size()) != n * n)
        throw Error("table size mismatch for " + t.spec_.name);
    t.add_ = std::move(add);
    t.mul_ = std::move(mul);
    t.neg_.assign(n, 0);
    t.inv_.assign(n, 0);
    t.unit_.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (t.add_[a * n + b] == 0) t.neg_[a] = static_cast<Element>(b);
            if (t.mul_[a * n + b] == 1 && t.mul_[b * n + a] == 1) {
                t.inv_[a] = static_cast<Element>(b);
                t.unit_[a] = 1;
            }
        }
    }
    t.phi_.resize(n);
    t.lift_.resize(n);
    for (int a = 0; a < n; ++a) t.phi_[a] = t.lift_[a] = static_cast<Element>(a);
    return t;
}

RingPtr build_ring(std::string_view name) {
    const auto it = label_table().find(name);
    if (it == label_table().end()) throw Error("unknown ring label '" + std::string(name) + "'");
    const Label lab = it->second;
    const int p = lab.p, r = lab.r, q = ipow(p, r);
    const std::string label(name);

    if (lab.kind == RingKind::Field) {
        RingTable t = *build_field(p, r, label);
        for (int g = 1; g < q; ++g) {
            int ord = 1;
            for (Element x = static_cast<Element>(g); x != 1; x = t.mul(x, static_cast<Element>(g))) ++ord;
            if (ord == q - 1) {
                t.primitive_ = static_cast<Element>(g);
                break;
            }
        }
        if (r > 1) {
            ElementMap frob(q);
            for (int a = 0; a < q; ++a) frob[a] = power(t, static_cast<Element>(a), p);
            t.aut_gens_.push_back(frob);
        }
        for (const auto& g : t.aut_gens_)
            if (!preserves_ring_structure(t, g)) throw Error("automorphism candidate rejected for " + label);
        t.aut_group_ = close_element_maps(q, t.aut_gens_);
        return std::make_shared<const RingTable>(std::move(t));
    }

    const RingPtr field = build_ring(std::string("F") + std::to_string(q));
    RingSpec spec{lab.kind, p, r, lab.s, q, 2, label};
    std::vector<Element> add, mul;
    const int n = q * q;

    switch (lab.kind) {
        case RingKind::IntegersModSquare:
            cyclic_tables(p * p, add, mul);
            break;
        case RingKind::GaloisRing:
            quadratic_extension_tables(p * p, add, mul);
            break;
        case RingKind::SkewDualNumbers: {
            add.assign(n * n, 0);
            mul.assign(n * n, 0);
            for (int x = 0; x < n; ++x) {
                const auto a = static_cast<Element>(x % q), b = static_cast<Element>(x / q);
                for (int y = 0; y < n; ++y) {
                    const auto c = static_cast<Element>(y % q), d = static_cast<Element>(y / q);
                    add[x * n + y] = static_cast<Element>(field->add(a, c) + q * field->add(b, d));
                    // (a + bX)(c + dX) = ac + (ad + b sigma(c)) X
                    const Element lo = field->mul(a, c);
                    const Element hi = field->add(field->mul(a, d), field->mul(b, frobenius_power(*field, c, lab.s)));
                    mul[x * n + y] = static_cast<Element>(lo + q * hi);
                }
            }
            break;
        }
        case RingKind::Field:
            break;
    }

    RingTable t = RingTable::from_tables(spec, std::move(add), std::move(mul));
    t.residue_ = field;
    for (int a = 0; a < n; ++a) {
        switch (lab.kind) {
            case RingKind::IntegersModSquare:
                t.phi_[a] = static_cast<Element>(a % p);
                break;
            case RingKind::GaloisRing: {
                const int n4 = p * p;
                t.phi_[a] = static_cast<Element>((a % n4) % p + p * ((a / n4) % p));
                break;
            }
            case RingKind::SkewDualNumbers:
                t.phi_[a] = static_cast<Element>(a % q);
                break;
            case RingKind::Field:
                break;
        }
    }
    t.lift_.assign(q, 0);
    for (int x = 0; x < q; ++x) {
        if (lab.kind == RingKind::GaloisRing)
            t.lift_[x] = static_cast<Element>(x % p + p * p * (x / p));
        else
            t.lift_[x] = static_cast<Element>(x);
    }
    t.radical_ = lab.kind == RingKind::SkewDualNumbers ? static_cast<Element>(q) : static_cast<Element>(p);
    t.primitive_ = t.lift_[field->primitive_unit()];

    auto dual = [q](Element a, Element b) { return static_cast<Element>(a + q * b); };
    switch (lab.kind) {
        case RingKind::IntegersModSquare:
            break;
        case RingKind::GaloisRing: {
            // Fix Z_{p^2}, send y to y^2.
            const Element y = static_cast<Element>(p * p);
            const Element y2 = t.mul(y, y);
            ElementMap g(n);
            for (int x = 0; x < n; ++x) {
                const auto a = static_cast<Element>(x % (p * p)), b = static_cast<Element>(x / (p * p));
                g[x] = t.add(a, t.mul(b, y2));
            }
            t.aut_gens_.push_back(g);
            break;
        }
        case RingKind::SkewDualNumbers: {
            if (lab.s == 0 && q > 2) {
                const Element u = field->primitive_unit();
                ElementMap g(n);
                for (int x = 0; x < n; ++x)
                    g[x] = dual(static_cast<Element>(x % q), field->mul(u, static_cast<Element>(x / q)));
                t.aut_gens_.push_back(g);
            }
            if (r > 1) {
                ElementMap g(n);
                for (int x = 0; x < n; ++x)
                    g[x] = dual(power(*field, static_cast<Element>(x % q), p),
                                power(*field, static_cast<Element>(x / q), p));
                t.aut_gens_.push_back(g);
            }
            break;
        }
        case RingKind::Field:
            break;
    }
    for (const auto& g : t.aut_gens_)
        if (!preserves_ring_structure(t, g)) throw Error("automorphism candidate rejected for " + label);
    t.aut_group_ = close_element_maps(n, t.aut_gens_);
    return std::make_shared<const RingTable>(std::move(t));
}

bool preserves_ring_structure(const RingTable& ring, const ElementMap& map) {
    const int n = ring.order();
    if (static_cast<int>(map.size()) != n) return false;
    std::vector<bool> hit(n, false);
    for (Element v : map) {
        if (v >= n || hit[v]) return false;
        hit[v] = true;
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const auto x = static_cast<Element>(a), y = static_cast<Element>(b);
            if (map[ring.add(x, y)] != ring.add(map[x], map[y])) return false;
            if (map[ring.mul(x, y)] != ring.mul(map[x], map[y])) return false;
        }
    return true;
}

std::vector<ElementMap> close_element_maps(int order, const std::vector<ElementMap>& gens) {
    ElementMap id(order);
    for (int i = 0; i < order; ++i) id[i] = static_cast<Element>(i);
    std::vector<ElementMap> group{id};
    std::set<ElementMap> seen{id};
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (const auto& g : gens) {
            ElementMap h(order);
            for (int x = 0; x < order; ++x) h[x] = g[group[i][x]];
            if (seen.insert(h).second) group.push_back(std::move(h));
        }
    }
    return group;
}

std::string RingTable::format(Element a) const {
    const RingSpec& s = spec_;
    auto field_str = [](int q, Element x) -> std::string {
        if (q == 4) {
            static const char* names[] = {"0", "1", "w", "w+1"};
            return names[x];
        }
        return std::to_string(x);
    };
    switch (s.kind) {
        case RingKind::Field:
            return field_str(s.q, a);
        case RingKind::IntegersModSquare:
            return std::to_string(a);
        case RingKind::GaloisRing: {
            const int n = s.p * s.p;
            const int lo = a % n, hi = a / n;
            if (hi == 0) return std::to_string(lo);
            std::string ys = hi == 1 ? "y" : std::to_string(hi) + "*y";
            return lo == 0 ? ys : std::to_string(lo) + "+" + ys;
        }
        case RingKind::SkewDualNumbers: {
            const auto lo = static_cast<Element>(a % s.q), hi = static_cast<Element>(a / s.q);
            if (hi == 0) return field_str(s.q, lo);
            std::string coef = hi == 1 ? "" : field_str(s.q, hi);
            if (coef.find('+') != std::string::npos) coef = "(" + coef + ")";
            std::string out = coef + "X";
            if (lo != 0) out += "+" + field_str(s.q, lo);
            return out;
        }
    }
    return "?";
}

Element RingTable::parse(std::string_view token) const {
    auto fail = [&]() -> Error { return Error("malformed element token '" + std::string(token) + "' for " + name()); };
    if (token.empty()) throw fail();
    const RingSpec& s = spec_;

    auto parse_int_mod = [&](std::string_view t, int mod) -> int {
        bool negate = false;
        if (!t.empty() && t.front() == '-') {
            negate = true;
            t.remove_prefix(1);
        }
        if (!all_digits(t) || t.size() > 4) throw fail();
        const int v = std::stoi(std::string(t));
        if (v >= mod) throw fail();
        return negate ? (mod - v) % mod : v;
    };
    auto parse_f4 = [&](std::string_view t) -> Element {
        const std::string u = trim_parens(t);
        if (u == "0") return 0;
        if (u == "1") return 1;
        if (u == "w") return 2;
        if (u == "w+1" || u == "1+w") return 3;
        throw fail();
    };
    auto parse_field = [&](std::string_view t) -> Element {
        if (s.q == 4) return parse_f4(t);
        return static_cast<Element>(parse_int_mod(t, s.q));
    };

    switch (s.kind) {
        case RingKind::Field:
            return parse_field(token);
        case RingKind::IntegersModSquare:
            return static_cast<Element>(parse_int_mod(token, order_));
        case RingKind::GaloisRing: {
            const int n = s.p * s.p;
            int lo = 0, hi = 0;
            std::size_t pos = 0;
            bool any = false;
            while (pos <= token.size()) {
                std::size_t next = token.find('+', pos);
                if (next == std::string_view::npos) next = token.size();
                std::string_view term = token.substr(pos, next - pos);
                if (term.empty()) throw fail();
                if (term.back() == 'y') {
                    term.remove_suffix(1);
                    if (!term.empty() && term.back() == '*') term.remove_suffix(1);
                    hi += term.empty() ? 1 : parse_int_mod(term, n);
                } else {
                    lo += parse_int_mod(term, n);
                }
                any = true;
                pos = next + 1;
            }
            if (!any) throw fail();
            return static_cast<Element>(lo % n + n * (hi % n));
        }
        case RingKind::SkewDualNumbers: {
            const std::size_t x = token.find('X');
            if (x == std::string_view::npos) return parse_field(token);
            std::string_view coef = token.substr(0, x);
            std::string_view rest = token.substr(x + 1);
            const Element hi = coef.empty() ? Element{1} : parse_field(coef);
            Element lo = 0;
            if (!rest.empty()) {
                if (rest.front() != '+') throw fail();
                lo = parse_field(rest.substr(1));
            }
            return static_cast<Element>(lo + s.q * hi);
        }
    }
    throw fail();
}

}  // namespace hjelmslev
