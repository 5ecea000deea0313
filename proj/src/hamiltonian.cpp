#include "stellar/hamiltonian.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>

#include "stellar/errors.hpp"
#include "stellar/numeric.hpp"

namespace stellar {

namespace {

using Complex = std::complex<double>;

constexpr double kMaxSymArrangements = 1e5;

enum class Tok { Number, Sym, Sqrt, Pair, Factor, Times, Star, Plus, Minus, Slash, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
    double number = 0.0;
    Pauli factor = Pauli::I;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "end of input", line_, col_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
    }

    void advance(std::size_t count) {
        for (std::size_t k = 0; k < count; ++k, ++pos_) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

    Token make(Tok kind, std::size_t length) {
        Token t{kind, std::string(src_.substr(pos_, length)), line_, col_};
        advance(length);
        return t;
    }

    Token next() {
        const char c = src_[pos_];
        switch (c) {
            case '*': return make(Tok::Star, 1);
            case '+': return make(Tok::Plus, 1);
            case '-': return make(Tok::Minus, 1);
            case '/': return make(Tok::Slash, 1);
            case '(': return make(Tok::LParen, 1);
            case ')': return make(Tok::RParen, 1);
            case ',': return make(Tok::Comma, 1);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (starts_with("sym")) return make(Tok::Sym, 3);
        if (starts_with("sqrt")) return make(Tok::Sqrt, 4);
        if (c == 'H') return make(Tok::Pair, 1);
        if (c == 'x') return make(Tok::Times, 1);
        if (c == 'I' || c == 'X' || c == 'Y' || c == 'Z') {
            Token t = make(Tok::Factor, 1);
            t.factor = c == 'I' ? Pauli::I : c == 'X' ? Pauli::X : c == 'Y' ? Pauli::Y : Pauli::Z;
            return t;
        }
        if (starts_with("P0") || starts_with("P1")) {
            Token t = make(Tok::Factor, 2);
            t.factor = t.text == "P0" ? Pauli::P0 : Pauli::P1;
            return t;
        }
        std::size_t len = 1;
        while (pos_ + len < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_ + len]))) ++len;
        throw ParseError("unknown symbol", line_, col_, std::string(src_.substr(pos_, len)));
    }

    Token number() {
        auto is_digit = [&](std::size_t p) {
            return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
        };
        std::size_t end = pos_;
        while (is_digit(end)) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (is_digit(end)) ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
            if (is_digit(e)) {
                while (is_digit(e)) ++e;
                end = e;
            }
        }
        const std::string_view text = src_.substr(pos_, end - pos_);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
            throw ParseError("malformed number", line_, col_, std::string(text));
        Token t = make(Tok::Number, end - pos_);
        t.number = value;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    HamiltonianExpr run() {
        HamiltonianExpr expr;
        std::vector<const Token*> starts;
        starts.push_back(&peek());
        expr.terms.push_back(term(false));
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = take().kind == Tok::Minus;
            starts.push_back(&peek());
            expr.terms.push_back(term(minus));
        }
        if (peek().kind != Tok::End) fail("expected '+', '-' or end of input");

        const int n = expr.terms.front().arity();
        for (std::size_t t = 0; t < expr.terms.size(); ++t) {
            const Term& term = expr.terms[t];
            if (term.arity() != n) {
                const Token& at = *starts[t];
                throw ParseError("arity mismatch: term acts on " + std::to_string(term.arity()) +
                                     " qubits, first term on " + std::to_string(n) +
                                     (term.kind == Term::Kind::Pair || expr.terms.front().kind == Term::Kind::Pair
                                          ? " (H(i,j) is two-qubit only)"
                                          : ""),
                                 at.line, at.column, at.text);
            }
        }
        return expr;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        throw ParseError(message, t.line, t.column, t.text);
    }

    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(std::string("expected ") + what);
        return take();
    }

    Term term(bool negative) {
        Term t;
        t.negative = negative;
        // A unary sign, e.g. "A + -1*B".
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus)
            if (take().kind == Tok::Minus) t.negative = !t.negative;

        if (peek().kind == Tok::Number || peek().kind == Tok::Sqrt) {
            t.coefficient = coefficient();
            expect(Tok::Star, "'*' after coefficient");
        }
        switch (peek().kind) {
            case Tok::Sym: {
                take();
                t.kind = Term::Kind::Sym;
                expect(Tok::LParen, "'(' after sym");
                if (peek().kind != Tok::Factor) fail("expected a factor (I, X, Y, Z, P0, P1)");
                while (peek().kind == Tok::Factor) t.factors.push_back(take().factor);
                expect(Tok::RParen, "')' closing sym");
                break;
            }
            case Tok::Pair: {
                take();
                t.kind = Term::Kind::Pair;
                expect(Tok::LParen, "'(' after H");
                t.i = pauli_index();
                expect(Tok::Comma, "',' in H(i,j)");
                t.j = pauli_index();
                expect(Tok::RParen, "')' closing H(i,j)");
                break;
            }
            case Tok::Factor: {
                t.kind = Term::Kind::Product;
                t.factors.push_back(take().factor);
                while (peek().kind == Tok::Times) {
                    take();
                    if (peek().kind != Tok::Factor) fail("expected a factor (I, X, Y, Z, P0, P1)");
                    t.factors.push_back(take().factor);
                }
                break;
            }
            default:
                fail("expected a term: factor, sym(...) or H(i,j)");
        }
        return t;
    }

    int pauli_index() {
        const Token& tok = peek();
        if (tok.kind != Tok::Number || tok.number != std::floor(tok.number) || tok.number < 0 || tok.number > 3 ||
            tok.text.find_first_not_of("0123456789") != std::string::npos)
            fail("expected an index 0..3");
        return static_cast<int>(take().number);
    }

    std::pair<double, bool> operand() {
        if (peek().kind == Tok::Sqrt) {
            take();
            expect(Tok::LParen, "'(' after sqrt");
            const double v = expect(Tok::Number, "a number inside sqrt").number;
            expect(Tok::RParen, "')' closing sqrt");
            return {v, true};
        }
        return {expect(Tok::Number, "a number").number, false};
    }

    Coefficient coefficient() {
        Coefficient c;
        std::tie(c.numerator, c.sqrt_numerator) = operand();
        if (peek().kind == Tok::Slash) {
            take();
            const Token& at = peek();
            auto [den, root] = operand();
            if (den == 0.0) throw ParseError("division by zero", at.line, at.column, at.text);
            c.denominator = den;
            c.sqrt_denominator = root;
        }
        return c;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_operand(double v, bool root) {
    return root ? "sqrt(" + format_number(v) + ")" : format_number(v);
}

const char* pauli_name(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::X: return "X";
        case Pauli::Y: return "Y";
        case Pauli::Z: return "Z";
        case Pauli::P0: return "P0";
        case Pauli::P1: return "P1";
    }
    return "?";
}

// Adds scale * (factors[0] (x) ... (x) factors[n-1]) column by column: each
// factor maps a basis bit to at most one output bit.
void add_product(Eigen::MatrixXcd& m, const std::vector<Pauli>& factors, Complex scale) {
    const int n = static_cast<int>(factors.size());
    const std::uint64_t dim = std::uint64_t{1} << n;
    const Complex i(0.0, 1.0);
    for (std::uint64_t col = 0; col < dim; ++col) {
        std::uint64_t row = col;
        Complex amp = scale;
        for (int q = 0; q < n && amp != 0.0; ++q) {
            const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
            const bool one = (col & bit) != 0;
            switch (factors[q]) {
                case Pauli::I: break;
                case Pauli::X: row ^= bit; break;
                case Pauli::Y: row ^= bit; amp *= one ? -i : i; break;
                case Pauli::Z: if (one) amp = -amp; break;
                case Pauli::P0: if (one) amp = 0.0; break;
                case Pauli::P1: if (!one) amp = 0.0; break;
            }
        }
        if (amp != 0.0) m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += amp;
    }
}

double arrangement_count(std::vector<Pauli> factors) {
    std::sort(factors.begin(), factors.end());
    double count = factorial(static_cast<int>(factors.size()));
    for (std::size_t a = 0; a < factors.size();) {
        std::size_t b = a;
        while (b < factors.size() && factors[b] == factors[a]) ++b;
        count /= factorial(static_cast<int>(b - a));
        a = b;
    }
    return count;
}

Pauli sigma(int index) {
    static constexpr Pauli table[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    return table[index];
}

}  // namespace

double Coefficient::value() const {
    double v = sqrt_numerator ? std::sqrt(numerator) : numerator;
    if (denominator) v /= sqrt_denominator ? std::sqrt(*denominator) : *denominator;
    return v;
}

HamiltonianExpr parse_hamiltonian(std::string_view source) {
    return Parser(Lexer(source).run()).run();
}

std::string to_string(const HamiltonianExpr& expr) {
    std::string out;
    for (std::size_t t = 0; t < expr.terms.size(); ++t) {
        const Term& term = expr.terms[t];
        if (t == 0)
            out += term.negative ? "-" : "";
        else
            out += term.negative ? " - " : " + ";
        if (term.coefficient) {
            const Coefficient& c = *term.coefficient;
            out += format_operand(c.numerator, c.sqrt_numerator);
            if (c.denominator) out += "/" + format_operand(*c.denominator, c.sqrt_denominator);
            out += "*";
        }
        switch (term.kind) {
            case Term::Kind::Sym:
                out += "sym(";
                for (std::size_t f = 0; f < term.factors.size(); ++f)
                    out += (f ? " " : "") + std::string(pauli_name(term.factors[f]));
                out += ")";
                break;
            case Term::Kind::Product:
                for (std::size_t f = 0; f < term.factors.size(); ++f)
                    out += (f ? " x " : "") + std::string(pauli_name(term.factors[f]));
                break;
            case Term::Kind::Pair:
                out += "H(" + std::to_string(term.i) + "," + std::to_string(term.j) + ")";
                break;
        }
    }
    return out;
}

double hermiticity_deficit(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator build_matrix(const HamiltonianExpr& expr) {
    const int n = expr.n();
    if (n < 1) throw DomainError("build_matrix: empty expression");
    if (n > kMaxHamiltonianQubits)
        throw ResourceError("build_matrix: " + std::to_string(n) + " qubits exceeds the limit of " +
                            std::to_string(kMaxHamiltonianQubits));
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);

    for (const Term& term : expr.terms) {
        double c = term.coefficient ? term.coefficient->value() : 1.0;
        if (term.negative) c = -c;
        switch (term.kind) {
            case Term::Kind::Product:
                add_product(m, term.factors, c);
                break;
            case Term::Kind::Sym: {
                if (arrangement_count(term.factors) > kMaxSymArrangements)
                    throw ResourceError("build_matrix: sym(...) has more than 1e5 distinct arrangements");
                std::vector<Pauli> f = term.factors;
                std::sort(f.begin(), f.end());
                do add_product(m, f, c);
                while (std::next_permutation(f.begin(), f.end()));
                break;
            }
            case Term::Kind::Pair:
                add_product(m, {sigma(term.i), sigma(term.j)}, 0.5 * c);
                add_product(m, {sigma(term.j), sigma(term.i)}, 0.5 * c);
                break;
        }
    }
    const double deficit = hermiticity_deficit(m);
    if (deficit > 1e-12)
        throw DomainError("build_matrix: Hermiticity deficit " + format_measure(deficit) + " exceeds 1e-12");
    return {n, std::move(m)};
}

HermitianOperator build_matrix(std::string_view source) { return build_matrix(parse_hamiltonian(source)); }

double permutation_deficit(const HermitianOperator& h) {
    const int n = h.n;
    const Eigen::Index dim = h.matrix.rows();
    std::vector<Eigen::Index> swapped(static_cast<std::size_t>(dim));
    double deficit = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Index bi = Eigen::Index{1} << (n - 1 - i);
            const Eigen::Index bj = Eigen::Index{1} << (n - 1 - j);
            for (Eigen::Index a = 0; a < dim; ++a)
                swapped[a] = ((a & bi) != 0) != ((a & bj) != 0) ? a ^ (bi | bj) : a;
            for (Eigen::Index c = 0; c < dim; ++c)
                for (Eigen::Index r = 0; r < dim; ++r)
                    deficit = std::max(deficit, std::abs(h.matrix(swapped[r], swapped[c]) - h.matrix(r, c)));
        }
    }
    return deficit;
}

}  // namespace stellar
