#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace stellar {

enum class Pauli { I, X, Y, Z, P0, P1 };

/// num or sqrt(num), optionally divided by den or sqrt(den).
struct Coefficient {
    double numerator = 1.0;
    bool sqrt_numerator = false;
    std::optional<double> denominator;
    bool sqrt_denominator = false;

    double value() const;
    bool operator==(const Coefficient&) const = default;
};

struct Term {
    enum class Kind { Product, Sym, Pair };

    bool negative = false;
    std::optional<Coefficient> coefficient;
    Kind kind = Kind::Product;
    std::vector<Pauli> factors;  // Product and Sym
    int i = 0, j = 0;            // Pair: H(i, j) with sigma_0 = I

    int arity() const { return kind == Kind::Pair ? 2 : static_cast<int>(factors.size()); }
    bool operator==(const Term&) const = default;
};

struct HamiltonianExpr {
    std::vector<Term> terms;
    int n() const { return terms.empty() ? 0 : terms.front().arity(); }
    bool operator==(const HamiltonianExpr&) const = default;
};

/// Grammar:
///   expr  := term (('+'|'-') term)*
///   term  := ['-'|'+'] [coeff '*'] body
///   body  := 'sym(' factor+ ')' | factor ('x' factor)* | 'H(' i ',' j ')'
///   coeff := num ['/' num]   with num := decimal | 'sqrt(' decimal ')'
/// Throws ParseError with line, column and token.
HamiltonianExpr parse_hamiltonian(std::string_view source);

/// Canonical text form; parse_hamiltonian(to_string(e)) == e.
std::string to_string(const HamiltonianExpr& expr);

struct HermitianOperator {
    int n = 0;
    Eigen::MatrixXcd matrix;
};

inline constexpr int kMaxHamiltonianQubits = 14;

/// Dense matrix with qubit 0 as the most significant index bit. ResourceError
/// above 14 qubits; DomainError if the result is not Hermitian to 1e-12.
HermitianOperator build_matrix(const HamiltonianExpr& expr);
HermitianOperator build_matrix(std::string_view source);

/// max_{i<j} ||P_ij H P_ij - H||_max over qubit transpositions.
double permutation_deficit(const HermitianOperator& h);
double hermiticity_deficit(const Eigen::MatrixXcd& m);

}  // namespace stellar
