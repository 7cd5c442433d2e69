#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conehedge/types.hpp"

namespace conehedge {

/// A fundamental system: m linearly independent simple roots in R^d, m <= d.
/// The open chamber it carries is { x : <x, alpha_i> > 0 for all i }.
class FundamentalSystem {
public:
    FundamentalSystem(int dim, std::vector<Vector> simple_roots);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(roots_.size()); }
    const std::vector<Vector>& roots() const { return roots_; }
    const Vector& root(int i) const { return roots_[static_cast<std::size_t>(i)]; }

    /// m x d matrix whose i-th row is alpha_i.
    Matrix root_matrix() const;

private:
    int dim_;
    std::vector<Vector> roots_;
};

/// Reflection across the hyperplane orthogonal to alpha:
/// x - (2 <x,alpha> / <alpha,alpha>) alpha. Involutive isometry.
Vector reflect(const Vector& alpha, const Vector& x);

/// d x d matrix of the reflection s_alpha.
Matrix reflection_matrix(const Vector& alpha);

struct GroupElement {
    Matrix matrix;                      // d x d orthogonal
    int sign = 1;                       // det(matrix) = (-1)^word length
    std::vector<int> word;              // shortest product of simple reflections
    std::optional<Matrix> rep_matrix;   // T_w, set once bound to a barrier

    bool is_identity() const { return word.empty(); }
};

/// The finite group generated by the simple reflections of a fundamental
/// system. elements[0] is the identity; elements are ordered by word length
/// (breadth-first closure order). Immutable after construction.
class ReflectionGroup {
public:
    ReflectionGroup(FundamentalSystem fs, std::vector<GroupElement> elements);

    const FundamentalSystem& fundamental_system() const { return fs_; }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const GroupElement& element(std::size_t i) const { return elements_[i]; }
    const GroupElement& identity() const { return elements_[0]; }
    std::size_t order() const { return elements_.size(); }

    /// Index of the element whose matrix matches m entrywise within tol.
    /// Throws std::runtime_error if no element matches (the matrix is not in
    /// the group at this tolerance).
    std::size_t find(const Matrix& m, double tol = 1e-9) const;

    /// Index of element(i) * element(j) (matrix product, left-to-right action
    /// on column vectors).
    std::size_t product(std::size_t i, std::size_t j) const;

private:
    FundamentalSystem fs_;
    std::vector<GroupElement> elements_;
};

/// Breadth-first closure of the simple reflections under matrix
/// multiplication, deduplicated entrywise to 1e-9. Throws std::runtime_error
/// if the closure exceeds max_order (the system may not generate a finite
/// group).
ReflectionGroup generate_group(const FundamentalSystem& fs, std::size_t max_order = 10080);

struct RootSystem {
    FundamentalSystem fundamental;
    std::vector<Vector> all_roots;  // the orbit { w(alpha) : w in W, alpha in Sigma }
};

/// Orbit of the simple roots under the group, deduplicated.
RootSystem full_root_system(const FundamentalSystem& fs, const ReflectionGroup& group);

/// Checks (R1) only +-alpha per line, (R2) closure under each s_alpha, and
/// closure under negation.
bool satisfies_root_axioms(const RootSystem& rs, double tol = 1e-9);

/// True iff <x, alpha_i> > 0 strictly for every simple root.
bool chamber_contains(const FundamentalSystem& fs, const Vector& x);

/// The unique (w, y = w(x)) with y in the open chamber. Throws
/// std::domain_error if x lies on a reflecting hyperplane.
std::pair<GroupElement, Vector> canonicalize_to_chamber(const FundamentalSystem& fs,
                                                        const ReflectionGroup& group,
                                                        const Vector& x);

// Built-in families.
FundamentalSystem type_a_system(int n);       // A_n: e_i - e_{i+1} in R^{n+1}
FundamentalSystem orthogonal_system(int m);   // e_1 .. e_m in R^m
FundamentalSystem dihedral_system(int m);     // I_2(m): simple roots at angle pi - pi/m

/// Parses "A<n>", "I2(<m>)" or "orthogonal(<m>)".
FundamentalSystem system_from_name(const std::string& name);

}  // namespace conehedge
