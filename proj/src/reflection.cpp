#include "conehedge/reflection.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace conehedge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool matrices_close(const Matrix& a, const Matrix& b, double tol) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

FundamentalSystem::FundamentalSystem(int dim, std::vector<Vector> simple_roots)
    : dim_(dim), roots_(std::move(simple_roots)) {
    if (dim_ <= 0) throw std::invalid_argument("FundamentalSystem: dim must be positive");
    if (roots_.empty()) throw std::invalid_argument("FundamentalSystem: no simple roots given");
    if (static_cast<int>(roots_.size()) > dim_)
        throw std::invalid_argument("FundamentalSystem: more roots than dimensions");
    for (const Vector& a : roots_) {
        if (a.size() != dim_)
            throw std::invalid_argument("FundamentalSystem: root dimension mismatch");
        if (a.norm() == 0.0) throw std::invalid_argument("FundamentalSystem: zero root");
    }
    Matrix r = root_matrix();
    Eigen::JacobiSVD<Matrix> svd(r);
    const int m = size();
    if (svd.singularValues()(m - 1) <= 1e-12 * svd.singularValues()(0))
        throw std::invalid_argument("FundamentalSystem: simple roots are linearly dependent");
}

Matrix FundamentalSystem::root_matrix() const {
    Matrix r(size(), dim_);
    for (int i = 0; i < size(); ++i) r.row(i) = roots_[static_cast<std::size_t>(i)].transpose();
    return r;
}

Vector reflect(const Vector& alpha, const Vector& x) {
    const double aa = alpha.squaredNorm();
    if (aa == 0.0) throw std::domain_error("reflect: alpha must be nonzero");
    return x - (2.0 * x.dot(alpha) / aa) * alpha;
}

Matrix reflection_matrix(const Vector& alpha) {
    const double aa = alpha.squaredNorm();
    if (aa == 0.0) throw std::domain_error("reflection_matrix: alpha must be nonzero");
    const auto d = alpha.size();
    return Matrix::Identity(d, d) - (2.0 / aa) * (alpha * alpha.transpose());
}

ReflectionGroup::ReflectionGroup(FundamentalSystem fs, std::vector<GroupElement> elements)
    : fs_(std::move(fs)), elements_(std::move(elements)) {}

std::size_t ReflectionGroup::find(const Matrix& m, double tol) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (matrices_close(elements_[i].matrix, m, tol)) return i;
    throw std::runtime_error("ReflectionGroup::find: matrix is not a group element");
}

std::size_t ReflectionGroup::product(std::size_t i, std::size_t j) const {
    return find(elements_[i].matrix * elements_[j].matrix);
}

ReflectionGroup generate_group(const FundamentalSystem& fs, std::size_t max_order) {
    const int d = fs.dim();
    const int m = fs.size();

    std::vector<Matrix> generators;
    generators.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) generators.push_back(reflection_matrix(fs.root(i)));

    std::vector<GroupElement> elements;
    elements.push_back({Matrix::Identity(d, d), 1, {}, std::nullopt});

    auto known = [&](const Matrix& mat) {
        for (const GroupElement& e : elements)
            if (matrices_close(e.matrix, mat, 1e-9)) return true;
        return false;
    };

    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        const std::size_t idx = frontier.front();
        frontier.pop_front();
        for (int g = 0; g < m; ++g) {
            Matrix candidate = generators[static_cast<std::size_t>(g)] * elements[idx].matrix;
            if (known(candidate)) continue;
            if (elements.size() >= max_order) {
                std::ostringstream msg;
                msg << "generate_group: closure exceeds " << max_order
                    << " elements; the system does not generate a finite group at this cap";
                throw std::runtime_error(msg.str());
            }
            GroupElement e;
            e.matrix = std::move(candidate);
            e.word = elements[idx].word;
            e.word.insert(e.word.begin(), g);  // candidate = s_g * element
            e.sign = (e.word.size() % 2 == 0) ? 1 : -1;
            const double det = e.matrix.determinant();
            if (std::abs(det - e.sign) > 1e-9)
                throw std::runtime_error("generate_group: determinant does not match word parity");
            elements.push_back(std::move(e));
            frontier.push_back(elements.size() - 1);
        }
    }
    return ReflectionGroup(fs, std::move(elements));
}

RootSystem full_root_system(const FundamentalSystem& fs, const ReflectionGroup& group) {
    std::vector<Vector> roots;
    auto known = [&](const Vector& v) {
        for (const Vector& r : roots)
            if ((r - v).cwiseAbs().maxCoeff() <= 1e-9) return true;
        return false;
    };
    for (const GroupElement& w : group.elements()) {
        for (const Vector& alpha : fs.roots()) {
            Vector image = w.matrix * alpha;
            if (!known(image)) roots.push_back(std::move(image));
        }
    }
    return RootSystem{fs, std::move(roots)};
}

bool satisfies_root_axioms(const RootSystem& rs, double tol) {
    const auto& roots = rs.all_roots;
    auto contains = [&](const Vector& v) {
        for (const Vector& r : roots)
            if ((r - v).cwiseAbs().maxCoeff() <= tol) return true;
        return false;
    };
    for (const Vector& a : roots) {
        if (!contains(-a)) return false;
        for (const Vector& b : roots) {
            // (R1): collinear roots must be +-a.
            const double cross = a.norm() * b.norm() - std::abs(a.dot(b));
            if (std::abs(cross) <= tol * a.norm() * b.norm()) {
                if ((a - b).cwiseAbs().maxCoeff() > tol && (a + b).cwiseAbs().maxCoeff() > tol)
                    return false;
            }
            // (R2): s_a(b) stays in the system.
            if (!contains(reflect(a, b))) return false;
        }
    }
    return true;
}

bool chamber_contains(const FundamentalSystem& fs, const Vector& x) {
    for (const Vector& alpha : fs.roots())
        if (x.dot(alpha) <= 0.0) return false;
    return true;
}

std::pair<GroupElement, Vector> canonicalize_to_chamber(const FundamentalSystem& fs,
                                                        const ReflectionGroup& group,
                                                        const Vector& x) {
    // Greedy descent: reflect across any violated wall until inside. The word
    // length strictly decreases, so this terminates for a finite group.
    Vector y = x;
    Matrix w = Matrix::Identity(fs.dim(), fs.dim());
    const std::size_t max_iters = 2 * group.order() + 4;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        int violated = -1;
        for (int i = 0; i < fs.size(); ++i) {
            const double ip = y.dot(fs.root(i));
            if (std::abs(ip) <= 1e-12 * y.norm() * fs.root(i).norm())
                throw std::domain_error("canonicalize_to_chamber: x lies on a reflecting hyperplane");
            if (ip < 0.0) {
                violated = i;
                break;
            }
        }
        if (violated < 0) return {group.element(group.find(w)), y};
        y = reflect(fs.root(violated), y);
        w = reflection_matrix(fs.root(violated)) * w;
    }
    throw std::runtime_error("canonicalize_to_chamber: did not converge");
}

FundamentalSystem type_a_system(int n) {
    if (n < 1) throw std::invalid_argument("type_a_system: n must be >= 1");
    const int d = n + 1;
    std::vector<Vector> roots;
    for (int i = 0; i < n; ++i) {
        Vector a = Vector::Zero(d);
        a(i) = 1.0;
        a(i + 1) = -1.0;
        roots.push_back(std::move(a));
    }
    return FundamentalSystem(d, std::move(roots));
}

FundamentalSystem orthogonal_system(int m) {
    if (m < 1) throw std::invalid_argument("orthogonal_system: m must be >= 1");
    std::vector<Vector> roots;
    for (int i = 0; i < m; ++i) {
        Vector a = Vector::Zero(m);
        a(i) = 1.0;
        roots.push_back(std::move(a));
    }
    return FundamentalSystem(m, std::move(roots));
}

FundamentalSystem dihedral_system(int m) {
    if (m < 2) throw std::invalid_argument("dihedral_system: m must be >= 2");
    // Chamber is the wedge 0 < theta < pi/m; the two simple roots sit at
    // angle pi - pi/m from each other.
    std::vector<Vector> roots(2, Vector::Zero(2));
    roots[0] << 0.0, 1.0;
    roots[1] << std::sin(kPi / m), -std::cos(kPi / m);
    return FundamentalSystem(2, std::move(roots));
}

FundamentalSystem system_from_name(const std::string& name) {
    auto parse_int = [&](std::size_t from, std::size_t to) {
        const std::string digits = name.substr(from, to - from);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(digits, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("system_from_name: cannot parse '" + name + "'");
        }
        if (used != digits.size())
            throw std::invalid_argument("system_from_name: cannot parse '" + name + "'");
        return v;
    };
    if (name.size() >= 2 && name[0] == 'A') return type_a_system(parse_int(1, name.size()));
    if (name.rfind("I2(", 0) == 0 && name.back() == ')')
        return dihedral_system(parse_int(3, name.size() - 1));
    if (name.rfind("orthogonal(", 0) == 0 && name.back() == ')')
        return orthogonal_system(parse_int(11, name.size() - 1));
    throw std::invalid_argument("system_from_name: unknown system '" + name +
                                "' (expected A<n>, I2(<m>) or orthogonal(<m>))");
}

}  // namespace conehedge
