#include "bdhomog/random_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bdhomog {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

MarkLaw MarkLaw::bernoulli(double p, double a_soft, double a_hard) {
    MarkLaw l;
    l.kind = Kind::bernoulli;
    l.p = p;
    l.a_soft = a_soft;
    l.a_hard = a_hard;
    l.validate();
    return l;
}

MarkLaw MarkLaw::uniform(double a_min, double a_max) {
    MarkLaw l;
    l.kind = Kind::uniform;
    l.a_min = a_min;
    l.a_max = a_max;
    l.validate();
    return l;
}

MarkLaw MarkLaw::periodic(double a_soft, double a_hard) {
    MarkLaw l;
    l.kind = Kind::periodic;
    l.a_soft = a_soft;
    l.a_hard = a_hard;
    l.validate();
    return l;
}

void MarkLaw::validate() const {
    switch (kind) {
        case Kind::bernoulli:
        case Kind::periodic:
            if (!(a_soft > 0.0) || !(a_hard > 0.0)) throw std::invalid_argument("mark law: values must be positive");
            if (kind == Kind::bernoulli && !(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("mark law: p must lie in [0,1]");
            break;
        case Kind::uniform:
            if (!(a_min > 0.0) || !(a_max >= a_min)) throw std::invalid_argument("mark law: need 0 < a_min <= a_max");
            break;
    }
}

double MarkLaw::lower() const {
    if (kind == Kind::uniform) return a_min;
    if (kind == Kind::bernoulli && p == 1.0) return a_soft;
    if (kind == Kind::bernoulli && p == 0.0) return a_hard;
    return std::min(a_soft, a_hard);
}

double MarkLaw::upper() const {
    if (kind == Kind::uniform) return a_max;
    if (kind == Kind::bernoulli && p == 1.0) return a_soft;
    if (kind == Kind::bernoulli && p == 0.0) return a_hard;
    return std::max(a_soft, a_hard);
}

std::string MarkLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::bernoulli: os << "bernoulli(p=" << p << ", a_soft=" << a_soft << ", a_hard=" << a_hard << ")"; break;
        case Kind::uniform: os << "uniform(a_min=" << a_min << ", a_max=" << a_max << ")"; break;
        case Kind::periodic: os << "periodic(a_soft=" << a_soft << ", a_hard=" << a_hard << ")"; break;
    }
    return os.str();
}

RandomField::RandomField(std::uint64_t master_seed, MarkLaw law, int dim)
    : seed_(master_seed), law_(law), dim_(Vec::check_dim(dim)) {
    law_.validate();
}

double RandomField::mark(const CellIndex& z) const {
    std::int64_t zs[kMaxDim] = {0, 0, 0};
    for (int i = 0; i < dim_; ++i) zs[i] = z[static_cast<std::size_t>(i)] + shift_[static_cast<std::size_t>(i)];
    if (law_.kind == MarkLaw::Kind::periodic) {
        std::int64_t s = 0;
        for (int i = 0; i < dim_; ++i) s += zs[i];
        return (s % 2 == 0) ? law_.a_soft : law_.a_hard;
    }
    std::uint64_t h = mix64(seed_);
    for (int i = 0; i < dim_; ++i) h = mix64(h ^ static_cast<std::uint64_t>(zs[i]));
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (law_.kind == MarkLaw::Kind::bernoulli) return u < law_.p ? law_.a_soft : law_.a_hard;
    return law_.a_min + u * (law_.a_max - law_.a_min);
}

CellIndex RandomField::cell_of(const Vec& x) {
    CellIndex z{};
    for (int i = 0; i < x.dim(); ++i) z[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(x[i] + 0.5));
    return z;
}

double RandomField::mark_at(const Vec& x) const {
    if (x.dim() != dim_) throw std::invalid_argument("RandomField::mark_at: dimension mismatch");
    return mark(cell_of(x));
}

RandomField RandomField::shift_by(const CellIndex& z0) const {
    RandomField r = *this;
    for (int i = 0; i < dim_; ++i) r.shift_[static_cast<std::size_t>(i)] += z0[static_cast<std::size_t>(i)];
    return r;
}

}  // namespace bdhomog
