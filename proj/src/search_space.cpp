#include "lexitune/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lexitune {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::size_t index_of(const SearchSpace& space, const std::string& name) {
    for (std::size_t i = 0; i < space.dimension(); ++i)
        if (space.name_at(i) == name) return i;
    throw std::invalid_argument("unknown parameter: " + name);
}

}  // namespace

ParamDomain ParamDomain::make_continuous(double lower, double upper, bool log_scale) {
    if (!(lower < upper)) throw std::invalid_argument("continuous domain: lower must be < upper");
    if (log_scale && !(lower > 0.0))
        throw std::invalid_argument("log-scale domain requires lower > 0");
    ParamDomain d;
    d.kind = ParamKind::continuous;
    d.lower = lower;
    d.upper = upper;
    d.log_scale = log_scale;
    return d;
}

ParamDomain ParamDomain::make_integer(std::int64_t lower, std::int64_t upper, bool log_scale) {
    if (lower > upper) throw std::invalid_argument("integer domain: lower must be <= upper");
    if (log_scale && lower <= 0)
        throw std::invalid_argument("log-scale domain requires lower > 0");
    ParamDomain d;
    d.kind = ParamKind::integer;
    d.lower = static_cast<double>(lower);
    d.upper = static_cast<double>(upper);
    d.log_scale = log_scale;
    return d;
}

ParamDomain ParamDomain::make_categorical(std::vector<std::string> choices) {
    if (choices.empty()) throw std::invalid_argument("categorical domain: choices empty");
    std::set<std::string> uniq(choices.begin(), choices.end());
    if (uniq.size() != choices.size())
        throw std::invalid_argument("categorical domain: duplicate choices");
    ParamDomain d;
    d.kind = ParamKind::categorical;
    d.choices = std::move(choices);
    return d;
}

void SearchSpace::add(std::string name, ParamDomain domain) {
    if (has(name)) throw std::invalid_argument("duplicate parameter name: " + name);
    entries_.emplace_back(std::move(name), std::move(domain));
}

const ParamDomain& SearchSpace::domain(const std::string& name) const {
    return entries_[index_of(*this, name)].second;
}

bool SearchSpace::has(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == name; });
}

double Configuration::get_double(const SearchSpace& space, const std::string& name) const {
    const ParamValue& v = values[index_of(space, name)];
    if (const double* d = std::get_if<double>(&v)) return *d;
    if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw std::invalid_argument("parameter " + name + " is not numeric");
}

std::int64_t Configuration::get_int(const SearchSpace& space, const std::string& name) const {
    const ParamValue& v = values[index_of(space, name)];
    if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return *i;
    throw std::invalid_argument("parameter " + name + " is not an integer");
}

const std::string& Configuration::get_choice(const SearchSpace& space,
                                             const std::string& name) const {
    const ParamValue& v = values[index_of(space, name)];
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    throw std::invalid_argument("parameter " + name + " is not categorical");
}

void validate(const SearchSpace& space, const Configuration& config) {
    if (config.values.size() != space.dimension())
        throw std::invalid_argument("configuration size does not match search space");
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const ParamDomain& d = space.domain_at(i);
        const ParamValue& v = config.values[i];
        switch (d.kind) {
            case ParamKind::continuous: {
                const double* x = std::get_if<double>(&v);
                if (!x) throw std::invalid_argument(space.name_at(i) + ": expected real value");
                if (*x < d.lower || *x > d.upper)
                    throw std::invalid_argument(space.name_at(i) + ": value out of range");
                break;
            }
            case ParamKind::integer: {
                const std::int64_t* x = std::get_if<std::int64_t>(&v);
                if (!x) throw std::invalid_argument(space.name_at(i) + ": expected integer value");
                if (static_cast<double>(*x) < d.lower || static_cast<double>(*x) > d.upper)
                    throw std::invalid_argument(space.name_at(i) + ": value out of range");
                break;
            }
            case ParamKind::categorical: {
                const std::string* x = std::get_if<std::string>(&v);
                if (!x) throw std::invalid_argument(space.name_at(i) + ": expected choice string");
                if (std::find(d.choices.begin(), d.choices.end(), *x) == d.choices.end())
                    throw std::invalid_argument(space.name_at(i) + ": unknown choice " + *x);
                break;
            }
        }
    }
}

Configuration sample_uniform(const SearchSpace& space, SeededRng& rng) {
    Configuration c;
    c.values.reserve(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const ParamDomain& d = space.domain_at(i);
        switch (d.kind) {
            case ParamKind::continuous:
                if (d.log_scale)
                    c.values.emplace_back(std::exp(rng.uniform(std::log(d.lower), std::log(d.upper))));
                else
                    c.values.emplace_back(rng.uniform(d.lower, d.upper));
                break;
            case ParamKind::integer: {
                const std::int64_t lo = static_cast<std::int64_t>(d.lower);
                const std::int64_t hi = static_cast<std::int64_t>(d.upper);
                if (lo == hi) {
                    c.values.emplace_back(lo);
                } else if (d.log_scale) {
                    const double v = std::exp(rng.uniform(std::log(d.lower), std::log(d.upper)));
                    const std::int64_t r = static_cast<std::int64_t>(std::floor(v + 0.5));
                    c.values.emplace_back(std::min(hi, std::max(lo, r)));
                } else {
                    c.values.emplace_back(rng.uniform_int(lo, hi));
                }
                break;
            }
            case ParamKind::categorical: {
                const std::int64_t m = static_cast<std::int64_t>(d.choices.size());
                c.values.emplace_back(d.choices[static_cast<std::size_t>(rng.uniform_int(0, m - 1))]);
                break;
            }
        }
    }
    return c;
}

UnitVector encode(const SearchSpace& space, const Configuration& config) {
    validate(space, config);
    UnitVector out(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const ParamDomain& d = space.domain_at(i);
        switch (d.kind) {
            case ParamKind::continuous:
            case ParamKind::integer: {
                const double v = (d.kind == ParamKind::continuous)
                                     ? std::get<double>(config.values[i])
                                     : static_cast<double>(std::get<std::int64_t>(config.values[i]));
                if (d.lower == d.upper) {
                    out[i] = 0.5;  // degenerate single-point domain
                } else if (d.log_scale) {
                    out[i] = (std::log(v) - std::log(d.lower)) /
                             (std::log(d.upper) - std::log(d.lower));
                } else {
                    out[i] = (v - d.lower) / (d.upper - d.lower);
                }
                break;
            }
            case ParamKind::categorical: {
                const std::string& s = std::get<std::string>(config.values[i]);
                const auto it = std::find(d.choices.begin(), d.choices.end(), s);
                const double idx = static_cast<double>(it - d.choices.begin());
                out[i] = (idx + 0.5) / static_cast<double>(d.choices.size());
                break;
            }
        }
    }
    return out;
}

Configuration decode(const SearchSpace& space, const UnitVector& point) {
    if (point.size() != space.dimension())
        throw std::invalid_argument("decode: dimension mismatch");
    Configuration c;
    c.values.reserve(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const ParamDomain& d = space.domain_at(i);
        const double t = clamp01(point[i]);
        switch (d.kind) {
            case ParamKind::continuous: {
                const double v = d.log_scale
                                     ? std::exp(std::log(d.lower) +
                                                t * (std::log(d.upper) - std::log(d.lower)))
                                     : d.lower + t * (d.upper - d.lower);
                c.values.emplace_back(std::min(d.upper, std::max(d.lower, v)));
                break;
            }
            case ParamKind::integer: {
                const std::int64_t lo = static_cast<std::int64_t>(d.lower);
                const std::int64_t hi = static_cast<std::int64_t>(d.upper);
                double v;
                if (lo == hi) {
                    v = d.lower;
                } else if (d.log_scale) {
                    v = std::exp(std::log(d.lower) + t * (std::log(d.upper) - std::log(d.lower)));
                } else {
                    v = d.lower + t * (d.upper - d.lower);
                }
                const std::int64_t r = static_cast<std::int64_t>(std::floor(v + 0.5));
                c.values.emplace_back(std::min(hi, std::max(lo, r)));
                break;
            }
            case ParamKind::categorical: {
                const std::size_t m = d.choices.size();
                auto idx = static_cast<std::int64_t>(std::floor(t * static_cast<double>(m)));
                idx = std::min<std::int64_t>(static_cast<std::int64_t>(m) - 1, std::max<std::int64_t>(0, idx));
                c.values.emplace_back(d.choices[static_cast<std::size_t>(idx)]);
                break;
            }
        }
    }
    return c;
}

UnitVector sample_unit_sphere(std::size_t d, SeededRng& rng) {
    if (d == 0) throw std::invalid_argument("sample_unit_sphere: d must be >= 1");
    UnitVector u(d);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            u[i] = rng.normal();
            norm_sq += u[i] * u[i];
        }
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : u) v *= inv;
    return u;
}

Configuration perturb(const SearchSpace& space, const Configuration& config,
                      const UnitVector& direction, double step) {
    if (direction.size() != space.dimension())
        throw std::invalid_argument("perturb: dimension mismatch");
    if (!(step > 0.0)) throw std::invalid_argument("perturb: step must be > 0");
    UnitVector p = encode(space, config);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += step * direction[i];
    return decode(space, p);
}

Configuration midpoint_configuration(const SearchSpace& space) {
    return decode(space, UnitVector(space.dimension(), 0.5));
}

}  // namespace lexitune
