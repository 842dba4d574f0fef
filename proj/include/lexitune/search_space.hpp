#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lexitune/rng.hpp"

namespace lexitune {

enum class ParamKind { continuous, integer, categorical };

// One hyperparameter domain. Continuous and integer domains are bounded
// [lower, upper] and may be log-scaled (lower > 0 required); categorical
// domains carry an ordered list of unique choices.
struct ParamDomain {
    ParamKind kind = ParamKind::continuous;
    double lower = 0.0;
    double upper = 1.0;
    bool log_scale = false;
    std::vector<std::string> choices;

    static ParamDomain make_continuous(double lower, double upper, bool log_scale = false);
    static ParamDomain make_integer(std::int64_t lower, std::int64_t upper,
                                    bool log_scale = false);
    static ParamDomain make_categorical(std::vector<std::string> choices);
};

using ParamValue = std::variant<double, std::int64_t, std::string>;

// Named, ordered set of hyperparameter domains. Iteration order is the
// insertion order and defines the coordinate order of encoded vectors.
class SearchSpace {
public:
    void add(std::string name, ParamDomain domain);
    std::size_t dimension() const { return entries_.size(); }
    const std::string& name_at(std::size_t i) const { return entries_[i].first; }
    const ParamDomain& domain_at(std::size_t i) const { return entries_[i].second; }
    const ParamDomain& domain(const std::string& name) const;
    bool has(const std::string& name) const;

private:
    std::vector<std::pair<std::string, ParamDomain>> entries_;
};

// Concrete assignment of every parameter in a SearchSpace, stored in the
// space's coordinate order.
struct Configuration {
    std::vector<ParamValue> values;

    double get_double(const SearchSpace& space, const std::string& name) const;
    std::int64_t get_int(const SearchSpace& space, const std::string& name) const;
    const std::string& get_choice(const SearchSpace& space, const std::string& name) const;

    bool operator==(const Configuration& other) const = default;
};

// Length-d real vector: either an encoded point (components in [0,1]) or a
// unit-norm direction.
using UnitVector = std::vector<double>;

// Validates a configuration against a space; throws std::invalid_argument
// describing the first violation.
void validate(const SearchSpace& space, const Configuration& config);

Configuration sample_uniform(const SearchSpace& space, SeededRng& rng);

// Maps a configuration into [0,1]^d: affine in the (log-)value for numeric
// params, bucket midpoint (i + 0.5)/m for categorical choice i of m.
UnitVector encode(const SearchSpace& space, const Configuration& config);

// Inverse of encode. Components are clamped to [0,1] first; integers round
// half-up after the inverse affine map; categorical index is
// floor(component * m) clamped to the valid range.
Configuration decode(const SearchSpace& space, const UnitVector& point);

// Uniform direction on the unit sphere in d dimensions.
UnitVector sample_unit_sphere(std::size_t d, SeededRng& rng);

// decode(encode(config) + step * direction); clamping behaves as in decode.
Configuration perturb(const SearchSpace& space, const Configuration& config,
                      const UnitVector& direction, double step);

// Configuration at the centre of the encoded cube; the default start point
// of the optimizer.
Configuration midpoint_configuration(const SearchSpace& space);

}  // namespace lexitune
