#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crested/crested.hpp"

namespace crested {

inline constexpr const char* kToolVersion = "0.1.0";

/// On-disk problem description (JSON). Field names and 1-based element
/// labels are part of the format; see README for the schema.
struct SpecDocument {
    Poset poset;
    std::vector<int> sizes;
    std::string mode;  // "crested" | "insect"
    std::vector<std::optional<Matrix>> matrices;     // per component, crested mode
    std::vector<std::optional<Vector>> sigmas;       // optional per component
    std::optional<Vector> p0;
    std::optional<std::vector<int>> base_point;

    static SpecDocument load(const std::string& path);
    static SpecDocument parse(const std::string& text);

    /// Build the working spec. Insect mode computes the level weights and
    /// substitutes uniform components.
    CrestedSpec to_crested_spec() const;
};

std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

/// Row-major CSV with 17 significant digits; lines starting with '#' are
/// header metadata.
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

std::string format_probability(double v);  // 17 significant digits
std::string format_state(std::span<const int> x);  // "0,1,0"
std::vector<int> parse_state(const std::string& text, const ProductShape& shape);

}  // namespace crested
