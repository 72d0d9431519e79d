#include "crested/spec_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crested/insect.hpp"

namespace crested {

using nlohmann::json;

namespace {

json require_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw SchemaError("missing field " + path + "." + key);
    return j.at(key);
}

int require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path + " must be an integer");
    return j.get<int>();
}

}  // namespace

SpecDocument SpecDocument::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

SpecDocument SpecDocument::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("document is not valid JSON: ") + e.what());
    }
    SpecDocument doc;

    const json jposet = require_field(j, "poset", "$");
    const int n = require_int(require_field(jposet, "n", "$.poset"), "$.poset.n");
    if (n < 1) throw SchemaError("$.poset.n must be at least 1");
    const json jcovers = require_field(jposet, "covers", "$.poset");
    if (!jcovers.is_array()) throw SchemaError("$.poset.covers must be an array");
    std::vector<std::pair<int, int>> covers;
    for (std::size_t k = 0; k < jcovers.size(); ++k) {
        const std::string path = "$.poset.covers[" + std::to_string(k) + "]";
        const json& pair = jcovers[k];
        if (!pair.is_array() || pair.size() != 2)
            throw SchemaError(path + " must be a [lower, upper] pair");
        const int lo = require_int(pair[0], path + "[0]");
        const int hi = require_int(pair[1], path + "[1]");
        if (lo < 1 || lo > n || hi < 1 || hi > n)
            throw SchemaError(path + " references an element outside 1..n");
        covers.emplace_back(lo - 1, hi - 1);  // file labels are 1-based
    }
    doc.poset = Poset::from_covers(n, covers);

    const json jmode = require_field(j, "mode", "$");
    if (!jmode.is_string()) throw SchemaError("$.mode must be a string");
    doc.mode = jmode.get<std::string>();
    if (doc.mode != "crested" && doc.mode != "insect")
        throw SchemaError("$.mode must be \"crested\" or \"insect\"");

    const json jcomp = require_field(j, "components", "$");
    if (!jcomp.is_array() || jcomp.size() != static_cast<std::size_t>(n))
        throw SchemaError("$.components must list exactly n entries");
    doc.sizes.assign(n, 0);
    doc.matrices.assign(n, std::nullopt);
    doc.sigmas.assign(n, std::nullopt);
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < jcomp.size(); ++k) {
        const std::string path = "$.components[" + std::to_string(k) + "]";
        const json& c = jcomp[k];
        const int index = require_int(require_field(c, "index", path), path + ".index");
        if (index < 1 || index > n) throw SchemaError(path + ".index outside 1..n");
        if (seen[index - 1]) throw SchemaError(path + ".index repeats an earlier component");
        seen[index - 1] = true;
        const int size = require_int(require_field(c, "size", path), path + ".size");
        if (size < 1) throw SchemaError(path + ".size must be positive");
        doc.sizes[index - 1] = size;

        if (doc.mode == "crested") {
            const json m = require_field(c, "matrix", path);
            if (!m.is_array() || m.size() != static_cast<std::size_t>(size))
                throw SchemaError(path + ".matrix must have `size` rows");
            Matrix mat(size, size);
            for (int r = 0; r < size; ++r) {
                const json& row = m[r];
                if (!row.is_array() || row.size() != static_cast<std::size_t>(size))
                    throw SchemaError(path + ".matrix[" + std::to_string(r) +
                                      "] must have `size` entries");
                for (int col = 0; col < size; ++col) {
                    if (!row[col].is_number())
                        throw SchemaError(path + ".matrix entries must be numbers");
                    mat(r, col) = row[col].get<double>();
                }
            }
            doc.matrices[index - 1] = std::move(mat);
        }
        if (c.contains("sigma")) {
            const json& sg = c.at("sigma");
            if (!sg.is_array() || sg.size() != static_cast<std::size_t>(size))
                throw SchemaError(path + ".sigma must have `size` entries");
            Vector v(size);
            for (int r = 0; r < size; ++r) {
                if (!sg[r].is_number()) throw SchemaError(path + ".sigma entries must be numbers");
                v(r) = sg[r].get<double>();
            }
            doc.sigmas[index - 1] = std::move(v);
        }
    }

    if (doc.mode == "crested") {
        const json jp0 = require_field(j, "p0", "$");
        if (!jp0.is_array() || jp0.size() != static_cast<std::size_t>(n))
            throw SchemaError("$.p0 must list one probability per element");
        Vector p0(n);
        for (int i = 0; i < n; ++i) {
            if (!jp0[i].is_number()) throw SchemaError("$.p0 entries must be numbers");
            p0(i) = jp0[i].get<double>();
        }
        doc.p0 = std::move(p0);
    }

    if (j.contains("base_point")) {
        const json& bp = j.at("base_point");
        if (!bp.is_array() || bp.size() != static_cast<std::size_t>(n))
            throw SchemaError("$.base_point must list one coordinate per element");
        std::vector<int> x(n);
        for (int i = 0; i < n; ++i) {
            x[i] = require_int(bp[i], "$.base_point[" + std::to_string(i) + "]");
            if (x[i] < 0 || x[i] >= doc.sizes[i])
                throw SchemaError("$.base_point[" + std::to_string(i) + "] outside the component");
        }
        doc.base_point = std::move(x);
    }
    return doc;
}

CrestedSpec SpecDocument::to_crested_spec() const {
    if (mode == "insect") return to_crested(poset, sizes);
    const int n = poset.size();
    std::vector<ComponentChain> comps;
    for (int i = 0; i < n; ++i) {
        Chain chain = Chain::from_matrix(*matrices[i]);
        Measure sigma = sigmas[i] ? Measure::from_vector(*sigmas[i]) : stationary(chain);
        comps.push_back(ComponentChain::analyze(i, std::move(chain), std::move(sigma)));
    }
    return CrestedSpec(poset, std::move(comps), *p0);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_probability(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_probability(m(r, c));
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            row.push_back(std::stod(line.substr(pos, next - pos)));
            pos = next + 1;
        }
        if (!rows.empty() && rows.front().size() != row.size())
            throw SchemaError("ragged CSV rows");
        rows.push_back(std::move(row));
    }
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

std::string format_state(std::span<const int> x) {
    std::ostringstream os;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) os << ',';
        os << x[i];
    }
    return os.str();
}

std::vector<int> parse_state(const std::string& text, const ProductShape& shape) {
    std::vector<int> x;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        int v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw SchemaError("state coordinate '" + tok + "' is not an integer");
        x.push_back(v);
        pos = next + 1;
    }
    if (static_cast<int>(x.size()) != shape.rank())
        throw SchemaError("state must list one coordinate per element");
    shape.linearize(x);  // range check
    return x;
}

}  // namespace crested
