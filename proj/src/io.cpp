#include "qbd/io.hpp"

#include <fstream>
#include <sstream>

namespace qbd {

namespace {

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParameterError(std::string("missing JSON field '") + key + "'");
    return j.at(key);
}

Real number(const Json& j, const char* what) {
    if (!j.is_number()) throw ParameterError(std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace

Json block_to_json(const Block& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(static_cast<double>(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Block block_from_json(const Json& j, int d) {
    if (!j.is_array() || j.empty()) throw ParameterError("block must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw ParameterError("block rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    if (rows != cols) throw ParameterError("block must be square");
    if (d > 0 && rows != d) throw ParameterError("block has size " + std::to_string(rows) + ", expected " + std::to_string(d));
    Block m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ParameterError("block rows must all have the same length");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], "block entry");
    }
    return m;
}

Json block_sequence_to_json(const BlockSequence& seq, std::size_t levels) {
    Json blocks = Json::array();
    for (std::size_t n = 0; n < levels; ++n) {
        const LevelBlocks lb = seq.level(n);
        Json level = Json::object();
        switch (seq.band()) {
            case Band::tridiagonal:
                if (lb.sub) level["C"] = block_to_json(*lb.sub);
                level["B"] = block_to_json(lb.diag);
                level["A"] = block_to_json(*lb.super);
                break;
            case Band::upper_bidiagonal:
                level["Y"] = block_to_json(lb.diag);
                level["X"] = block_to_json(*lb.super);
                break;
            case Band::lower_bidiagonal:
                if (lb.sub) level["R"] = block_to_json(*lb.sub);
                level["S"] = block_to_json(lb.diag);
                break;
        }
        blocks.push_back(std::move(level));
    }
    return Json{{"d", seq.dim()}, {"band", std::string(to_string(seq.band()))}, {"blocks", std::move(blocks)}};
}

BlockSequence block_sequence_from_json(const Json& j) {
    const Json& dj = member(j, "d");
    if (!dj.is_number_integer() || dj.get<int>() < 1) throw ParameterError("'d' must be a positive integer");
    const int d = dj.get<int>();
    const Json& bj = member(j, "band");
    if (!bj.is_string()) throw ParameterError("'band' must be a string");
    const Band band = band_from_string(bj.get<std::string>());
    const Json& blocks = member(j, "blocks");
    if (!blocks.is_array() || blocks.empty()) throw ParameterError("'blocks' must be a non-empty array");

    const char* sub_key = band == Band::tridiagonal ? "C" : band == Band::lower_bidiagonal ? "R" : nullptr;
    const char* diag_key = band == Band::tridiagonal ? "B" : band == Band::upper_bidiagonal ? "Y" : "S";
    const char* super_key = band == Band::tridiagonal ? "A" : band == Band::upper_bidiagonal ? "X" : nullptr;
    std::vector<LevelBlocks> levels;
    for (std::size_t n = 0; n < blocks.size(); ++n) {
        const Json& lj = blocks[n];
        LevelBlocks lb;
        lb.diag = block_from_json(member(lj, diag_key), d);
        if (super_key) lb.super = block_from_json(member(lj, super_key), d);
        if (sub_key && n > 0) lb.sub = block_from_json(member(lj, sub_key), d);
        levels.push_back(std::move(lb));
    }
    return BlockSequence::stored(d, band, std::move(levels));
}

Json factor_sidecar(const Block& alpha0, const std::vector<Block>& taus) {
    Json tau = Json::array();
    for (const Block& t : taus) tau.push_back(block_to_json(t));
    return Json{{"alpha0", block_to_json(alpha0)}, {"tau", std::move(tau)}};
}

Json params_to_json(const JacobiParams& p) {
    return Json{{"alpha", static_cast<double>(p.alpha)},
                {"beta", static_cast<double>(p.beta)},
                {"k", static_cast<double>(p.k)},
                {"d", p.d}};
}

JacobiParams params_from_json(const Json& j) {
    JacobiParams p;
    p.alpha = number(member(j, "alpha"), "alpha");
    p.beta = number(member(j, "beta"), "beta");
    p.k = number(member(j, "k"), "k");
    const Json& dj = member(j, "d");
    if (!dj.is_number_integer()) throw ParameterError("'d' must be an integer");
    p.d = dj.get<int>();
    validate(p);
    return p;
}

Json weight_to_json(const WeightSpec& w) {
    Json j{{"a", static_cast<double>(w.a)},
           {"b", static_cast<double>(w.b)},
           {"atom0", w.atom0 ? block_to_json(*w.atom0) : Json(nullptr)},
           {"matrix_part", w.part == MatrixPart::jacobi ? "jacobi" : "identity"},
           {"params", w.params ? params_to_json(*w.params) : Json::object()}};
    if (w.part == MatrixPart::identity) j["params"]["d"] = w.d;
    return j;
}

WeightSpec weight_from_json(const Json& j) {
    WeightSpec w;
    w.a = number(member(j, "a"), "a");
    w.b = number(member(j, "b"), "b");
    if (!(w.a > -1) || !(w.b > -1)) throw ParameterError("weight exponents must exceed -1");
    const Json& part = member(j, "matrix_part");
    if (part == "jacobi") {
        w.part = MatrixPart::jacobi;
        w.params = params_from_json(member(j, "params"));
        w.d = w.params->d;
    } else if (part == "identity") {
        w.part = MatrixPart::identity;
        // Without params the size comes from the atom, else d = 1.
        if (j.contains("params")) {
            const Json& dj = member(j.at("params"), "d");
            if (!dj.is_number_integer() || dj.get<int>() < 1) throw ParameterError("'params.d' must be a positive integer");
            w.d = dj.get<int>();
        } else if (j.contains("atom0") && !j.at("atom0").is_null()) {
            w.d = static_cast<int>(block_from_json(j.at("atom0")).rows());
        }
    } else {
        throw ParameterError("'matrix_part' must be \"jacobi\" or \"identity\"");
    }
    if (j.contains("atom0") && !j.at("atom0").is_null()) w.atom0 = block_from_json(j.at("atom0"), w.d);
    return w;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParameterError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ParameterError("failed writing '" + path + "'");
}

}  // namespace qbd
