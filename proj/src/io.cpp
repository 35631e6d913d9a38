#include "sbdc/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sbdc {

ParseError::ParseError(const std::string& msg, int line, int column)
    : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
      line(line), column(column) {}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json scalar_to_json(const Scalar& s, Field field) {
    if (field == Field::Real)
        return Json(s.real());
    return Json::array({s.real(), s.imag()});
}

Scalar scalar_from_json(const Json& j) {
    if (j.is_number())
        return Scalar(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Scalar(j[0].get<double>(), j[1].get<double>());
    throw SchemaError("matrix entries must be numbers or [re, im] pairs");
}

Json matrix_to_json(const Matrix& a, Field field) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            row.push_back(scalar_to_json(a(r, c), field));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw SchemaError("matrix must be an array of " + std::to_string(rows) + " rows");
    Matrix a(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw SchemaError("matrix rows must have " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c)
            a(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
    }
    return a;
}

} // namespace

MatrixSet matrix_set_from_json(const Json& doc) {
    if (!doc.is_object())
        throw SchemaError("document must be a JSON object");
    if (!doc.contains("schema_version") || doc["schema_version"] != "1")
        throw SchemaError("unsupported schema_version (expected \"1\")");

    MatrixSet set;
    const std::string field = doc.value("field", "");
    if (field == "real")
        set.field = Field::Real;
    else if (field == "complex")
        set.field = Field::Complex;
    else
        throw SchemaError("field must be \"real\" or \"complex\"");

    const std::string kind = doc.value("kind", "");
    if (kind == "symmetric")
        set.kind = SymmetryKind::Symmetric;
    else if (kind == "hermitian")
        set.kind = SymmetryKind::Hermitian;
    else
        throw SchemaError("kind must be \"symmetric\" or \"hermitian\"");
    if (set.kind == SymmetryKind::Hermitian && set.field == Field::Real)
        throw SchemaError("hermitian sets must declare field \"complex\"");

    if (!doc.contains("n") || !doc.contains("m") || !doc["n"].is_number_integer() ||
        !doc["m"].is_number_integer())
        throw SchemaError("n and m must be integers");
    const int n = doc["n"].get<int>();
    const int m = doc["m"].get<int>();
    if (n < 1)
        throw SchemaError("n must be >= 1");
    if (m < 1)
        throw SchemaError("empty matrix set (m must be >= 1)");

    if (!doc.contains("matrices") || !doc["matrices"].is_array())
        throw SchemaError("matrices must be an array");
    if (doc["matrices"].empty())
        throw SchemaError("empty matrix set");
    if (static_cast<int>(doc["matrices"].size()) != m)
        throw SchemaError("matrices array length disagrees with m");
    for (const Json& mj : doc["matrices"])
        set.matrices.push_back(matrix_from_json(mj, n, n));
    return set;
}

Json matrix_set_to_json(const MatrixSet& set) {
    Json doc = Json::object();
    doc["schema_version"] = "1";
    doc["field"] = to_string(set.field);
    doc["kind"] = to_string(set.kind);
    doc["n"] = set.n();
    doc["m"] = set.m();
    Json mats = Json::array();
    for (const Matrix& a : set.matrices)
        mats.push_back(matrix_to_json(a, set.field));
    doc["matrices"] = std::move(mats);
    return doc;
}

MatrixSet load_matrix_set(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return matrix_set_from_json(doc);
}

void save_matrix_set(const MatrixSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << matrix_set_to_json(set).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Quadratic-form parser: a hand-rolled recursive descent over
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := primary ['^' integer]
//   primary:= number | ident | '(' expr ')' | ('+'|'-') primary
// Polynomials are expanded monomial maps; every surviving monomial must have
// total degree 2.
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum Type { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End } type;
    std::string text;
    double value = 0.0;
    int column = 0;
};

std::vector<Token> tokenize(const std::string& line, int line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    // U+2212 (minus sign) is accepted as '-'
    std::string s;
    s.reserve(line.size());
    for (std::size_t k = 0; k < line.size();) {
        if (k + 2 < line.size() && static_cast<unsigned char>(line[k]) == 0xE2 &&
            static_cast<unsigned char>(line[k + 1]) == 0x88 &&
            static_cast<unsigned char>(line[k + 2]) == 0x92) {
            s += '-';
            k += 3;
        } else {
            s += line[k++];
        }
    }
    while (i < s.size()) {
        const char c = s[i];
        const int col = static_cast<int>(i) + 1;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = i;
            while (end < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.'))
                ++end;
            if (end < s.size() && (s[end] == 'e' || s[end] == 'E')) {
                std::size_t e = end + 1;
                if (e < s.size() && (s[e] == '+' || s[e] == '-'))
                    ++e;
                if (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) {
                    while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e])))
                        ++e;
                    end = e;
                }
            }
            const std::string text = s.substr(i, end - i);
            try {
                out.push_back({Token::Number, text, std::stod(text), col});
            } catch (const std::exception&) {
                throw ParseError("malformed number '" + text + "'", line_no, col);
            }
            i = end;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = i;
            while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) ||
                                      s[end] == '_'))
                ++end;
            out.push_back({Token::Ident, s.substr(i, end - i), 0.0, col});
            i = end;
            continue;
        }
        switch (c) {
        case '+': out.push_back({Token::Plus, "+", 0.0, col}); break;
        case '-': out.push_back({Token::Minus, "-", 0.0, col}); break;
        case '*': out.push_back({Token::Star, "*", 0.0, col}); break;
        case '^': out.push_back({Token::Caret, "^", 0.0, col}); break;
        case '(': out.push_back({Token::LParen, "(", 0.0, col}); break;
        case ')': out.push_back({Token::RParen, ")", 0.0, col}); break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
        }
        ++i;
    }
    out.push_back({Token::End, "", 0.0, static_cast<int>(s.size()) + 1});
    return out;
}

using Monomial = std::map<std::string, int>;
using Poly = std::map<Monomial, double>;

Poly poly_const(double v) {
    Poly p;
    if (v != 0.0)
        p[{}] = v;
    return p;
}

Poly poly_var(const std::string& name) {
    Poly p;
    p[{{name, 1}}] = 1.0;
    return p;
}

Poly poly_add(const Poly& a, const Poly& b, double sign) {
    Poly out = a;
    for (const auto& [mono, coeff] : b) {
        out[mono] += sign * coeff;
        if (out[mono] == 0.0)
            out.erase(mono);
    }
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Monomial m = ma;
            for (const auto& [name, exp] : mb)
                m[name] += exp;
            out[m] += ca * cb;
            if (out[m] == 0.0)
                out.erase(m);
        }
    }
    return out;
}

class FormParser {
public:
    FormParser(std::vector<Token> tokens, int line_no)
        : tokens_(std::move(tokens)), line_(line_no) {}

    Poly parse() {
        Poly p = expr();
        if (peek().type != Token::End)
            throw ParseError("unexpected trailing input '" + peek().text + "'", line_,
                             peek().column);
        return p;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }
    bool accept(Token::Type t) {
        if (peek().type == t) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        double sign = 1.0;
        if (accept(Token::Minus))
            sign = -1.0;
        else
            accept(Token::Plus);
        Poly p = poly_mul(poly_const(sign), term());
        while (peek().type == Token::Plus || peek().type == Token::Minus) {
            const double s = next().type == Token::Plus ? 1.0 : -1.0;
            p = poly_add(p, term(), s);
        }
        return p;
    }

    Poly term() {
        Poly p = factor();
        while (accept(Token::Star))
            p = poly_mul(p, factor());
        return p;
    }

    Poly factor() {
        Poly p = primary();
        if (accept(Token::Caret)) {
            const Token& t = peek();
            if (t.type != Token::Number || t.value != std::floor(t.value) || t.value < 0)
                throw ParseError("exponent must be a nonnegative integer", line_, t.column);
            next();
            const int e = static_cast<int>(t.value);
            Poly out = poly_const(1.0);
            for (int k = 0; k < e; ++k)
                out = poly_mul(out, p);
            p = out;
        }
        return p;
    }

    Poly primary() {
        const Token& t = peek();
        switch (t.type) {
        case Token::Number:
            next();
            return poly_const(t.value);
        case Token::Ident:
            next();
            return poly_var(t.text);
        case Token::LParen: {
            next();
            Poly p = expr();
            if (!accept(Token::RParen))
                throw ParseError("missing ')'", line_, peek().column);
            return p;
        }
        case Token::Minus:
            next();
            return poly_mul(poly_const(-1.0), primary());
        case Token::Plus:
            next();
            return primary();
        default:
            throw ParseError("expected a number, variable, or '('", line_, t.column);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_;
};

} // namespace

MatrixSet parse_quadratic_forms(const std::string& text,
                                const std::optional<std::vector<std::string>>& variables) {
    std::vector<Poly> polys;
    std::vector<int> poly_lines;
    {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (std::all_of(line.begin(), line.end(),
                            [](unsigned char c) { return std::isspace(c); }))
                continue;
            polys.push_back(FormParser(tokenize(line, line_no), line_no).parse());
            poly_lines.push_back(line_no);
        }
    }
    if (polys.empty())
        throw EmptySet("no quadratic forms given");

    // variable resolution: explicit names, or x1..xn inferred
    std::map<std::string, int> index;
    int n = 0;
    if (variables) {
        n = static_cast<int>(variables->size());
        for (int j = 0; j < n; ++j)
            index[(*variables)[static_cast<std::size_t>(j)]] = j;
    } else {
        for (std::size_t f = 0; f < polys.size(); ++f) {
            for (const auto& [mono, coeff] : polys[f]) {
                for (const auto& [name, exp] : mono) {
                    if (name.size() < 2 || name[0] != 'x' ||
                        !std::all_of(name.begin() + 1, name.end(), [](unsigned char c) {
                            return std::isdigit(c);
                        }))
                        throw UnknownVariable("unknown variable '" + name +
                                                  "' (expected x1, x2, ...)",
                                              poly_lines[f], 1);
                    const int idx = std::stoi(name.substr(1));
                    if (idx < 1)
                        throw UnknownVariable("variable indices start at x1", poly_lines[f], 1);
                    n = std::max(n, idx);
                }
            }
        }
        if (n == 0)
            n = 1; // forms without variables are only the zero form
        for (int j = 1; j <= n; ++j)
            index["x" + std::to_string(j)] = j - 1;
    }

    MatrixSet set;
    set.kind = SymmetryKind::Symmetric;
    set.field = Field::Real;
    for (std::size_t f = 0; f < polys.size(); ++f) {
        Matrix a = Matrix::Zero(n, n);
        for (const auto& [mono, coeff] : polys[f]) {
            if (coeff == 0.0)
                continue;
            int degree = 0;
            for (const auto& [name, exp] : mono)
                degree += exp;
            if (degree != 2)
                throw NonQuadraticTerm("monomial of degree " + std::to_string(degree) +
                                           " in a quadratic form",
                                       poly_lines[f], 1);
            std::vector<std::pair<int, int>> vars;
            for (const auto& [name, exp] : mono) {
                const auto it = index.find(name);
                if (it == index.end())
                    throw UnknownVariable("unknown variable '" + name + "'", poly_lines[f], 1);
                vars.emplace_back(it->second, exp);
            }
            if (vars.size() == 1) {
                a(vars[0].first, vars[0].first) += coeff;
            } else {
                a(vars[0].first, vars[1].first) += coeff / 2.0;
                a(vars[1].first, vars[0].first) += coeff / 2.0;
            }
        }
        set.matrices.push_back(std::move(a));
    }
    return set;
}

std::string quadratic_form_to_string(const Matrix& a, const std::vector<std::string>& names) {
    const int n = static_cast<int>(a.rows());
    if (static_cast<int>(names.size()) != n || a.cols() != n)
        throw DimensionMismatch("one variable name per matrix dimension required");
    std::string out;
    auto append_term = [&out](double coeff, const std::string& body) {
        if (coeff == 0.0)
            return;
        if (out.empty())
            out += coeff < 0 ? "-" : "";
        else
            out += coeff < 0 ? " - " : " + ";
        out += format_double(std::abs(coeff)) + "*" + body;
    };
    for (int j = 0; j < n; ++j)
        append_term(a(j, j).real(), names[static_cast<std::size_t>(j)] + "^2");
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            append_term(2.0 * a(j, k).real(),
                        names[static_cast<std::size_t>(j)] + "*" +
                            names[static_cast<std::size_t>(k)]);
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

ReportNode report_node_from(const DecompositionNode& node) {
    ReportNode rn;
    rn.size = node.size;
    rn.depth = node.depth;
    rn.center_dim = node.center_dim;
    rn.restricted_dim = node.restricted_dim;
    rn.tries = node.tries;
    rn.leaf = node.leaf;
    if (node.leaf) {
        rn.evidence = to_string(node.evidence);
    } else {
        rn.split_sizes = node.step->sizes;
        rn.children.push_back(report_node_from(*node.left));
        rn.children.push_back(report_node_from(*node.right));
    }
    return rn;
}

Json node_to_json(const ReportNode& node) {
    Json j = Json::object();
    j["size"] = node.size;
    j["depth"] = node.depth;
    j["center_dim"] = node.center_dim;
    j["restricted_dim"] = node.restricted_dim;
    j["tries"] = node.tries;
    if (node.leaf) {
        j["outcome"] = "leaf";
        j["evidence"] = node.evidence;
    } else {
        j["outcome"] = "split";
        j["sizes"] = Json::array({node.split_sizes.first, node.split_sizes.second});
        j["left"] = node_to_json(node.children[0]);
        j["right"] = node_to_json(node.children[1]);
    }
    return j;
}

ReportNode node_from_json(const Json& j) {
    ReportNode node;
    node.size = j.at("size").get<int>();
    node.depth = j.at("depth").get<int>();
    node.center_dim = j.at("center_dim").get<int>();
    node.restricted_dim = j.at("restricted_dim").get<int>();
    node.tries = j.at("tries").get<int>();
    const std::string outcome = j.at("outcome").get<std::string>();
    if (outcome == "leaf") {
        node.leaf = true;
        node.evidence = j.at("evidence").get<std::string>();
    } else if (outcome == "split") {
        node.leaf = false;
        node.split_sizes = {j.at("sizes")[0].get<int>(), j.at("sizes")[1].get<int>()};
        node.children.push_back(node_from_json(j.at("left")));
        node.children.push_back(node_from_json(j.at("right")));
    } else {
        throw SchemaError("node outcome must be \"leaf\" or \"split\"");
    }
    return node;
}

void collect_leaf_sizes(const ReportNode& node, std::vector<int>& out) {
    if (node.leaf) {
        out.push_back(node.size);
        return;
    }
    collect_leaf_sizes(node.children[0], out);
    collect_leaf_sizes(node.children[1], out);
}

Mode mode_from_string(const std::string& s) {
    if (s == "congruence")
        return Mode::Congruence;
    if (s == "orthogonal")
        return Mode::OrthogonalCongruence;
    if (s == "star")
        return Mode::StarCongruence;
    if (s == "unitary")
        return Mode::UnitaryStarCongruence;
    throw SchemaError("unknown mode \"" + s + "\"");
}

} // namespace

DecompositionReport make_report(const Decomposition& dec, const MatrixSet& set,
                                const SolverConfig& cfg, double wall_time_ms) {
    DecompositionReport rep;
    rep.mode = dec.mode;
    rep.kind = set.kind;
    rep.field = set.field;
    rep.seed = cfg.seed;
    rep.config = cfg;
    rep.n = set.n();
    rep.m = set.m();
    rep.block_sizes_tree = dec.block_sizes;
    rep.block_sizes_sorted = dec.sorted_block_sizes();
    rep.p_global = dec.p_global;
    rep.blocks = dec.blocks;
    rep.residuals = dec.residuals;
    rep.certified_finest = dec.certified_finest;
    rep.tree = report_node_from(dec.tree);
    rep.wall_time_ms = wall_time_ms;
    return rep;
}

Json report_to_json(const DecompositionReport& rep) {
    const Field pf = rep.field == Field::Real && rep.p_global.imag().norm() == 0.0
                         ? Field::Real
                         : Field::Complex;
    Json j = Json::object();
    j["schema_version"] = rep.schema_version;
    j["mode"] = to_string(rep.mode);
    j["kind"] = to_string(rep.kind);
    j["field"] = to_string(rep.field);
    j["seed"] = rep.seed;
    j["tolerances"] = Json::object({{"tol_sym", rep.config.tol_sym},
                                    {"tol_rank", rep.config.tol_rank},
                                    {"tol_idem", rep.config.tol_idem},
                                    {"tol_block", rep.config.tol_block},
                                    {"cluster_gap", rep.config.cluster_gap},
                                    {"max_tries", rep.config.max_tries},
                                    {"max_depth", rep.config.max_depth}});
    j["n"] = rep.n;
    j["m"] = rep.m;
    j["block_sizes_tree_order"] = rep.block_sizes_tree;
    j["block_sizes_sorted"] = rep.block_sizes_sorted;
    j["p_global"] = matrix_to_json(rep.p_global, pf);
    Json blocks = Json::array();
    for (const auto& per_matrix : rep.blocks) {
        Json list = Json::array();
        for (const Matrix& b : per_matrix)
            list.push_back(matrix_to_json(b, pf));
        blocks.push_back(std::move(list));
    }
    j["blocks"] = std::move(blocks);
    Json res = Json::object();
    res["max_off_block"] = rep.residuals.max_off_block;
    res["max_symmetry"] = rep.residuals.max_symmetry;
    res["max_idempotency"] = rep.residuals.max_idempotency;
    res["max_membership"] = rep.residuals.max_membership;
    if (rep.residuals.transform_orthogonality)
        res["transform_orthogonality"] = *rep.residuals.transform_orthogonality;
    else
        res["transform_orthogonality"] = nullptr;
    j["residuals"] = std::move(res);
    j["certified_finest"] = rep.certified_finest;
    j["tree"] = node_to_json(rep.tree);
    return j;
}

DecompositionReport report_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != "1")
        throw SchemaError("unsupported report schema_version (expected \"1\")");
    DecompositionReport rep;
    rep.mode = mode_from_string(j.at("mode").get<std::string>());
    rep.kind = j.at("kind").get<std::string>() == "hermitian" ? SymmetryKind::Hermitian
                                                              : SymmetryKind::Symmetric;
    rep.field = j.at("field").get<std::string>() == "complex" ? Field::Complex : Field::Real;
    rep.seed = j.at("seed").get<std::uint64_t>();
    const Json& tol = j.at("tolerances");
    rep.config.tol_sym = tol.at("tol_sym").get<double>();
    rep.config.tol_rank = tol.at("tol_rank").get<double>();
    rep.config.tol_idem = tol.at("tol_idem").get<double>();
    rep.config.tol_block = tol.at("tol_block").get<double>();
    rep.config.cluster_gap = tol.at("cluster_gap").get<double>();
    rep.config.max_tries = tol.at("max_tries").get<int>();
    rep.config.max_depth = tol.at("max_depth").get<int>();
    rep.config.seed = rep.seed;
    rep.n = j.at("n").get<int>();
    rep.m = j.at("m").get<int>();
    rep.block_sizes_tree = j.at("block_sizes_tree_order").get<std::vector<int>>();
    rep.block_sizes_sorted = j.at("block_sizes_sorted").get<std::vector<int>>();
    rep.p_global = matrix_from_json(j.at("p_global"), rep.n, rep.n);
    for (const Json& per_matrix : j.at("blocks")) {
        std::vector<Matrix> list;
        std::size_t idx = 0;
        for (const Json& bj : per_matrix) {
            const int bs = idx < rep.block_sizes_tree.size() ? rep.block_sizes_tree[idx] : 0;
            list.push_back(matrix_from_json(bj, bs, bs));
            ++idx;
        }
        rep.blocks.push_back(std::move(list));
    }
    const Json& res = j.at("residuals");
    rep.residuals.max_off_block = res.at("max_off_block").get<double>();
    rep.residuals.max_symmetry = res.at("max_symmetry").get<double>();
    rep.residuals.max_idempotency = res.at("max_idempotency").get<double>();
    rep.residuals.max_membership = res.at("max_membership").get<double>();
    if (!res.at("transform_orthogonality").is_null())
        rep.residuals.transform_orthogonality = res.at("transform_orthogonality").get<double>();
    rep.certified_finest = j.at("certified_finest").get<bool>();
    rep.tree = node_from_json(j.at("tree"));
    return rep;
}

namespace {

void render_node(const ReportNode& node, std::ostream& os, const std::string& indent) {
    os << indent << "size " << node.size << ", center dim " << node.center_dim
       << ", restricted dim " << node.restricted_dim;
    if (node.leaf) {
        os << " -> leaf (" << node.evidence << ")";
        if (node.evidence != "dim_one")
            os << " [no split found within budget; probabilistic evidence only]";
        os << '\n';
    } else {
        os << " -> split (" << node.split_sizes.first << ", " << node.split_sizes.second
           << ")\n";
        render_node(node.children[0], os, indent + "  ");
        render_node(node.children[1], os, indent + "  ");
    }
}

void render_matrix(const Matrix& a, std::ostream& os, const std::string& indent) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        os << indent << "[";
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            const Scalar v = a(r, c);
            os << format_double(v.real());
            if (v.imag() != 0.0)
                os << (v.imag() > 0 ? "+" : "") << format_double(v.imag()) << "i";
            if (c + 1 < a.cols())
                os << ", ";
        }
        os << "]\n";
    }
}

} // namespace

std::string report_to_text(const DecompositionReport& rep) {
    std::ostringstream os;
    os << "simultaneous block diagonalization report\n";
    os << "mode: " << to_string(rep.mode) << "  kind: " << to_string(rep.kind)
       << "  field: " << to_string(rep.field) << "  n: " << rep.n << "  m: " << rep.m << '\n';
    os << "seed: " << rep.seed << '\n';
    os << "block sizes (tree order): [";
    for (std::size_t i = 0; i < rep.block_sizes_tree.size(); ++i)
        os << (i ? ", " : "") << rep.block_sizes_tree[i];
    os << "]\nblock sizes (sorted):     [";
    for (std::size_t i = 0; i < rep.block_sizes_sorted.size(); ++i)
        os << (i ? ", " : "") << rep.block_sizes_sorted[i];
    os << "]\n";
    os << "certified finest: " << (rep.certified_finest ? "yes" : "no (heuristic leaves)")
       << '\n';
    os << "residuals: max_off_block " << format_double(rep.residuals.max_off_block)
       << ", max_symmetry " << format_double(rep.residuals.max_symmetry)
       << ", max_idempotency " << format_double(rep.residuals.max_idempotency)
       << ", max_membership " << format_double(rep.residuals.max_membership);
    if (rep.residuals.transform_orthogonality)
        os << ", transform_orthogonality "
           << format_double(*rep.residuals.transform_orthogonality);
    os << '\n';
    os << "tree:\n";
    render_node(rep.tree, os, "  ");
    os << "P_global:\n";
    render_matrix(rep.p_global, os, "  ");
    for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
        os << "blocks of matrix " << i + 1 << ":\n";
        for (std::size_t b = 0; b < rep.blocks[i].size(); ++b) {
            os << "  block " << b + 1 << ":\n";
            render_matrix(rep.blocks[i][b], os, "    ");
        }
    }
    os << "wall time: " << format_double(rep.wall_time_ms) << " ms\n";
    return os.str();
}

void save_report(const DecompositionReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << report_to_json(report).dump(2) << '\n';
}

DecompositionReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return report_from_json(j);
}

VerificationReport verify_report(const DecompositionReport& report, const MatrixSet& original) {
    VerifyInput input;
    input.p_global = report.p_global;
    input.mode = report.mode;
    input.block_sizes = report.block_sizes_tree;
    input.declared_sorted_block_sizes = report.block_sizes_sorted;
    input.blocks = report.blocks;
    collect_leaf_sizes(report.tree, input.tree_leaf_sizes);
    return verify(input, original, report.config);
}

} // namespace sbdc
