#include "qsym/modelfile.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qsym {

using nlohmann::json;

namespace {

class ExprParser {
public:
    ExprParser(const std::string& s, const std::map<std::string, double>& p) : src_(s), params_(p) {}

    double parse() {
        const double v = sum();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return v;
    }

private:
    const std::string& src_;
    const std::map<std::string, double>& params_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::ParseError, "expression \"" + src_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    double sum() {
        double v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }
    double product() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    double power() {
        const double base = atom();
        if (eat('^')) return std::pow(base, unary());  // right associative
        return base;
    }
    double atom() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end");
        if (eat('(')) {
            const double v = sum();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            double v = 0;
            try {
                v = std::stod(src_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string id = src_.substr(start, pos_ - start);
            if (eat('(')) {
                const double a = sum();
                if (!eat(')')) fail("expected ')'");
                if (id == "sqrt") return std::sqrt(a);
                if (id == "sin") return std::sin(a);
                if (id == "cos") return std::cos(a);
                if (id == "tan") return std::tan(a);
                if (id == "exp") return std::exp(a);
                if (id == "log") return std::log(a);
                if (id == "abs") return std::abs(a);
                fail("unknown function " + id);
            }
            if (auto it = params_.find(id); it != params_.end()) return it->second;
            if (id == "pi") return kPi;
            fail("unknown parameter " + id);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

struct Ctx {
    std::map<std::string, double> params;

    double real(const json& v, const std::string& where) const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return evaluate_expression(v.get<std::string>(), params);
        throw Error(ErrorKind::ParseError, where + ": expected a number or expression");
    }
    cplx entry(const json& v, const std::string& where) const {
        if (v.is_array()) {
            if (v.size() != 2) throw Error(ErrorKind::ParseError, where + ": complex entry must be [re, im]");
            return {real(v[0], where), real(v[1], where)};
        }
        return real(v, where);
    }
    Mat matrix(const json& v, int dim, const std::string& where) const {
        Mat M = Mat::Zero(dim, dim);
        if (v.is_object()) {
            if (!v.contains("sparse") || !v["sparse"].is_array())
                throw Error(ErrorKind::ParseError, where + ": object matrices need a \"sparse\" list");
            for (const auto& e : v["sparse"]) {
                if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer())
                    throw Error(ErrorKind::ParseError, where + ": sparse entries are [row, col, value]");
                const int r = e[0].get<int>(), c = e[1].get<int>();
                if (r < 1 || r > dim || c < 1 || c > dim)
                    throw Error(ErrorKind::DimensionMismatch, where + ": sparse index outside 1.." + std::to_string(dim));
                M(r - 1, c - 1) += entry(e[2], where);
            }
            return M;
        }
        if (!v.is_array() || static_cast<int>(v.size()) != dim)
            throw Error(ErrorKind::DimensionMismatch, where + ": expected " + std::to_string(dim) + " rows");
        for (int r = 0; r < dim; ++r) {
            if (!v[r].is_array() || static_cast<int>(v[r].size()) != dim)
                throw Error(ErrorKind::DimensionMismatch,
                            where + ": row " + std::to_string(r + 1) + " must have " + std::to_string(dim) + " entries");
            for (int c = 0; c < dim; ++c) M(r, c) = entry(v[r][c], where);
        }
        return M;
    }
};

std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json number(double x) {
    // keep integers readable
    if (x == std::floor(x) && std::abs(x) < 1e15) return static_cast<long long>(x);
    return x;
}

}  // namespace

double evaluate_expression(const std::string& expr, const std::map<std::string, double>& params) {
    return ExprParser(expr, params).parse();
}

Model parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte is one past the offending character
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "model must be a JSON object");
    try {
        Model m;
        Ctx ctx;
        m.name = j.value("name", std::string("model"));
        m.description = j.value("description", std::string());
        if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
            throw Error(ErrorKind::ParseError, "\"dim\" must be a positive integer");
        const int dim = j["dim"].get<int>();
        if (j.contains("parameters")) {
            for (const auto& [k, v] : j["parameters"].items()) ctx.params[k] = ctx.real(v, "parameter " + k);
        }
        m.parameters = ctx.params;
        if (!j.contains("hamiltonian")) throw Error(ErrorKind::ParseError, "missing \"hamiltonian\"");
        const Mat H = ctx.matrix(j["hamiltonian"], dim, "hamiltonian");
        std::vector<Mat> jumps;
        std::vector<std::string> labels;
        for (const auto& e : j.value("jumps", json::array())) {
            const std::string name = e.value("name", "J" + std::to_string(jumps.size() + 1));
            if (!e.contains("matrix")) throw Error(ErrorKind::ParseError, "jump " + name + ": missing \"matrix\"");
            jumps.push_back(ctx.matrix(e["matrix"], dim, "jump " + name));
            labels.push_back(name);
        }
        m.rep = Representation::make(H, jumps, labels);
        for (const auto& e : j.value("symmetries", json::array())) {
            const std::string name = e.value("name", "U" + std::to_string(m.symmetries.size() + 1));
            if (!e.contains("matrix")) throw Error(ErrorKind::ParseError, "symmetry " + name + ": missing \"matrix\"");
            const Mat U = ctx.matrix(e["matrix"], dim, "symmetry " + name);
            if (unitarity_defect(U) > 1e-9) throw Error(ErrorKind::NotUnitary, "symmetry " + name + " is not unitary");
            m.symmetries.push_back({name, U});
        }
        if (j.contains("partition")) {
            std::vector<std::vector<int>> groups;
            for (const auto& g : j["partition"]) {
                std::vector<int> grp;
                for (const auto& k : g) {
                    const int idx = k.get<int>();
                    if (idx < 1 || idx > m.rep.num_jumps())
                        throw Error(ErrorKind::IndexError, "partition index " + std::to_string(idx) + " out of range");
                    grp.push_back(idx - 1);
                }
                groups.push_back(grp);
            }
            m.partition = groups;
        }
        for (const auto& e : j.value("expect", json::array())) {
            Expectation x;
            x.symmetry = e.at("symmetry").get<std::string>();
            x.I = e.value("I", false);
            x.II = e.value("II", false);
            x.III = e.value("III", false);
            m.expect.push_back(x);
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (int r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < M.cols(); ++c) row.push_back({number(M(r, c).real()), number(M(r, c).imag())});
        rows.push_back(row);
    }
    return rows;
}

namespace {

// Dense output for small matrices, sparse beyond.
json matrix_field(const Mat& M) {
    if (M.rows() <= 8) return matrix_to_json(M);
    json entries = json::array();
    for (int r = 0; r < M.rows(); ++r)
        for (int c = 0; c < M.cols(); ++c)
            if (M(r, c) != cplx(0.0))
                entries.push_back({r + 1, c + 1, {number(M(r, c).real()), number(M(r, c).imag())}});
    return {{"sparse", entries}};
}

}  // namespace

json model_to_json(const Model& m) {
    json j;
    j["name"] = m.name;
    j["description"] = m.description;
    j["dim"] = m.rep.dim;
    json params = json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = params;
    j["hamiltonian"] = matrix_field(m.rep.H);
    json jumps = json::array();
    for (int k = 0; k < m.rep.num_jumps(); ++k) {
        const std::string name = k < static_cast<int>(m.rep.labels.size()) ? m.rep.labels[k] : "J" + std::to_string(k + 1);
        jumps.push_back({{"name", name}, {"matrix", matrix_field(m.rep.jumps[k])}});
    }
    j["jumps"] = jumps;
    json syms = json::array();
    for (const auto& s : m.symmetries) syms.push_back({{"name", s.name}, {"matrix", matrix_field(s.U)}});
    j["symmetries"] = syms;
    if (m.partition) {
        json groups = json::array();
        for (const auto& g : *m.partition) {
            json grp = json::array();
            for (int k : g) grp.push_back(k + 1);
            groups.push_back(grp);
        }
        j["partition"] = groups;
    }
    json expect = json::array();
    for (const auto& e : m.expect) expect.push_back({{"symmetry", e.symmetry}, {"I", e.I}, {"II", e.II}, {"III", e.III}});
    j["expect"] = expect;
    return j;
}

std::string write_model(const Model& m) { return model_to_json(m).dump(2) + "\n"; }

}  // namespace qsym
