#include "fracpmp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fracpmp {

namespace {

using json = nlohmann::json;

const json& field(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + key, "missing field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "not finite");
    return x;
}

std::size_t positive_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError(path, "expected a positive integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Vec vector_of(const json& v, std::size_t len, const std::string& path) {
    const auto xs = numbers(v, path);
    if (xs.size() != len) {
        throw ConfigError(path, "expected length " + std::to_string(len) + ", got " +
                                    std::to_string(xs.size()));
    }
    return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(len));
}

Mat matrix_of(const json& v, std::size_t rows, std::size_t cols, const std::string& path) {
    if (!v.is_array() || v.size() != rows) {
        throw ConfigError(path, "expected " + std::to_string(rows) + " rows");
    }
    Mat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        out.row(static_cast<Eigen::Index>(r)) =
            vector_of(v[r], cols, path + "[" + std::to_string(r) + "]").transpose();
    }
    return out;
}

json to_array(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_array(const Mat& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_array(Vec(m.row(r).transpose())));
    return a;
}

ControlSet parse_set(const json& v, std::size_t dim, const std::string& path) {
    if (!v.is_object() || v.size() != 1) {
        throw ConfigError(path, "expected exactly one of \"box\" or \"finite\"");
    }
    if (v.contains("box")) {
        const json& b = v["box"];
        const std::string bp = path + ".box";
        if (!b.is_object()) throw ConfigError(bp, "expected an object with lo and hi");
        const Vec lo = vector_of(field(b, "lo", bp + "."), dim, bp + ".lo");
        const Vec hi = vector_of(field(b, "hi", bp + "."), dim, bp + ".hi");
        if ((lo.array() > hi.array()).any()) throw ConfigError(bp, "lo exceeds hi");
        return ControlSet::box(lo, hi);
    }
    if (v.contains("finite")) {
        const json& f = v["finite"];
        const std::string fp = path + ".finite";
        if (!f.is_array() || f.empty()) throw ConfigError(fp, "expected a nonempty array of points");
        std::vector<Vec> pts;
        for (std::size_t i = 0; i < f.size(); ++i) {
            pts.push_back(vector_of(f[i], dim, fp + "[" + std::to_string(i) + "]"));
        }
        try {
            return ControlSet::finite(std::move(pts));
        } catch (const InvalidArgument& e) {
            throw ConfigError(fp, e.what());
        }
    }
    throw ConfigError(path, "expected \"box\" or \"finite\"");
}

double poly(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

}  // namespace

LinearProblemConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "top level must be an object");

    LinearProblemConfig c;
    const json& kind = field(doc, "kind", "");
    if (kind == "fdde") {
        c.kind = ProblemKind::Fdde;
    } else if (kind == "vide") {
        c.kind = ProblemKind::Vide;
    } else {
        throw ConfigError("kind", "expected \"fdde\" or \"vide\"");
    }

    c.alpha = number(field(doc, "alpha", ""), "alpha");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha", "alpha out of (0,1)");
    c.delay = number(field(doc, "delay", ""), "delay");
    if (!(c.delay > 0.0)) throw ConfigError("delay", "must be positive");
    c.horizon = number(field(doc, "horizon", ""), "horizon");
    if (!(c.horizon >= c.delay)) throw ConfigError("horizon", "must be at least the delay");
    c.nodes_per_delay = positive_count(field(doc, "nodes_per_delay", ""), "nodes_per_delay");
    c.state_dim = positive_count(field(doc, "state_dim", ""), "state_dim");
    c.control_dim = positive_count(field(doc, "control_dim", ""), "control_dim");
    try {
        (void)c.grid();
    } catch (const Error& e) {
        throw ConfigError("horizon", e.what());
    }

    const std::size_t n = c.state_dim;
    const std::size_t m = c.control_dim;
    c.a_state = matrix_of(field(doc, "a_state", ""), n, n, "a_state");
    c.a_delay = matrix_of(field(doc, "a_delay", ""), n, n, "a_delay");
    c.b_control = matrix_of(field(doc, "b_control", ""), n, m, "b_control");
    c.c_y = vector_of(field(doc, "c_y", ""), n, "c_y").transpose();
    c.c_yh = vector_of(field(doc, "c_yh", ""), n, "c_yh").transpose();

    const json& cost = field(doc, "control_cost", "");
    if (!cost.is_object() || cost.size() != 1) {
        throw ConfigError("control_cost", "expected exactly one of \"linear\" or \"quadratic\"");
    }
    if (cost.contains("linear")) {
        c.cost_kind = ControlCostKind::Linear;
        const json& w = cost["linear"];
        if (w.is_number()) {
            c.linear_weight = RowVec::Constant(static_cast<Eigen::Index>(m),
                                               number(w, "control_cost.linear"));
        } else {
            c.linear_weight = vector_of(w, m, "control_cost.linear").transpose();
        }
    } else if (cost.contains("quadratic")) {
        c.cost_kind = ControlCostKind::Quadratic;
        c.quadratic_weight = number(cost["quadratic"], "control_cost.quadratic");
        if (!(c.quadratic_weight >= 0.0)) {
            throw ConfigError("control_cost.quadratic", "weight must be nonnegative");
        }
        c.linear_weight = RowVec::Zero(static_cast<Eigen::Index>(m));
    } else {
        throw ConfigError("control_cost", "expected \"linear\" or \"quadratic\"");
    }

    c.control_set = parse_set(field(doc, "control_set", ""), m, "control_set");

    if (c.kind == ProblemKind::Vide) {
        const json& eta = field(doc, "eta", "");
        if (!eta.is_array() || eta.size() != n) {
            throw ConfigError("eta", "expected one coefficient array per state component");
        }
        for (std::size_t i = 0; i < n; ++i) {
            c.eta.push_back(numbers(eta[i], "eta[" + std::to_string(i) + "]"));
        }
    } else if (doc.contains("eta")) {
        throw ConfigError("eta", "only allowed for kind \"vide\"");
    }
    return c;
}

LinearProblemConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const LinearProblemConfig& c) {
    json doc;
    doc["kind"] = c.kind == ProblemKind::Fdde ? "fdde" : "vide";
    doc["alpha"] = c.alpha;
    doc["delay"] = c.delay;
    doc["horizon"] = c.horizon;
    doc["nodes_per_delay"] = c.nodes_per_delay;
    doc["state_dim"] = c.state_dim;
    doc["control_dim"] = c.control_dim;
    doc["a_state"] = to_array(c.a_state);
    doc["a_delay"] = to_array(c.a_delay);
    doc["b_control"] = to_array(c.b_control);
    doc["c_y"] = to_array(Vec(c.c_y.transpose()));
    doc["c_yh"] = to_array(Vec(c.c_yh.transpose()));
    if (c.cost_kind == ControlCostKind::Linear) {
        doc["control_cost"] = {{"linear", to_array(Vec(c.linear_weight.transpose()))}};
    } else {
        doc["control_cost"] = {{"quadratic", c.quadratic_weight}};
    }
    if (const auto* box = c.control_set.as_box()) {
        doc["control_set"] = {{"box", {{"lo", to_array(box->lo)}, {"hi", to_array(box->hi)}}}};
    } else {
        json pts = json::array();
        for (const auto& p : c.control_set.as_finite()->points) pts.push_back(to_array(p));
        doc["control_set"] = {{"finite", pts}};
    }
    if (c.kind == ProblemKind::Vide) doc["eta"] = c.eta;
    return doc.dump(2) + "\n";
}

Problem make_problem(const LinearProblemConfig& c) {
    const Mat A = c.a_state;
    const Mat Ad = c.a_delay;
    const Mat B = c.b_control;
    const RowVec cy = c.c_y;
    const RowVec cyh = c.c_yh;
    const RowVec r = c.linear_weight;
    const double q = c.quadratic_weight;
    const bool quadratic = c.cost_kind == ControlCostKind::Quadratic;

    const auto g = [cy, cyh, r, q, quadratic](double, const Vec& y, const Vec& yh, const Vec& u) {
        const double control = quadratic ? q * u.squaredNorm() : r.dot(u.transpose());
        return cy.dot(y.transpose()) + cyh.dot(yh.transpose()) + control;
    };
    const auto g_y = [cy](double, const Vec&, const Vec&, const Vec&) -> RowVec { return cy; };
    const auto g_yh = [cyh](double, const Vec&, const Vec&, const Vec&) -> RowVec { return cyh; };

    if (c.kind == ProblemKind::Fdde) {
        FddeProblem p;
        p.alpha = c.alpha;
        p.horizon = c.horizon;
        p.delay = c.delay;
        p.state_dim = c.state_dim;
        p.control_dim = c.control_dim;
        p.f = [A, Ad, B](double, const Vec& y, const Vec& yh, const Vec& u) -> Vec {
            return A * y + Ad * yh + B * u;
        };
        p.f_y = [A](double, const Vec&, const Vec&, const Vec&) -> Mat { return A; };
        p.f_yh = [Ad](double, const Vec&, const Vec&, const Vec&) -> Mat { return Ad; };
        p.g = g;
        p.g_y = g_y;
        p.g_yh = g_yh;
        p.controls = c.control_set;
        p.validate();
        return p;
    }
    VideProblem p;
    p.alpha = c.alpha;
    p.horizon = c.horizon;
    p.delay = c.delay;
    p.state_dim = c.state_dim;
    p.control_dim = c.control_dim;
    p.f = [A, Ad, B](double, double, const Vec& y, const Vec& yh, const Vec& u) -> Vec {
        return A * y + Ad * yh + B * u;
    };
    p.f_y = [A](double, double, const Vec&, const Vec&, const Vec&) -> Mat { return A; };
    p.f_yh = [Ad](double, double, const Vec&, const Vec&, const Vec&) -> Mat { return Ad; };
    p.eta = [eta = c.eta](double t) {
        Vec out(static_cast<Eigen::Index>(eta.size()));
        for (std::size_t i = 0; i < eta.size(); ++i) out[static_cast<Eigen::Index>(i)] = poly(eta[i], t);
        return out;
    };
    p.g = g;
    p.g_y = g_y;
    p.g_yh = g_yh;
    p.controls = c.control_set;
    p.validate();
    return p;
}

Problem load_problem(const std::string& text) { return make_problem(parse_config(text)); }

bool same_problem(const LinearProblemConfig& a, const LinearProblemConfig& b) {
    const auto same_set = [](const ControlSet& x, const ControlSet& y) {
        if (x.as_box() && y.as_box()) {
            return x.as_box()->lo == y.as_box()->lo && x.as_box()->hi == y.as_box()->hi;
        }
        if (x.as_finite() && y.as_finite()) return x.as_finite()->points == y.as_finite()->points;
        return false;
    };
    return a.kind == b.kind && a.alpha == b.alpha && a.delay == b.delay &&
           a.horizon == b.horizon && a.nodes_per_delay == b.nodes_per_delay &&
           a.state_dim == b.state_dim && a.control_dim == b.control_dim &&
           a.a_state == b.a_state && a.a_delay == b.a_delay && a.b_control == b.b_control &&
           a.c_y == b.c_y && a.c_yh == b.c_yh && a.cost_kind == b.cost_kind &&
           a.linear_weight == b.linear_weight && a.quadratic_weight == b.quadratic_weight &&
           same_set(a.control_set, b.control_set) && a.eta == b.eta;
}

}  // namespace fracpmp
