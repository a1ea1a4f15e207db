#include "gnls/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace gnls::io {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Nonlinearity nonlinearity_from_json(const json& j) {
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw std::invalid_argument("nonlinearity json: expected {\"coeffs\": [a_1, ...]}");
    std::vector<double> coeffs;
    for (const auto& v : j["coeffs"]) coeffs.push_back(v.get<double>());
    return Nonlinearity(coeffs);
}

Nonlinearity load_nonlinearity(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open nonlinearity file: " + path.string());
    json j;
    in >> j;
    return nonlinearity_from_json(j);
}

json nonlinearity_to_json(const Nonlinearity& nl) { return json{{"coeffs", nl.coeffs()}}; }

json to_json(const HypothesisReport& rep) {
    json j{{"h1", {{"holds", rep.h1_holds}, {"margin", rep.h1_margin}, {"tail_ok", rep.h1_tail_ok}}},
           {"h2", {{"holds", rep.h2_holds}, {"exponent", rep.h2_exponent}, {"constant", rep.h2_constant}}},
           {"h3", {{"holds", rep.h3_holds}, {"value", rep.h3_value}}},
           {"lambda", rep.lambda},
           {"grid", {{"rho_max", rep.rho_max}, {"n_samples", rep.n_samples}}}};
    if (rep.remark18) {
        j["remark18"] = {{"holds", *rep.remark18}, {"a", *rep.remark18_a}, {"p", *rep.remark18_p}};
    } else {
        j["remark18"] = nullptr;
    }
    return j;
}

json to_json(const StructuralConstants& sc) {
    return json{{"c_s", sc.c_s},
                {"lambda", sc.lambda},
                {"k", sc.k},
                {"gamma", sc.gamma},
                {"h1_certified", sc.h1_certified}};
}

json to_json(const AsymptoteFit& fit) {
    return json{{"c0", fit.c0},
                {"intercept", fit.intercept},
                {"spread", fit.spread},
                {"points_used", fit.points_used}};
}

json to_json(const CurveCertification& cert) {
    return json{{"lipschitz", {{"ok", cert.lipschitz_ok}, {"margin", cert.lipschitz_margin}}},
                {"monotone", {{"ok", cert.monotone_ok}, {"margin", cert.monotone_margin}}},
                {"concavity", {{"ok", cert.concavity_ok}, {"margin", cert.concavity_margin}}},
                {"subadditivity",
                 {{"ok", cert.subadditive_ok}, {"margin", cert.subadditive_margin}}},
                {"small_q_exponent",
                 {{"value", cert.fitted_exponent}, {"points", cert.exponent_points}}},
                {"h_at_q_star", cert.h_at_q_star},
                {"h_at_1_32", cert.h_at_1_32},
                {"q_star_above_1_32", cert.q_star_above_1_32}};
}

json to_json(const KdvReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"eps", r.eps},
                        {"E_num", r.E_num},
                        {"E_pred", r.E_pred},
                        {"E_resid", r.E_resid},
                        {"p_num", r.p_num},
                        {"p_closed", r.p_closed},
                        {"p_resid", r.p_resid},
                        {"q_eps", r.q_eps}});
    }
    return json{{"rows", rows},
                {"energy_slope", rep.energy_slope},
                {"k", rep.k},
                {"c_s", rep.c_s},
                {"K1", rep.K1}};
}

json to_json(const AppendixAudit& audit) {
    json j{{"eta_bound_margin", audit.eta_bound_margin},
           {"lambda", audit.lambda},
           {"all_hold", audit.all_hold()}};
    j["pointwise_margin"] =
        audit.pointwise_margin ? json(*audit.pointwise_margin) : json(nullptr);
    j["momentum_margin"] = audit.momentum_margin ? json(*audit.momentum_margin) : json(nullptr);
    return j;
}

std::string branch_csv(const Branch& br) {
    std::ostringstream out;
    out << "c,xi_c,E,p,dE_dc,dp_dc,flags\n";
    for (std::size_t i = 0; i < br.points.size(); ++i) {
        const auto& w = br.points[i];
        out << format_double(w.c) << ',' << format_double(w.xi_c) << ',' << format_double(w.E)
            << ',' << format_double(w.p) << ',' << format_double(br.dE_dc[i]) << ','
            << format_double(br.dp_dc[i]) << ',' << br.flags[i] << '\n';
    }
    return out.str();
}

std::string profile_csv(const SolitonProfile& prof) {
    std::ostringstream out;
    out << "x,eta,phi,re_v,im_v\n";
    for (std::size_t i = 0; i < prof.xs.size(); ++i) {
        out << format_double(prof.xs[i]) << ',' << format_double(prof.eta[i]) << ','
            << format_double(prof.phi[i]) << ',' << format_double(prof.v[i].real()) << ','
            << format_double(prof.v[i].imag()) << '\n';
    }
    return out.str();
}

std::string min_curve_csv(const MinCurve& curve) {
    std::ostringstream out;
    out << "q,Emin,source,delta_p\n";
    for (std::size_t i = 0; i < curve.qs.size(); ++i) {
        const char* src = curve.source[i] == CurveSource::branch
                              ? "branch"
                              : (curve.source[i] == CurveSource::plateau ? "plateau" : "bound");
        out << format_double(curve.qs[i]) << ',' << format_double(curve.Emin[i]) << ',' << src
            << ',' << format_double(curve.delta_p[i]) << '\n';
    }
    return out.str();
}

std::string ledger_csv(const std::vector<LedgerRow>& rows) {
    std::ostringstream out;
    out << "t,E,p,p_untwisted,min_mod,center\n";
    for (const auto& r : rows) {
        out << format_double(r.t) << ',' << format_double(r.E) << ','
            << (r.p_defined ? format_double(r.p) : std::string("nan")) << ','
            << format_double(r.p_untwisted) << ',' << format_double(r.min_mod) << ','
            << format_double(r.center) << '\n';
    }
    return out.str();
}

namespace {

struct Mapper {
    double xmin, xmax, ymin, ymax;
    double w = 760, h = 520, pad = 50;
    double X(double x) const { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); }
    double Y(double y) const { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); }
};

void polyline(std::ostringstream& out, const Mapper& m, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < m.xmin || xs[i] > m.xmax || ys[i] < m.ymin || ys[i] > m.ymax) continue;
        out << m.X(xs[i]) << ',' << m.Y(ys[i]) << ' ';
    }
    out << "\"/>\n";
}

}  // namespace

std::string diagram_svg(const Branch& br, const MinCurve& curve, const AsymptoteFit* fit) {
    Mapper m{0, 1, 0, 1};
    double pmax = 1e-9, emax = curve.E0 * 1.6 + 1e-9;
    for (const auto& w : br.points) pmax = std::max(pmax, w.p);
    pmax = std::min(pmax, std::max(2.5 * curve.q_star, 1.2 * curve.E0));
    m.xmin = 0;
    m.xmax = pmax * 1.05;
    m.ymin = 0;
    m.ymax = emax;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.w << "\" height=\"" << m.h
        << "\" viewBox=\"0 0 " << m.w << ' ' << m.h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << m.X(m.xmin) << "\" y1=\"" << m.Y(0) << "\" x2=\"" << m.X(m.xmax)
        << "\" y2=\"" << m.Y(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << m.X(0) << "\" y1=\"" << m.Y(m.ymin) << "\" x2=\"" << m.X(0)
        << "\" y2=\"" << m.Y(m.ymax) << "\" stroke=\"black\"/>\n";

    // kink energy level
    out << "<line x1=\"" << m.X(m.xmin) << "\" y1=\"" << m.Y(curve.E0) << "\" x2=\""
        << m.X(m.xmax) << "\" y2=\"" << m.Y(curve.E0)
        << "\" stroke=\"crimson\" stroke-dasharray=\"6,4\"/>\n";

    // branch segments (split at gaps)
    std::vector<double> xs, ys;
    auto flush = [&] {
        if (xs.size() > 1) polyline(out, m, xs, ys, "steelblue");
        xs.clear();
        ys.clear();
    };
    for (std::size_t i = 0; i < br.points.size(); ++i) {
        if (i > 0) {
            for (const auto& g : br.gaps)
                if (br.points[i - 1].c < g.first && br.points[i].c > g.first) flush();
        }
        xs.push_back(br.points[i].p);
        ys.push_back(br.points[i].E);
    }
    flush();

    // minimization-curve estimate
    polyline(out, m, curve.qs, curve.Emin, "darkgreen");

    if (fit) {
        const double y0 = fit->intercept, y1 = fit->intercept + fit->c0 * m.xmax;
        out << "<line x1=\"" << m.X(0) << "\" y1=\"" << m.Y(std::max(y0, m.ymin)) << "\" x2=\""
            << m.X(m.xmax) << "\" y2=\"" << m.Y(std::min(y1, m.ymax))
            << "\" stroke=\"orange\"/>\n";
    }
    // transition marker
    out << "<circle cx=\"" << m.X(curve.q_star) << "\" cy=\"" << m.Y(curve.E0)
        << "\" r=\"4\" fill=\"red\"/>\n";
    out << "<text x=\"" << m.X(curve.q_star) + 6 << "\" y=\"" << m.Y(curve.E0) - 6
        << "\" font-size=\"12\">q*=" << format_double(curve.q_star) << " ("
        << to_string(curve.q_star_method) << ")</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Manifest::Data {
    std::string command;
    nlohmann::json nl;
    std::map<std::string, std::string> params;
    std::vector<std::pair<std::string, std::uint64_t>> outputs;
};

Manifest::Manifest(std::string command, const Nonlinearity& nl) : d_(std::make_shared<Data>()) {
    d_->command = std::move(command);
    d_->nl = nonlinearity_to_json(nl);
}

void Manifest::set_param(const std::string& key, const std::string& value) {
    d_->params[key] = value;
}
void Manifest::set_param(const std::string& key, double value) {
    d_->params[key] = format_double(value);
}
void Manifest::set_param(const std::string& key, long value) {
    d_->params[key] = std::to_string(value);
}

void Manifest::write_output(const std::filesystem::path& path, const std::string& bytes) {
    write_file(path, bytes);
    d_->outputs.emplace_back(path.string(), fnv1a64(bytes));
}

nlohmann::json Manifest::json() const {
    nlohmann::json j{{"command", d_->command},
                     {"nl", d_->nl},
                     {"tool_version", "0.1.0"},
                     {"parameters", d_->params}};
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [p, h] : d_->outputs) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
        outs.push_back({{"path", p}, {"fnv1a64", std::string(hex)}});
    }
    j["outputs"] = outs;
    return j;
}

void Manifest::save(const std::filesystem::path& path) const {
    write_file(path, json().dump(2) + "\n");
}

}  // namespace gnls::io
