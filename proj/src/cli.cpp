#include "slicereg/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "slicereg/json_io.hpp"
#include "slicereg/selftest.hpp"

namespace slicereg {

namespace {

struct Options {
    std::string input;
    std::string out;
    std::string format = "json";
    double tol = kCapZeroTol;
    int jobs = 1;
    uint64_t seed = 1;
    std::string grid;
    // douren
    bool caps = false, jumps = false, zeros = false;
    // selftest
    std::vector<int> criteria;
};

json read_input(const Options& o) {
    std::string text;
    if (o.input.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else if (o.input.front() == '{' || o.input.front() == '[') {
        text = o.input;
    } else {
        std::ifstream f(o.input);
        if (!f) fail(ErrorCode::BadInput, "cannot read " + o.input);
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::BadInput, std::string("invalid JSON input: ") + e.what());
    }
}

std::vector<Quat> read_points(const json& in, const char* key, const Options& o) {
    if (!in.contains(key)) return {};
    const json& p = in.at(key);
    if (p.is_object()) {
        // {"random": n, "scale": s}: a seeded probe battery
        std::mt19937_64 rng(o.seed);
        int n = p.at("random");
        double s = p.value("scale", 1.0);
        std::vector<Quat> v;
        for (int k = 0; k < n; ++k) v.push_back(random_quat(rng, s));
        return v;
    }
    return p.get<std::vector<Quat>>();
}

// results land in index order, so output does not depend on the worker count
template <class Fn>
std::vector<json> parallel_map(size_t n, int jobs, Fn fn) {
    std::vector<json> out(n);
    jobs = std::max(1, std::min<int>(jobs, (int)n));
    if (jobs == 1) {
        for (size_t k = 0; k < n; ++k) out[k] = fn(k);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(jobs);
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try {
                for (size_t k = t; k < n; k += jobs) out[k] = fn(k);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

json eval_table(const SliceFunction& f, const std::vector<Quat>& pts, const Options& o) {
    auto rows = parallel_map(pts.size(), o.jobs, [&](size_t k) {
        json r{{"point", pts[k]}};
        try {
            r["value"] = f(pts[k]);
        } catch (const Error& e) {
            r["value"] = nullptr;
            r["error"] = to_string(e.code());
        }
        return r;
    });
    return json{{"function", f.name}, {"backing", to_string(f.backing)}, {"values", rows}};
}

DomainPtr cap_domain_for(const json& spec) {
    auto kind = spec.value("kind", std::string());
    if (kind == "douren") return douren_domain(douren_config_from(spec));
    if (kind == "essential") return essential_tube();
    if (kind == "poly" && spec.contains("domain")) return domain_from_json(spec.at("domain"));
    return whole_space();
}

CapId cap_at(const json& in, const Quat& p) {
    Quat at = in.contains("cap_point") ? in.at("cap_point").get<Quat>() : p;
    return cap_component(*cap_domain_for(in.at("function")), at);
}

std::optional<CapId> optional_cap(const json& in, const Quat& p) {
    if (slice_decompose(p).real && !in.contains("cap_point")) return std::nullopt;
    return cap_at(in, p);
}

json poly_or_null(const SliceFunction& f) { return f.poly ? json(*f.poly) : json(nullptr); }

json cmd_unary(const std::string& verb, const json& in, const Options& o) {
    auto f = function_from_json(in.at("function"));
    SliceFunction g;
    if (verb == "eval") g = f;
    else if (verb == "conj") g = regular_conjugate(f);
    else if (verb == "sym") g = symmetrize(f);
    else g = reciprocal(f);
    json out = eval_table(g, read_points(in, "points", o), o);
    out["poly"] = poly_or_null(g);
    if (g.rational) out["rational"] = json{{"num", g.rational->num}, {"den", g.rational->den.c}};
    return out;
}

json cmd_star(const json& in, const Options& o) {
    auto f = function_from_json(in.at("f"));
    auto g = function_from_json(in.at("g"));
    auto h = in.value("quotient", false) ? quotient(f, g) : star_product(f, g);
    json out = eval_table(h, read_points(in, "points", o), o);
    out["poly"] = poly_or_null(h);
    return out;
}

json cmd_zeros(const json& in, const Options& o) {
    auto spec = in.at("function");
    if (spec.value("kind", std::string()) == "poly" && !spec.contains("domain"))
        return poly_zeros(spec.get<QPolyD>());
    return zero_scan(function_from_json(spec), in.value("resolution", 48), o.tol);
}

json cmd_factor(const json& in, const Options& o) {
    auto f = function_from_json(in.at("function"));
    json out;
    if (in.contains("sphere")) {
        double x = in.at("sphere").at(0), y = in.at("sphere").at(1);
        Quat pt = Quat(x) + y * Quat::i();
        auto g = factor_out_sphere(f, x, y, cap_at(in, pt), o.tol);
        out = eval_table(g, read_points(in, "probes", o), o);
        out["quotient"] = poly_or_null(g);
        if (f.poly) out["normal_form"] = normal_form(*f.poly, x, y, FloatZero{1e-12});
        return out;
    }
    Quat p = in.at("point").get<Quat>();
    auto g = factor_out_point(f, p, optional_cap(in, p), o.tol);
    out = eval_table(g, read_points(in, "probes", o), o);
    out["quotient"] = poly_or_null(g);
    return out;
}

json cmd_mult(const json& in, const Options& o) {
    auto f = function_from_json(in.at("function"));
    Quat p = in.at("point").get<Quat>();
    return multiplicities(f, p, optional_cap(in, p), o.tol);
}

json cmd_series(const json& in, const Options&) {
    auto f = function_from_json(in.at("function"));
    double x0, y0;
    if (in.contains("sphere")) {
        x0 = in.at("sphere").at(0);
        y0 = in.at("sphere").at(1);
    } else {
        auto s = slice_decompose(in.at("point").get<Quat>());
        x0 = s.x;
        y0 = s.y;
    }
    Quat at = in.contains("point") ? in.at("point").get<Quat>() : Quat(x0) + y0 * Quat::i();
    auto cap = cap_at(in, at);
    auto S = spherical_coeffs(f, x0, y0, cap, in.value("depth", 32), in.value("nmin", 0));
    json out = S;
    if (in.contains("probes")) {
        json rows = json::array();
        for (auto& q : in.at("probes").get<std::vector<Quat>>()) rows.push_back({{"point", q}, {"value", eval_series(S, q)}});
        out["values"] = rows;
    }
    return out;
}

json cmd_laurent(const json& in, const Options&) {
    auto f = function_from_json(in.at("function"));
    Quat c = in.at("center").get<Quat>();
    auto w = in.value("window", std::vector<int>{-8, 8});
    if (w.size() != 2) fail(ErrorCode::BadInput, "window must be [nmin, nmax]");
    auto L = laurent_coeffs(f, c, w[0], w[1], in.value("r1", -1.0), in.value("r2", -1.0), in.value("nodes", 2048));
    json out = L;
    if (in.contains("probes")) {
        json rows = json::array();
        for (auto& q : in.at("probes").get<std::vector<Quat>>()) rows.push_back({{"point", q}, {"value", eval_series(L, q)}});
        out["values"] = rows;
    }
    return out;
}

json cmd_singular(const json& in, const Options&) {
    auto f = function_from_json(in.at("function"));
    Quat p = in.at("point").get<Quat>();
    return classify_singularity(f, p, cap_at(in, p), in.value("window", 16));
}

json cmd_cauchy(const json& in, const Options& o) {
    auto f = function_from_json(in.at("function"));
    const json& c = in.at("contour");
    Quat I = c.value("I", Quat::i());
    auto ctr = c.value("center", std::vector<double>{0, 0});
    auto C = circle_contour(I, {ctr.at(0), ctr.at(1)}, c.at("radius"), c.value("nodes", 256));
    auto mode = in.value("mode", std::string("local"));
    auto probes = read_points(in, "probes", o);
    auto rows = parallel_map(probes.size(), o.jobs, [&](size_t k) {
        const Quat& q = probes[k];
        Quat v = mode == "slice" ? slicewise_cauchy(f, C, q) : local_cauchy(f, C, q);
        Quat d = f(q);
        return json{{"probe", q}, {"value", v}, {"direct", d}, {"residual", dist(v, d) / std::max(1.0, norm(d))}};
    });
    return json{{"mode", mode}, {"nodes", C.nodes()}, {"rows", rows}};
}

json cmd_volume(const json& in, const Options& o) {
    auto f = function_from_json(in.at("function"));
    double c = in.value("center", 0.0), R = in.at("radius");
    auto probes = read_points(in, "probes", o);
    auto rows = parallel_map(probes.size(), o.jobs, [&](size_t k) {
        const Quat& q = probes[k];
        Quat v = volume_cauchy(f, c, R, q);
        Quat d = f(q);
        return json{{"probe", q}, {"value", v}, {"direct", d}, {"residual", dist(v, d) / std::max(1.0, norm(d))}};
    });
    return json{{"rows", rows}};
}

std::pair<int, int> parse_grid(const std::string& g) {
    auto x = g.find('x');
    if (x == std::string::npos) fail(ErrorCode::BadInput, "--grid expects NxM");
    int n = std::stoi(g.substr(0, x)), m = std::stoi(g.substr(x + 1));
    if (n < 2 || m < 2 || n * m > 4000000) fail(ErrorCode::BadInput, "grid size out of range");
    return {n, m};
}

json douren_grid(const DourenConfig& cfg, const std::string& g) {
    auto [nx, ny] = parse_grid(g);
    auto f = douren_f(cfg);
    const double x0 = -4, x1 = 2, y0 = -4, y1 = 4;
    json xs = json::array(), ys = json::array();
    for (int i = 0; i < nx; ++i) xs.push_back(x0 + (x1 - x0) * i / (nx - 1));
    for (int j = 0; j < ny; ++j) ys.push_back(y0 + (y1 - y0) * j / (ny - 1));
    json re = json::array(), im = json::array();
    for (int j = 0; j < ny; ++j) {
        json rr = json::array(), ii = json::array();
        for (int i = 0; i < nx; ++i) {
            Quat q = embed({xs[i].get<double>(), ys[j].get<double>()}, cfg.I);
            if (!f.domain->inside(q)) { rr.push_back(nullptr); ii.push_back(nullptr); continue; }
            Quat v = f(q);
            rr.push_back(v.w);
            ii.push_back(dot(v, cfg.I));
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return json{{"slice_unit", cfg.I}, {"x", xs}, {"y", ys}, {"re", re}, {"im_I", im}};
}

json cmd_douren(const json& in, const Options& o) {
    auto cfg = douren_config_from(in);
    bool all = !o.caps && !o.jumps && !o.zeros && o.grid.empty();
    json out;
    if (o.caps || o.jumps || o.zeros || all) {
        std::optional<Quat> I0;
        if (in.contains("I0")) I0 = in.at("I0").get<Quat>();
        auto fx = douren_fixtures(cfg, I0);
        if (o.caps || all) {
            auto numeric = fx.f;
            numeric.sph = nullptr;
            json rows = json::array();
            for (int sign : {1, -1}) {
                const CapId& cap = sign > 0 ? fx.Cplus : fx.Cminus;
                auto d = spherical_data(numeric, cap);
                auto e = douren_cap_values(cfg, sign);
                rows.push_back({{"cap", sign > 0 ? "C+" : "C-"},
                                {"ref", ref(cap)},
                                {"computed", d},
                                {"closed_form", e},
                                {"deviation", std::max(dist(d.value, e.value), dist(d.derivative, e.derivative))}});
            }
            out["caps"] = rows;
            out["phi0_pbar"] = embed(phi0_pbar(), cfg.I);
        }
        if (o.jumps || all) {
            json rows = json::array();
            for (double th : in.value("angles", std::vector<double>{0.5, 1.0, 1.5707963267948966, 2.0, 2.6}))
                rows.push_back({{"theta", th}, {"jump", douren_jump(cfg, th, in.value("delta", 1e-5))}});
            out["jumps"] = rows;
        }
        if (o.zeros || all) {
            out["zeros"] = {{"g", zero_scan(fx.g, 32, o.tol)}, {"ell", zero_scan(fx.ell, 32, o.tol)},
                            {"m", zero_scan(fx.m, 32, o.tol)}};
            out["points"] = {{"p", fx.p}, {"pbar", fx.pbar}, {"p0", fx.p0}, {"p1", fx.p1}};
        }
    }
    if (!o.grid.empty()) out["grid"] = douren_grid(cfg, o.grid);
    return out;
}

// ---------------------------------------------------------------------------
// CSV rendering of the tabular reports

std::string q_csv(const json& q) {
    if (q.is_null()) return ",,,";
    std::ostringstream os;
    os << std::setprecision(17) << q[0].get<double>() + 0.0 << "," << q[1].get<double>() + 0.0 << "," << q[2].get<double>() + 0.0 << ","
       << q[3].get<double>() + 0.0;
    return os.str();
}

std::string to_csv(const std::string& verb, const json& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    if (r.contains("values") && r.at("values").is_array() && !r.contains("coeffs")) {
        os << "pw,px,py,pz,vw,vx,vy,vz\n";
        for (auto& row : r.at("values")) os << q_csv(row.at("point")) << "," << q_csv(row.at("value")) << "\n";
    } else if (r.contains("rows") && (verb == "cauchy" || verb == "volume-cauchy")) {
        os << "pw,px,py,pz,vw,vx,vy,vz,residual\n";
        for (auto& row : r.at("rows"))
            os << q_csv(row.at("probe")) << "," << q_csv(row.at("value")) << "," << row.at("residual").get<double>() << "\n";
    } else if (verb == "zeros") {
        os << "type,w,x,y,z,sphere_x,sphere_y,cap,multiplicity,provenance\n";
        for (auto& z : r.at("isolated"))
            os << "isolated," << q_csv(z.at("point")) << ",,," << z.at("cap").at("index") << "," << z.at("classical")
               << "," << z.at("provenance").get<std::string>() << "\n";
        for (auto& z : r.at("spherical"))
            os << "spherical,,,,," << z.at("x").get<double>() << "," << z.at("y").get<double>() << ","
               << z.at("cap").at("index") << "," << z.at("multiplicity") << "," << z.at("provenance").get<std::string>()
               << "\n";
        for (auto& z : r.at("ghosts")) os << "ghost," << q_csv(z.at("point")) << ",,," << z.at("cap").at("index") << ",,\n";
    } else if (verb == "laurent") {
        os << "n,w,x,y,z\n";
        int n = r.at("window").at(0);
        for (auto& a : r.at("coeffs")) os << n++ << "," << q_csv(a) << "\n";
    } else if (verb == "series") {
        os << "k,w,x,y,z\n";
        int k = r.at("kmin");
        for (auto& a : r.at("coeffs")) os << k++ << "," << q_csv(a) << "\n";
    } else if (verb == "douren" && r.contains("grid")) {
        const json& g = r.at("grid");
        os << "x,y,re,im_I\n";
        for (size_t j = 0; j < g.at("y").size(); ++j)
            for (size_t i = 0; i < g.at("x").size(); ++i) {
                os << g.at("x")[i].get<double>() << "," << g.at("y")[j].get<double>() << ",";
                const json& a = g.at("re")[j][i];
                const json& b = g.at("im_I")[j][i];
                if (a.is_null()) os << ",\n";
                else os << a.get<double>() << "," << b.get<double>() << "\n";
            }
    } else if (verb == "selftest") {
        os << "criterion,name,pass,seconds,detail\n";
        for (auto& c : r.at("criteria"))
            os << c.at("id") << ",\"" << c.at("name").get<std::string>() << "\"," << (c.at("pass").get<bool>() ? 1 : 0)
               << "," << c.at("seconds").get<double>() << ",\"" << c.at("detail").get<std::string>() << "\"\n";
    } else {
        fail(ErrorCode::BadInput, "no CSV layout for " + verb);
    }
    return os.str();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Slice regular functions on slice domains: evaluate, factor, expand, integrate."};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--input", o.input, "spec file path or inline JSON (default: stdin)");
    app.add_option("--out", o.out, "output file (default: stdout)");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tol", o.tol, "zero / divisibility tolerance");
    app.add_option("--jobs", o.jobs, "worker threads for probe batches")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "seed for randomized probe batteries");
    app.add_option("--grid", o.grid, "NxM slice grid for douren field output");

    const std::vector<std::pair<std::string, std::string>> verbs = {
        {"eval", "evaluate a function at points"},
        {"star", "star product (or quotient with \"quotient\": true)"},
        {"conj", "regular conjugate"},
        {"sym", "symmetrization"},
        {"recip", "slice reciprocal"},
        {"zeros", "zero report"},
        {"factor", "divide out a binomial or a sphere factor"},
        {"mult", "classical, spherical and isolated multiplicities"},
        {"series", "spherical series around a cap"},
        {"laurent", "Laurent coefficients on a slice"},
        {"singular", "singularity classification"},
        {"cauchy", "slice or local Cauchy formula on a circle"},
        {"volume-cauchy", "volume Cauchy formula on a symmetric ball"},
        {"douren", "counterexample laboratory: caps, jumps, zero reports, slice grids"},
        {"selftest", "acceptance battery"}};
    std::map<std::string, CLI::App*> sub;
    for (auto& [v, d] : verbs) sub[v] = app.add_subcommand(v, d);
    sub["douren"]->add_flag("--caps", o.caps, "cap spherical-value table");
    sub["douren"]->add_flag("--jumps", o.jumps, "jump measurements across the arc");
    sub["douren"]->add_flag("--zeros", o.zeros, "fixture zero reports");
    sub["selftest"]->add_option("--criteria", o.criteria, "subset of criteria to run");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::string verb;
    for (auto& [v, d] : verbs)
        if (sub[v]->parsed()) verb = v;

    try {
        json result;
        int code = 0;
        if (verb == "selftest") {
            auto res = run_selftest(o.seed, o.criteria);
            json rows = json::array();
            for (auto& r : res) {
                rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
                if (!r.pass) code = 1;
                if (o.out.empty() && o.format == "json") err << format_result(r) << "\n";
            }
            result = json{{"seed", o.seed}, {"criteria", rows}};
        } else {
            json in = read_input(o);
            if (verb == "eval" || verb == "conj" || verb == "sym" || verb == "recip") result = cmd_unary(verb, in, o);
            else if (verb == "star") result = cmd_star(in, o);
            else if (verb == "zeros") result = cmd_zeros(in, o);
            else if (verb == "factor") result = cmd_factor(in, o);
            else if (verb == "mult") result = cmd_mult(in, o);
            else if (verb == "series") result = cmd_series(in, o);
            else if (verb == "laurent") result = cmd_laurent(in, o);
            else if (verb == "singular") result = cmd_singular(in, o);
            else if (verb == "cauchy") result = cmd_cauchy(in, o);
            else if (verb == "volume-cauchy") result = cmd_volume(in, o);
            else if (verb == "douren") result = cmd_douren(in, o);
        }
        std::string text = o.format == "csv" ? to_csv(verb, result) : result.dump(2) + "\n";
        if (o.out.empty()) {
            out << text;
        } else {
            std::ofstream f(o.out);
            if (!f) fail(ErrorCode::BadInput, "cannot write " + o.out);
            f << text;
        }
        return code;
    } catch (const Error& e) {
        err << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
        return e.exit_code();
    } catch (const json::exception& e) {
        err << json{{"error", "BadInput"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
}

} // namespace slicereg
