// isoops: command-line front end.
//
//   isoops weights   --angles 0,45,90,135
//   isoops weights   --points octahedron.csv --dim 3 --degree 2 --kind full
//   isoops stencil   --op lap --w 4 --h 1
//   isoops diffuse   --in in.pgm --out out.pgm --lambda 0.1 --steps 100 [--mass-log mass.csv]
//   isoops curvature --in mesh.obj --out curv.csv [--render-h h.ppm --render-r r.ppm]
//   isoops freq      --w 2,3.333333333333333,4 --omega-max 3 --samples 301 --out resp.csv
//   isoops laptest   --w 0,1,2,4,inf --h 0.1,0.05,0.025 --out aniso.csv
//
// Exit status: 0 success, 1 numerical failure, 2 usage error, 3 I/O error.

#include "isoops/experiments.hpp"
#include "isoops/isoops.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace isoops;

namespace {

double parse_number(const std::string& tok, const std::string& what)
{
    if (tok == "inf" || tok == "+inf" || tok == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::logic_error&) {
        fail(ErrorCode::InvalidArgument, "bad " + what + " '" + tok + "'");
    }
    if (used != tok.size() || std::isnan(v)) fail(ErrorCode::InvalidArgument, "bad " + what + " '" + tok + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        require(b != std::string::npos, ErrorCode::InvalidArgument, "empty entry in " + what + " list");
        out.push_back(parse_number(tok.substr(b, e - b + 1), what));
    }
    require(!out.empty(), ErrorCode::InvalidArgument, "empty " + what + " list");
    return out;
}

std::string fmt(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Output sink: a file, or stdout for "-" / empty.
class Sink
{
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            m_file = std::make_unique<std::ofstream>(path);
            require(static_cast<bool>(*m_file), ErrorCode::Io, "cannot open " + path + " for writing");
        }
    }
    std::ostream& os() { return m_file ? *m_file : std::cout; }
    void close()
    {
        if (m_file) {
            m_file->close();
            require(!m_file->fail(), ErrorCode::Io, "write failed");
        } else {
            std::cout.flush();
        }
    }

private:
    std::unique_ptr<std::ofstream> m_file;
};

/// Numeric rows of a CSV file; '#' lines and a non-numeric first line are skipped.
std::vector<Vec> read_points_csv(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
    std::vector<Vec> pts;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        std::vector<double> row;
        try {
            row = parse_list(line, "coordinate");
        } catch (const Error&) {
            if (pts.empty() && line_no == 1) continue;
            fail(ErrorCode::Parse, path + " line " + std::to_string(line_no) + ": bad coordinate row");
        }
        for (double v : row) {
            if (!std::isfinite(v)) fail(ErrorCode::Parse, path + " line " + std::to_string(line_no) + ": non-finite");
        }
        if (!pts.empty() && static_cast<Eigen::Index>(row.size()) != pts.front().size()) {
            fail(ErrorCode::Parse, path + " line " + std::to_string(line_no) + ": row length differs from the first row");
        }
        pts.push_back(Eigen::Map<const Vec>(row.data(), static_cast<Eigen::Index>(row.size())));
    }
    require(!pts.empty(), ErrorCode::Parse, path + " holds no points");
    return pts;
}

struct WeightsArgs
{
    std::string angles;
    std::string points;
    int dim = 0;
    int degree = 2;
    std::string kind = "harmonic";
    std::string out;
};

int run_weights(const WeightsArgs& a)
{
    require(a.angles.empty() != a.points.empty(), ErrorCode::InvalidArgument, "give exactly one of --angles, --points");
    DirectionSet set;
    std::string echo;
    if (!a.angles.empty()) {
        std::vector<double> rad;
        for (double deg : parse_list(a.angles, "angle")) {
            require(std::isfinite(deg), ErrorCode::InvalidArgument, "angles must be finite");
            rad.push_back(deg * std::numbers::pi / 180.0);
        }
        set = circular_weights(rad);
        echo = "# isoops weights angles=" + a.angles;
    } else {
        require(a.kind == "harmonic" || a.kind == "full", ErrorCode::InvalidArgument, "--kind must be harmonic or full");
        require(a.degree >= 1, ErrorCode::InvalidArgument, "--degree must be >= 1");
        std::vector<Vec> pts = read_points_csv(a.points);
        const auto d = pts.front().size();
        if (a.dim > 0) require(d == a.dim, ErrorCode::DimensionMismatch, "points do not have --dim coordinates");
        for (auto& p : pts) {
            const double n = p.norm();
            require(n > 0.0, ErrorCode::InvalidArgument, "zero point cannot be projected to the sphere");
            p /= n;
        }
        set = veronese_weights(pts, a.degree, a.kind == "full" ? BasisKind::Full : BasisKind::Harmonic);
        echo = "# isoops weights points=" + a.points + " dim=" + std::to_string(d) +
               " degree=" + std::to_string(a.degree) + " kind=" + a.kind;
    }
    Sink sink(a.out);
    sink.os() << echo << "\n";
    write_direction_csv(sink.os(), set);
    sink.close();
    return 0;
}

struct StencilArgs
{
    std::string op = "lap";
    std::string w = "4";
    double h = 1.0;
    std::string out;
};

int run_stencil(const StencilArgs& a)
{
    const StencilWeight w(parse_number(a.w, "w"));
    Stencil3 s;
    if (a.op == "dx") s = dx_stencil(w, a.h);
    else if (a.op == "dy") s = dy_stencil(w, a.h);
    else if (a.op == "lap") s = laplacian_stencil(w, a.h);
    else fail(ErrorCode::InvalidArgument, "--op must be dx, dy or lap");
    Sink sink(a.out);
    sink.os() << "# isoops stencil op=" << a.op << " w=" << w.str() << " h=" << fmt(a.h) << "\n";
    write_stencil_csv(sink.os(), s, a.op + "(w=" + w.str() + ")");
    sink.close();
    return 0;
}

struct DiffuseArgs
{
    std::string in, out, mass_log;
    std::string lambda = "0.1";
    double dt = 0.0;
    int steps = 100;
    double alpha = 2.0 / 3.0;
    double beta = 1.0 / 3.0;
    std::string gradient_w = "4";
    bool allow_unstable = false;
    int bits = 0;
};

int run_diffuse(const DiffuseArgs& a)
{
    PgmImage img = read_pgm(a.in);
    DiffusionConfig cfg;
    cfg.lambda = parse_number(a.lambda, "lambda");
    cfg.steps = a.steps;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.gradient_w = parse_number(a.gradient_w, "gradient w");
    cfg.allow_unstable = a.allow_unstable;
    require(a.dt >= 0.0, ErrorCode::InvalidArgument, "--dt must be positive");
    cfg.dt = a.dt > 0.0 ? a.dt : max_stable_dt(cfg.alpha, cfg.beta, img.field.h);
    const DiffusionRun r = run(img.field, cfg);

    const int maxval = a.bits == 0 ? img.maxval : (a.bits == 16 ? 65535 : 255);
    require(a.bits == 0 || a.bits == 8 || a.bits == 16, ErrorCode::InvalidArgument, "--bits must be 8 or 16");
    write_pgm(a.out, r.result, maxval);
    if (!a.mass_log.empty()) {
        Sink sink(a.mass_log);
        auto& os = sink.os();
        os << "# isoops diffuse in=" << a.in << " lambda=" << fmt(cfg.lambda) << " dt=" << fmt(cfg.dt)
           << " steps=" << cfg.steps << " alpha=" << fmt(cfg.alpha) << " beta=" << fmt(cfg.beta)
           << " gradient_w=" << fmt(cfg.gradient_w) << "\n";
        os << "step,mass,min,max\n";
        os.precision(17);
        for (const auto& e : r.log) os << e.step << "," << e.mass << "," << e.min << "," << e.max << "\n";
        sink.close();
    }
    return 0;
}

struct CurvatureArgs
{
    std::string in, out, render_h, render_r;
};

int run_curvature(const CurvatureArgs& a)
{
    const TriMesh m = read_obj(a.in);
    const MeshCurvature c = mesh_curvature(m);
    Sink sink(a.out);
    sink.os() << "# isoops curvature in=" << a.in << " vertices=" << m.vertices.size()
              << " triangles=" << m.triangles.size() << "\n";
    write_curvature_csv(sink.os(), c);
    sink.close();
    std::cerr << "valid=" << c.summary.valid << " fallback=" << c.summary.fallback
              << " boundary=" << c.summary.boundary << " median_H=" << fmt(c.summary.median_H)
              << " median_R=" << fmt(c.summary.median_R) << "\n";
    auto render = [&](const std::string& path, bool use_h) {
        if (path.empty()) return;
        std::vector<double> v;
        for (const auto& vc : c.vertices) {
            const double x = use_h ? vc.H : vc.R;
            v.push_back(vc.valid ? x : std::numeric_limits<double>::quiet_NaN());
        }
        write_ppm(path, render_values(m, v));
    };
    render(a.render_h, true);
    render(a.render_r, false);
    return 0;
}

struct FreqArgs
{
    std::string w = "2,3.3333333333333335,4";
    double omega_max = 3.0;
    int samples = 301;
    std::string scheme = "sharpened";
    std::string out;
};

int run_freq(const FreqArgs& a)
{
    require(a.scheme == "sharpened" || a.scheme == "explicit", ErrorCode::InvalidArgument,
            "--scheme must be sharpened or explicit");
    const std::vector<double> ws = parse_list(a.w, "w");
    Sink sink(a.out);
    sink.os() << "# isoops freq w=" << a.w << " omega_max=" << a.omega_max << " samples=" << a.samples
              << " scheme=" << a.scheme << "\n";
    emit_response_table(sink.os(), ws, a.omega_max, a.samples,
                        a.scheme == "explicit" ? ResponseKind::Explicit : ResponseKind::Sharpened);
    sink.close();
    return 0;
}

struct LaptestArgs
{
    std::string w = "0,1,2,4,inf";
    std::string h = "0.1,0.05,0.025";
    std::string out;
};

int run_laptest(const LaptestArgs& a)
{
    const std::vector<double> ws = parse_list(a.w, "w");
    const std::vector<double> hs = parse_list(a.h, "h");
    for (double h : hs) require(h > 0.0 && std::isfinite(h), ErrorCode::InvalidArgument, "h must be positive");
    Sink sink(a.out);
    auto& os = sink.os();
    os.precision(17);
    os << "# isoops laptest w=" << a.w << " h=" << a.h << "\n";
    os << "# anisotropy: max over radii of the angular std of (Delta - L_w) g on [-2, 2]^2\n";
    os << "w,h,anisotropy\n";
    for (double w : ws) {
        const StencilWeight sw(w);
        for (double h : hs) os << sw.str() << "," << h << "," << experiments::anisotropy(sw, h) << "\n";
    }
    os << "# taylor residuals after removing the h^2 term; slope from successive h\n";
    os << "operator,coefficient,h,residual,slope\n";
    auto emit = [&](const std::string& name, const std::string& coef, const std::vector<double>& errs) {
        const auto slopes = experiments::richardson_slopes(hs, errs);
        for (std::size_t k = 0; k < hs.size(); ++k) {
            os << name << "," << coef << "," << hs[k] << "," << errs[k] << ",";
            if (k > 0) os << slopes[k - 1];
            os << "\n";
        }
    };
    std::vector<double> lap, dx12, dx6;
    for (double h : hs) {
        lap.push_back(experiments::lap4_residual(h));
        dx12.push_back(experiments::dx4_residual(h, 1.0 / 12.0));
        dx6.push_back(experiments::dx4_residual(h, 1.0 / 6.0));
    }
    emit("lap4", "1/12", lap);
    emit("dx4", "1/12", dx12);
    emit("dx4", "1/6", dx6);
    sink.close();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"isoops: isotropic finite-difference operators, mean-value weights, diffusion and curvature"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");

    WeightsArgs wa;
    auto* weights = app.add_subcommand("weights", "mean-value weights for directions on the circle or sphere");
    weights->add_option("--angles", wa.angles, "comma-separated angles in degrees, sorted, in [0, 180)");
    weights->add_option("--points", wa.points, "CSV of points (one per row), projected onto the unit sphere");
    weights->add_option("--dim", wa.dim, "ambient dimension of the points (checked)");
    weights->add_option("--degree", wa.degree, "polynomial degree k")->capture_default_str();
    weights->add_option("--kind", wa.kind, "harmonic or full")->capture_default_str();
    weights->add_option("--out", wa.out, "output CSV (default stdout)");

    StencilArgs sa;
    auto* stencil = app.add_subcommand("stencil", "dump a 3x3 stencil");
    stencil->add_option("--op", sa.op, "dx, dy or lap")->capture_default_str();
    stencil->add_option("--w", sa.w, "axis weight w > -2 or inf")->capture_default_str();
    stencil->add_option("--h", sa.h, "grid spacing")->capture_default_str();
    stencil->add_option("--out", sa.out, "output CSV (default stdout)");

    DiffuseArgs da;
    auto* diffuse = app.add_subcommand("diffuse", "Perona-Malik diffusion of a PGM image");
    diffuse->add_option("--in", da.in, "input PGM")->required();
    diffuse->add_option("--out", da.out, "output PGM")->required();
    diffuse->add_option("--lambda", da.lambda, "contrast parameter in [0, 1] units, or inf")->capture_default_str();
    diffuse->add_option("--dt", da.dt, "time step (default 0.9 of the unit-diffusivity bound)");
    diffuse->add_option("--steps", da.steps, "number of steps")->capture_default_str();
    diffuse->add_option("--alpha", da.alpha, "weight of the five-point part")->capture_default_str();
    diffuse->add_option("--beta", da.beta, "weight of the diagonal part")->capture_default_str();
    diffuse->add_option("--gradient-w", da.gradient_w, "stencil weight for |grad u|")->capture_default_str();
    diffuse->add_option("--bits", da.bits, "output depth 8 or 16 (default: input depth)");
    diffuse->add_option("--mass-log", da.mass_log, "CSV of step, mass, min, max");
    diffuse->add_flag("--allow-unstable", da.allow_unstable, "skip the stability check");

    CurvatureArgs ca;
    auto* curvature = app.add_subcommand("curvature", "mean curvature and curvedness at mesh vertices");
    curvature->add_option("--in", ca.in, "input OBJ")->required();
    curvature->add_option("--out", ca.out, "output CSV (default stdout)");
    curvature->add_option("--render-h", ca.render_h, "PPM colour map of H");
    curvature->add_option("--render-r", ca.render_r, "PPM colour map of R");

    FreqArgs fa;
    auto* freq = app.add_subcommand("freq", "frequency responses of the derivative schemes");
    freq->add_option("--w", fa.w, "comma-separated weights")->capture_default_str();
    freq->add_option("--omega-max", fa.omega_max, "largest frequency, below pi")->capture_default_str();
    freq->add_option("--samples", fa.samples, "samples per curve")->capture_default_str();
    freq->add_option("--scheme", fa.scheme, "sharpened or explicit")->capture_default_str();
    freq->add_option("--out", fa.out, "output CSV (default stdout)");

    LaptestArgs la;
    auto* laptest = app.add_subcommand("laptest", "Laplacian anisotropy and Taylor-order fits on a Gaussian");
    laptest->add_option("--w", la.w, "comma-separated weights")->capture_default_str();
    laptest->add_option("--h", la.h, "comma-separated spacings")->capture_default_str();
    laptest->add_option("--out", la.out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*weights) return run_weights(wa);
        if (*stencil) return run_stencil(sa);
        if (*diffuse) return run_diffuse(da);
        if (*curvature) return run_curvature(ca);
        if (*freq) return run_freq(fa);
        if (*laptest) return run_laptest(la);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_status();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
