#include "teichstab/dn_forward.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace teichstab {

using nlohmann::json;

cplx SurfaceSpec::F(cplx z) const {
    cplx acc(0.0);
    for (std::size_t k = series.size(); k-- > 0;) acc = (acc + series[k]) * z;
    return acc;
}

cplx SurfaceSpec::dF(cplx z) const {
    cplx acc(0.0);
    for (std::size_t k = series.size(); k-- > 0;) acc = acc * z + static_cast<double>(k + 1) * series[k];
    return acc;
}

cplx SurfaceSpec::d2F(cplx z) const {
    cplx acc(0.0);
    for (std::size_t k = series.size(); k-- > 1;) acc = acc * z + static_cast<double>((k + 1) * k) * series[k];
    return acc;
}

SurfaceSpec SurfaceSpec::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("surface JSON: ") + e.what());
    }
    try {
        SurfaceSpec s;
        for (const auto& c : j.at("series")) {
            if (!c.is_array() || c.size() != 2) throw Error(ErrorKind::InvalidConfig, "series entries must be [re, im]");
            s.series.emplace_back(c[0].get<double>(), c[1].get<double>());
        }
        if (s.series.empty()) throw Error(ErrorKind::InvalidConfig, "series must be nonempty");
        s.grid = BoundaryGrid(j.value("n_samples", 256), j.value("length", kTwoPi));
        s.base_offset = j.value("base_offset", 0.0);
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("surface JSON: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidConfig) throw;
        throw Error(ErrorKind::InvalidConfig, e.what());
    }
}

std::string SurfaceSpec::to_json_text() const {
    json j;
    j["series"] = json::array();
    for (const auto& c : series) j["series"].push_back({c.real(), c.imag()});
    j["n_samples"] = grid.n_samples();
    j["length"] = grid.total_length();
    if (base_offset != 0.0) j["base_offset"] = base_offset;
    return j.dump();
}

namespace {

int check_points(const SurfaceSpec& s) { return 8 * s.grid.n_samples(); }

std::vector<cplx> boundary_samples(const SurfaceSpec& s, int m, bool derivative) {
    std::vector<cplx> out(m);
    for (int p = 0; p < m; ++p) {
        const cplx z = std::polar(1.0, kTwoPi * p / m);
        out[p] = derivative ? s.dF(z) : s.F(z);
    }
    return out;
}

double winding(const std::vector<cplx>& curve, cplx about) {
    double total = 0.0;
    const std::size_t m = curve.size();
    for (std::size_t p = 0; p < m; ++p) total += std::arg((curve[(p + 1) % m] - about) / (curve[p] - about));
    return total / kTwoPi;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

double boundary_length(const SurfaceSpec& s) {
    const auto d = boundary_samples(s, check_points(s), true);
    double acc = 0.0;
    for (const auto& v : d) acc += std::abs(v);
    return acc * kTwoPi / static_cast<double>(d.size());
}

void validate_surface(const SurfaceSpec& s) {
    if (s.series.empty()) throw Error(ErrorKind::DegenerateImmersion, "empty power series");
    const int m = check_points(s);
    const auto dF = boundary_samples(s, m, true);
    double hi = 0.0, lo = INFINITY;
    for (const auto& v : dF) {
        hi = std::max(hi, std::abs(v));
        lo = std::min(lo, std::abs(v));
    }
    for (int ir = 0; ir < 32; ++ir)
        for (int ia = 0; ia < 64; ++ia) lo = std::min(lo, std::abs(s.dF(std::polar(ir / 32.0, kTwoPi * ia / 64))));
    if (!(hi > 0.0) || lo <= 1e-8 * hi) throw Error(ErrorKind::DegenerateImmersion, "|F'| vanishes on the closed disc");
    if (std::lround(winding(dF, 0.0)) != 0) throw Error(ErrorKind::DegenerateImmersion, "F' has zeros inside the disc");

    const auto curve = boundary_samples(s, m, false);
    // pairwise test of non-adjacent boundary segments with a bounding-box prefilter
    for (int i = 0; i < m; ++i) {
        const cplx a = curve[i], b = curve[(i + 1) % m];
        const double xmin = std::min(a.real(), b.real()), xmax = std::max(a.real(), b.real());
        const double ymin = std::min(a.imag(), b.imag()), ymax = std::max(a.imag(), b.imag());
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;
            const cplx c = curve[j], d = curve[(j + 1) % m];
            if (std::max(c.real(), d.real()) < xmin || std::min(c.real(), d.real()) > xmax) continue;
            if (std::max(c.imag(), d.imag()) < ymin || std::min(c.imag(), d.imag()) > ymax) continue;
            if (segments_cross(a, b, c, d)) throw Error(ErrorKind::NotInjective, "boundary curve self-intersects");
        }
    }
    for (double r : {0.0, 0.3, 0.6, 0.9})
        for (int ia = 0; ia < 16; ++ia) {
            const long w = std::lround(winding(curve, s.F(std::polar(r, kTwoPi * ia / 16))));
            if (w != 0 && w != 1) throw Error(ErrorKind::NotInjective, "image point covered more than once");
        }
}

SurfaceSpec normalize_length(const SurfaceSpec& s, double target_L) {
    const double len = boundary_length(s);
    if (!(len > 1e-300) || !std::isfinite(len)) throw Error(ErrorKind::DegenerateImmersion, "boundary length underflows");
    SurfaceSpec out = s;
    const double c = target_L / len;
    for (auto& a : out.series) a *= c;
    out.grid = BoundaryGrid(s.grid.n_samples(), target_L);
    return out;
}

// ---- arclength ------------------------------------------------------------

ArclengthMap::ArclengthMap(const SurfaceSpec& s, int n_theta) {
    const int m = n_theta > 0 ? n_theta : check_points(s);
    std::vector<cplx> sp(m);
    speed_.resize(m);
    for (int p = 0; p < m; ++p) {
        speed_[p] = std::abs(s.dF(std::polar(1.0, kTwoPi * p / m)));
        sp[p] = speed_[p];
    }
    const auto c = spectral::forward(sp);
    length_ = kTwoPi * c[0].real();
    coeffs_.assign(m, cplx(0.0));
    cplx sum(0.0);
    for (int i = 1; i < m; ++i) {
        const int k = spectral::mode_of_index(i, m);
        if (k == -m / 2) continue;
        coeffs_[i] = c[i] / cplx(0.0, k);
        sum += coeffs_[i];
    }
    coeffs_[0] = -sum;  // l(0) = 0
    speed_coeffs_ = c;
}

double ArclengthMap::l_of_theta(double theta) const {
    return length_ * theta / kTwoPi + spectral::evaluate(coeffs_, theta).real();
}

double ArclengthMap::theta_of_l(double l) const {
    double theta = kTwoPi * l / length_;
    for (int it = 0; it < 60; ++it) {
        const double r = l_of_theta(theta) - l;
        const double d = spectral::evaluate(speed_coeffs_, theta).real();
        const double step = r / d;
        theta -= step;
        if (std::abs(step) < 1e-13) break;
    }
    return theta;
}

BoundaryFn boundary_trace(const SurfaceSpec& s, const std::function<cplx(cplx)>& g) {
    const ArclengthMap map(s);
    return BoundaryFn::sample(s.grid, [&](double l) { return g(std::polar(1.0, map.theta_of_l(l - s.base_offset))); });
}

// ---- DN maps --------------------------------------------------------------

DnMap::DnMap(BoundaryOperator op, BoundaryOperator guard) : op_(std::move(op)), guard_(std::move(guard)) {
    if (op_.linearity() != Linearity::ComplexLinear || guard_.linearity() != Linearity::ComplexLinear)
        throw Error(ErrorKind::InvalidArgument, "DN operators are complex-linear");
    if (guard_.grid().basis_dim() < op_.grid().basis_dim())
        throw Error(ErrorKind::GridMismatch, "guard operator is coarser than the working one");
}

DnMap DnMap::multiplier(const BoundaryGrid& grid, const std::function<double(int)>& m) {
    return {BoundaryOperator::multiplier(grid, m), BoundaryOperator::multiplier(grid.refined(2 * grid.n_samples()), m)};
}

DnDiagnostics dn_diagnostics(const DnMap& m) {
    const Eigen::MatrixXd& a = m.op().matrix();
    const double norm = std::max(a.norm(), 1e-300);
    DnDiagnostics d{};
    d.constant_residual = a.col(0).norm() / norm;
    d.asymmetry = (a - a.transpose()).norm() / norm;
    d.min_rayleigh = a.diagonal().minCoeff() / norm;
    return d;
}

DnMap disc_dn(const BoundaryGrid& grid) {
    if (std::abs(grid.total_length() - kTwoPi) > 1e-12)
        throw Error(ErrorKind::WrongLength, "disc_dn needs total_length = 2 pi");
    return DnMap::multiplier(grid, [](int k) { return static_cast<double>(k); });
}

DnMap pushforward_dn(const SurfaceSpec& s, const PushforwardOptions& opt) {
    const double L = s.grid.total_length();
    const ArclengthMap map(s);
    if (std::abs(map.length() - L) > 1e-8 * L)
        throw Error(ErrorKind::WrongLength, "surface is not normalized to the grid length");
    const BoundaryGrid guard_grid = s.grid.refined(2 * s.grid.n_samples());
    const int d = guard_grid.basis_dim();
    const int m = std::max(4, opt.oversample) * guard_grid.n_samples();

    double lo = INFINITY, hi = 0.0;
    for (int p = 0; p < m; ++p) {
        const double v = std::abs(s.dF(std::polar(1.0, kTwoPi * p / m)));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo <= 1e-8 * hi) throw Error(ErrorKind::DegenerateImmersion, "|F'| below floor on the boundary");

    // Galerkin form: A_jk = int phi_j(l(theta)) (Lambda_disc (phi_k o l))(theta) dtheta.
    Eigen::MatrixXd phi(m, d);
    for (int p = 0; p < m; ++p) {
        const double l = map.l_of_theta(kTwoPi * p / m) + s.base_offset;
        for (int j = 0; j < d; ++j) phi(p, j) = basis_value(guard_grid, j, l);
    }
    Eigen::MatrixXd lphi(m, d);
    std::vector<cplx> col(m);
    for (int j = 0; j < d; ++j) {
        for (int p = 0; p < m; ++p) col[p] = phi(p, j);
        auto c = spectral::forward(col);
        for (int i = 0; i < m; ++i) c[i] *= std::abs(spectral::mode_of_index(i, m));
        const auto v = spectral::inverse(c);
        for (int p = 0; p < m; ++p) lphi(p, j) = v[p].real();
    }
    Eigen::MatrixXd a = (kTwoPi / m) * (phi.transpose() * lphi);
    a = 0.5 * (a + a.transpose()).eval();
    BoundaryOperator guard(guard_grid, std::move(a));
    BoundaryOperator op = guard.restricted(s.grid);
    return {std::move(op), std::move(guard)};
}

double dn_distance(const DnMap& a, const DnMap& b) {
    if (a.grid() != b.grid()) throw Error(ErrorKind::GridMismatch, "dn_distance on different grids");
    return operator_norm_h1_l2(a.op() - b.op());
}

}  // namespace teichstab
