#include "qlg/model.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace qlg {

Axis axis_from_string(const std::string& s) {
    if (s == "x" || s == "X") return Axis::X;
    if (s == "y" || s == "Y") return Axis::Y;
    if (s == "z" || s == "Z") return Axis::Z;
    throw validation_error("unknown direction '" + s + "' (expected x, y or z)");
}

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        default: return "z";
    }
}

MatrixXcd pauli(Axis a) {
    MatrixXcd m(2, 2);
    switch (a) {
        case Axis::X:
            m << 0, 1, 1, 0;
            break;
        case Axis::Y:
            m << cdouble(0, 0), cdouble(0, -1), cdouble(0, 1), cdouble(0, 0);
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

std::optional<double> ModelInfo::lambda() const {
    if (family == "xxz") return delta;
    if (family == "xy") return nu;
    return std::nullopt;
}

std::string ModelInfo::lambda_name() const {
    if (family == "xxz") return "delta";
    if (family == "xy") return "nu";
    return "lambda";
}

double SpinHamiltonian::coupling(Axis a, int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = couplings.find({static_cast<int>(a), i, j});
    return it == couplings.end() ? 0.0 : it->second;
}

double SpinHamiltonian::field(Axis a, int i) const {
    auto it = fields.find({static_cast<int>(a), i});
    return it == fields.end() ? 0.0 : it->second;
}

bool SpinHamiltonian::nearest_neighbor_only() const {
    for (const auto& [key, val] : couplings) {
        (void)val;
        const auto& [a, i, j] = key;
        (void)a;
        if (j != i + 1) return false;
    }
    return true;
}

double SpinHamiltonian::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [k, v] : couplings) m = std::max(m, std::abs(v));
    for (const auto& [k, v] : fields) m = std::max(m, std::abs(v));
    return m;
}

namespace {

void check_site(int i, int n, const char* what) {
    if (i < 0 || i >= n) {
        std::ostringstream os;
        os << what << " index " << i << " out of range [0, " << n << ")";
        throw validation_error(os.str());
    }
}

}  // namespace

SpinHamiltonian build_general(int n,
                              const std::vector<std::tuple<Axis, int, int, double>>& couplings,
                              const std::vector<std::tuple<Axis, int, double>>& fields) {
    if (n < 1) throw validation_error("build_general: n_sites must be >= 1");
    SpinHamiltonian h;
    h.n_sites = n;
    h.info.family = "general";
    for (const auto& [a, i, j, val] : couplings) {
        check_site(i, n, "coupling");
        check_site(j, n, "coupling");
        if (i == j) throw validation_error("build_general: coupling requires two distinct sites");
        const int lo = std::min(i, j), hi = std::max(i, j);
        h.couplings[{static_cast<int>(a), lo, hi}] += val;
    }
    for (const auto& [a, i, val] : fields) {
        check_site(i, n, "field");
        h.fields[{static_cast<int>(a), i}] += val;
    }
    return h;
}

SpinHamiltonian build_xxz(int n, double j, double delta) {
    if (n < 2) throw validation_error("build_xxz: need at least 2 sites");
    if (!(j > 0)) throw validation_error("build_xxz: coupling j must be positive");
    SpinHamiltonian h;
    h.n_sites = n;
    h.info.family = "xxz";
    h.info.j = j;
    h.info.delta = delta;
    for (int i = 0; i + 1 < n; ++i) {
        h.couplings[{static_cast<int>(Axis::X), i, i + 1}] = j;
        h.couplings[{static_cast<int>(Axis::Y), i, i + 1}] = j;
        if (delta != 0.0) h.couplings[{static_cast<int>(Axis::Z), i, i + 1}] = j * delta;
    }
    return h;
}

SpinHamiltonian build_xy(int n, double j, double gamma, double bz) {
    if (n < 2) throw validation_error("build_xy: need at least 2 sites");
    if (!(j > 0)) throw validation_error("build_xy: coupling j must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw validation_error("build_xy: gamma must be in [0, 1]");
    if (!(bz >= 0.0)) throw validation_error("build_xy: bz must be nonnegative");
    SpinHamiltonian h;
    h.n_sites = n;
    h.info.family = "xy";
    h.info.j = j;
    h.info.gamma = gamma;
    h.info.nu = bz / j;  // field in units of the critical field
    const double jx = j * (1.0 + gamma) / 2.0;
    const double jy = j * (1.0 - gamma) / 2.0;
    for (int i = 0; i + 1 < n; ++i) {
        if (jx != 0.0) h.couplings[{static_cast<int>(Axis::X), i, i + 1}] = jx;
        if (jy != 0.0) h.couplings[{static_cast<int>(Axis::Y), i, i + 1}] = jy;
    }
    if (bz != 0.0)
        for (int i = 0; i < n; ++i) h.fields[{static_cast<int>(Axis::Z), i}] = bz;
    return h;
}

SpinHamiltonian build_fk(const SpinHamiltonian& h, int k, Axis mu) {
    check_site(k, h.n_sites, "probe site");
    SpinHamiltonian f;
    f.n_sites = h.n_sites;
    f.info.family = "fk";
    for (const auto& [key, val] : h.couplings) {
        const auto& [a, i, j] = key;
        if (a == static_cast<int>(mu)) continue;
        if (i == k || j == k) f.couplings[{a, i, j}] = 2.0 * val;
    }
    for (const auto& [key, val] : h.fields) {
        const auto& [a, i] = key;
        if (a == static_cast<int>(mu) || i != k) continue;
        f.fields[{a, i}] = 2.0 * val;
    }
    return f;
}

CompiledHamiltonian compile_terms(const SpinHamiltonian& h) {
    CompiledHamiltonian out;
    out.n_sites = h.n_sites;
    const int n = h.n_sites;
    auto bit = [n](int site) { return std::uint64_t{1} << (n - 1 - site); };

    for (const auto& [key, val] : h.couplings) {
        const auto& [a, i, j] = key;
        CompiledTerm t;
        switch (static_cast<Axis>(a)) {
            case Axis::X:
                t.flip_mask = bit(i) | bit(j);
                t.coeff = val;
                break;
            case Axis::Y:
                t.flip_mask = bit(i) | bit(j);
                t.sign_mask = t.flip_mask;
                t.coeff = -val;
                break;
            default:
                t.sign_mask = bit(i) | bit(j);
                t.coeff = val;
                break;
        }
        out.terms.push_back(t);
    }
    for (const auto& [key, val] : h.fields) {
        const auto& [a, i] = key;
        CompiledTerm t;
        switch (static_cast<Axis>(a)) {
            case Axis::X:
                t.flip_mask = bit(i);
                t.coeff = val;
                break;
            case Axis::Y:
                t.flip_mask = bit(i);
                t.sign_mask = bit(i);
                t.coeff = cdouble(0, -1) * val;
                break;
            default:
                t.sign_mask = bit(i);
                t.coeff = val;
                break;
        }
        out.terms.push_back(t);
    }
    return out;
}

namespace kernels {

namespace {

inline cdouble gather_one(const CompiledHamiltonian& h, const cdouble* in, std::uint64_t b) {
    cdouble acc{0.0, 0.0};
    for (const auto& t : h.terms) {
        const double sign = (std::popcount(b & t.sign_mask) & 1) ? -1.0 : 1.0;
        acc += t.coeff * sign * in[b ^ t.flip_mask];
    }
    return acc;
}

}  // namespace

void apply_hamiltonian_serial(const CompiledHamiltonian& h, const cdouble* in, cdouble* out) {
    const std::int64_t dim = std::int64_t{1} << h.n_sites;
    for (std::int64_t b = 0; b < dim; ++b)
        out[b] = gather_one(h, in, static_cast<std::uint64_t>(b));
}

void apply_hamiltonian_omp(const CompiledHamiltonian& h, const cdouble* in, cdouble* out) {
    const std::int64_t dim = std::int64_t{1} << h.n_sites;
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < dim; ++b)
        out[b] = gather_one(h, in, static_cast<std::uint64_t>(b));
}

}  // namespace kernels

void apply_hamiltonian(const CompiledHamiltonian& h, const cdouble* in, cdouble* out) {
    kernels::apply_hamiltonian_omp(h, in, out);
}

MatrixXcd to_dense(const SpinHamiltonian& h) {
    if (h.n_sites > 14)
        throw resource_error("to_dense: dense form limited to n_sites <= 14 (2^14 cap)");
    if (h.n_sites < 1) throw validation_error("to_dense: empty model");
    const std::int64_t dim = std::int64_t{1} << h.n_sites;
    const CompiledHamiltonian ch = compile_terms(h);
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (const auto& t : ch.terms) {
        for (std::int64_t b = 0; b < dim; ++b) {
            const double sign =
                (std::popcount(static_cast<std::uint64_t>(b) & t.sign_mask) & 1) ? -1.0 : 1.0;
            m(b, static_cast<std::int64_t>(static_cast<std::uint64_t>(b) ^ t.flip_mask)) +=
                t.coeff * sign;
        }
    }
    return m;
}

std::int64_t Mpo::max_bond() const {
    std::int64_t m = 0;
    for (const auto& t : w) m = std::max({m, t.dim(0), t.dim(1)});
    return m;
}

Mpo to_mpo(const SpinHamiltonian& h) {
    if (!h.nearest_neighbor_only())
        throw unsupported_error("to_mpo: only nearest-neighbor couplings are supported");
    const int n = h.n_sites;
    if (n < 2) throw validation_error("to_mpo: need at least 2 sites");

    // Transfer states: 0 = nothing placed, 1..3 = sigma_{x,y,z} pending from
    // the previous site (coupling coefficient already attached), 4 = done.
    const MatrixXcd id = MatrixXcd::Identity(2, 2);
    Mpo mpo;
    mpo.n_sites = n;
    mpo.w.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::int64_t bl = (i == 0) ? 1 : 5;
        const std::int64_t br = (i == n - 1) ? 1 : 5;
        DenseTensor w({bl, br, 2, 2});
        auto put = [&](std::int64_t a, std::int64_t b, const MatrixXcd& op) {
            const std::int64_t ra = (bl == 1) ? 0 : a;
            const std::int64_t rb = (br == 1) ? 0 : b;
            if ((bl == 1 && a != 0) || (br == 1 && b != 4)) return;  // boundary slices
            for (std::int64_t r = 0; r < 2; ++r)
                for (std::int64_t c = 0; c < 2; ++c) w.at({ra, rb, r, c}) += op(r, c);
        };
        put(0, 0, id);
        put(4, 4, id);
        MatrixXcd field = MatrixXcd::Zero(2, 2);
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            const double b = h.field(a, i);
            if (b != 0.0) field += b * pauli(a);
        }
        put(0, 4, field);
        if (i + 1 < n) {
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                const double jc = h.coupling(a, i, i + 1);
                if (jc != 0.0) put(0, 1 + static_cast<std::int64_t>(a), jc * pauli(a));
            }
        }
        if (i > 0) {
            for (Axis a : {Axis::X, Axis::Y, Axis::Z})
                put(1 + static_cast<std::int64_t>(a), 4, pauli(a));
        }
        mpo.w.push_back(std::move(w));
    }
    return mpo;
}

Mpo add_onsite(const Mpo& mpo, Axis axis, double coeff) {
    Mpo out = mpo;
    const MatrixXcd op = coeff * pauli(axis);
    for (int i = 0; i < out.n_sites; ++i) {
        DenseTensor& w = out.w[static_cast<std::size_t>(i)];
        const std::int64_t a = 0;
        const std::int64_t b = (i == out.n_sites - 1) ? 0 : w.dim(1) - 1;
        for (std::int64_t r = 0; r < 2; ++r)
            for (std::int64_t c = 0; c < 2; ++c) w.at({a, b, r, c}) += op(r, c);
    }
    return out;
}

}  // namespace qlg
