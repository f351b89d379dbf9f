#include "membrane/sampler.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>

#include "membrane/errors.hpp"
#include "membrane/finite_volume.hpp"
#include "membrane/noise.hpp"

namespace membrane {

namespace {

constexpr size_t kExactWindowBudget = 20000;  // factorization budget (sites)

std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

Window grow_window(const Window& w, int by) {
    LatticeVector lo = w.lo(), hi = w.hi();
    for (size_t i = 0; i < lo.size(); ++i) {
        lo[i] -= by;
        hi[i] += by;
    }
    return Window(lo, hi);
}

// Hermitian-paired spectral noise: out[j] = scale * sqrt_s[j] * zeta_j with
// zeta_{-j} = conj(zeta_j), so the synthesized field is exactly real. Draw i
// (one Philox block) feeds the i-th canonical mode in flat order.
void fill_spectral_noise(uint64_t seed, uint64_t stream, const LatticeVector& sides,
                         const double* sqrt_s, double scale, std::complex<double>* out) {
    const int d = int(sides.size());
    size_t n = 1;
    for (int v : sides) n *= size_t(v);
    std::vector<size_t> stride(size_t(d), 1);
    for (int a = d - 2; a >= 0; --a)
        stride[size_t(a)] = stride[size_t(a) + 1] * size_t(sides[size_t(a) + 1]);
    // per-axis contribution of the mirrored index (theta -> -theta)
    auto rc = std::vector<std::vector<size_t>>(size_t(d));
    for (int a = 0; a < d; ++a) {
        rc[size_t(a)].resize(size_t(sides[size_t(a)]));
        for (int v = 0; v < sides[size_t(a)]; ++v)
            rc[size_t(a)][size_t(v)] =
                stride[size_t(a)] * size_t((sides[size_t(a)] - v) % sides[size_t(a)]);
    }
    constexpr size_t kChunk = 8192;
    struct Slot {
        size_t flat, flat_r;
    };
    std::vector<Slot> slots(kChunk);
    std::vector<double> g(2 * kChunk);
    size_t n_slots = 0;
    uint64_t rank = 0;
    const double inv_sqrt2 = 0.70710678118654752440;
    auto flush = [&]() {
        if (!n_slots) return;
        gaussian_blocks(seed, stream, rank, n_slots, g.data());
        for (size_t i = 0; i < n_slots; ++i) {
            const Slot s = slots[i];
            const double amp = scale * sqrt_s[s.flat];
            if (s.flat == s.flat_r) {
                out[s.flat] = {amp * g[2 * i], 0.0};
            } else {
                const double re = amp * inv_sqrt2 * g[2 * i];
                const double im = amp * inv_sqrt2 * g[2 * i + 1];
                out[s.flat] = {re, im};
                out[s.flat_r] = {re, -im};
            }
        }
        rank += n_slots;
        n_slots = 0;
    };
    // row loop: within a row the canonical modes (flat <= mirrored flat) are
    // v = 0 when base_r >= base plus the contiguous range 1..v_max with
    // v_max = (base_r - base + L)/2, so no per-site test is needed
    const int last = d - 1;
    const int L_last = sides[size_t(last)];
    LatticeVector j(size_t(d), 0);
    const size_t n_rows = n / size_t(L_last);
    size_t base = 0, base_r = 0;
    for (size_t row = 0; row < n_rows; ++row) {
        const int64_t diff = int64_t(base_r) - int64_t(base);
        if (diff >= 0) {
            slots[n_slots++] = {base, base_r};
            if (n_slots == kChunk) flush();
        }
        const int v_max = int(std::min<int64_t>(L_last - 1, (diff + L_last) / 2));
        for (int v = 1; v <= v_max; ++v) {
            slots[n_slots++] = {base + size_t(v), size_t(diff + int64_t(base) + L_last - v)};
            if (n_slots == kChunk) flush();
        }
        base += size_t(L_last);
        // odometer over the leading axes, updating the mirrored row base
        for (int a = last - 1; a >= 0; --a) {
            const int v = ++j[size_t(a)];
            if (v < sides[size_t(a)]) {
                base_r += rc[size_t(a)][size_t(v)] - rc[size_t(a)][size_t(v) - 1];
                break;
            }
            j[size_t(a)] = 0;
            base_r -= rc[size_t(a)][size_t(sides[size_t(a)]) - 1];
        }
    }
    flush();
}

// sqrt(S) = 1/lambda(theta) per flat mode, zero mode zeroed.
std::vector<double> torus_sqrt_density(const LatticeVector& sides) {
    const int d = int(sides.size());
    size_t n = 1;
    for (int v : sides) n *= size_t(v);
    std::vector<std::vector<double>> one_minus_cos = std::vector<std::vector<double>>(size_t(d));
    for (int a = 0; a < d; ++a) {
        one_minus_cos[size_t(a)].resize(size_t(sides[size_t(a)]));
        for (int k = 0; k < sides[size_t(a)]; ++k)
            one_minus_cos[size_t(a)][size_t(k)] =
                1.0 - std::cos(2.0 * M_PI * double(k) / double(sides[size_t(a)]));
    }
    std::vector<double> s(n);
    LatticeVector j(size_t(d), 0);
    for (size_t flat = 0; flat < n; ++flat) {
        double lam = 0;
        for (int a = 0; a < d; ++a) lam += one_minus_cos[size_t(a)][size_t(j[size_t(a)])];
        lam /= double(d);
        s[flat] = flat == 0 ? 0.0 : 1.0 / lam;
        for (int a = d - 1; a >= 0; --a) {
            if (++j[size_t(a)] < sides[size_t(a)]) break;
            j[size_t(a)] = 0;
        }
    }
    return s;
}

}  // namespace

void GeometrySpec::validate() const {
    if (d < 5) throw PreconditionError("geometry: d >= 5 required");
    switch (kind) {
        case Kind::dirichlet_box:
            if (param < 1) throw PreconditionError("geometry: dirichlet box needs N >= 1");
            break;
        case Kind::torus:
            if (param < 4) throw PreconditionError("geometry: torus needs L >= 4");
            break;
        case Kind::exact_window: {
            if (param < 0) throw PreconditionError("geometry: window radius >= 0");
            if (Window::box(d, param).size() > kExactWindowBudget)
                throw ResourceError("geometry: exact window exceeds the factorization budget");
            break;
        }
    }
}

Window GeometrySpec::window() const {
    if (kind == Kind::torus) return Window(LatticeVector(size_t(d), 0), LatticeVector(size_t(d), param - 1));
    return Window::box(d, param);
}

std::string GeometrySpec::describe() const {
    const char* k = kind == Kind::dirichlet_box ? "dirichlet_box"
                    : kind == Kind::torus       ? "torus"
                                                : "exact_window";
    return std::string(k) + "(" + std::to_string(param) + "),d=" + std::to_string(d);
}

// ---------------------------------------------------------------------------
// Dirichlet box

DirichletBoxSampler::DirichletBoxSampler(int d, int N, uint64_t seed, double solve_tol)
    : geom_{GeometrySpec::Kind::dirichlet_box, d, N}, box_(Window::box(d, N)),
      grown_(Window::box(d, N + 1)), seed_(seed), solve_tol_(solve_tol) {
    geom_.validate();
    op_ = std::make_unique<DirichletBilaplacian>(box_);
    pre_ = std::make_unique<DstBilaplacianInverse>(box_);
}

FieldSample DirichletBoxSampler::sample(uint64_t stream_id) const {
    // white noise zeta on the grown box (where Delta of a box-supported
    // function lives), rhs = (Delta zeta)|_box = B^T zeta
    std::vector<double> zeta(grown_.size());
    {
        std::vector<double> g(2 * (zeta.size() / 2 + 1));
        gaussian_blocks(seed_, stream_id, 0, zeta.size() / 2 + 1, g.data());
        std::copy(g.begin(), g.begin() + std::ptrdiff_t(zeta.size()), zeta.begin());
    }
    std::vector<double> lap, rhs(box_.size());
    apply_laplacian_window(grown_, zeta, lap);
    {
        LatticeVector x = box_.lo();
        size_t i = 0;
        do {
            rhs[i++] = lap[grown_.index(x)];
        } while (box_.next_site(x));
    }
    std::vector<double> phi;
    std::lock_guard<std::mutex> lock(mu_);  // op_/pre_ hold scratch buffers
    const CgResult cg = solve_dirichlet_bilaplacian(*op_, *pre_, rhs, phi, solve_tol_, 2000);
    if (!cg.converged) throw NumericError("DirichletBoxSampler: solve failed", cg.residual_norm);
    FieldSample out;
    out.geometry = geom_;
    out.window = box_;
    out.seed = seed_;
    out.stream_id = stream_id;
    out.values = std::move(phi);
    return out;
}

// ---------------------------------------------------------------------------
// Torus

struct TorusSampler::Impl {
    int d, L;
    uint64_t seed;
    size_t n;
    std::vector<double> sqrt_s;
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    mutable std::mutex mu;

    Impl(int d_, int L_, uint64_t seed_) : d(d_), L(L_), seed(seed_) {
        n = size_t(std::llround(std::pow(double(L), d)));
        sqrt_s = torus_sqrt_density(LatticeVector(size_t(d), L));
        buf = fftw_alloc_complex(n);
        if (!buf) throw ResourceError("TorusSampler: allocation failed");
        std::vector<int> dims(size_t(d), L);
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!plan) throw NumericError("TorusSampler: fftw plan failed");
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
};

TorusSampler::TorusSampler(int d, int L, uint64_t seed)
    : impl_(new Impl(d, L, seed)), geom_{GeometrySpec::Kind::torus, d, L} {
    geom_.validate();
}

TorusSampler::~TorusSampler() = default;

FieldSample TorusSampler::sample(uint64_t stream_id) const {
    Impl& im = *impl_;
    FieldSample out;
    out.geometry = geom_;
    out.window = geom_.window();
    out.seed = im.seed;
    out.stream_id = stream_id;
    out.values.resize(im.n);
    const double scale = std::pow(double(im.L), -0.5 * im.d);
    std::lock_guard<std::mutex> lock(im.mu);
    fill_spectral_noise(im.seed, stream_id, LatticeVector(size_t(im.d), im.L), im.sqrt_s.data(),
                        scale, reinterpret_cast<std::complex<double>*>(im.buf));
    fftw_execute(im.plan);
    for (size_t i = 0; i < im.n; ++i) out.values[i] = im.buf[i][0];
    return out;
}

double TorusSampler::covariance(const LatticeVector& delta) const {
    const Impl& im = *impl_;
    if (int(delta.size()) != im.d) throw PreconditionError("torus covariance: dimension mismatch");
    LatticeVector j(size_t(im.d), 0);
    double acc = 0;
    const double two_pi_over_L = 2.0 * M_PI / double(im.L);
    for (size_t flat = 0; flat < im.n; ++flat) {
        if (flat != 0) {
            double dot = 0;
            for (int a = 0; a < im.d; ++a) dot += double(j[size_t(a)]) * double(delta[size_t(a)]);
            const double s = im.sqrt_s[flat];
            acc += s * s * std::cos(two_pi_over_L * dot);
        }
        for (int a = im.d - 1; a >= 0; --a) {
            if (++j[size_t(a)] < im.L) break;
            j[size_t(a)] = 0;
        }
    }
    return acc / double(im.n);
}

// ---------------------------------------------------------------------------
// Torus restricted to a box

TorusSubsetSampler::TorusSubsetSampler(LatticeVector sides, Window out, uint64_t seed)
    : sides_(std::move(sides)), out_(std::move(out)), seed_(seed) {
    const int d = int(sides_.size());
    if (out_.dim() != d) throw PreconditionError("TorusSubsetSampler: window dimension mismatch");
    for (int a = 0; a < d; ++a)
        if (out_.extent(a) > sides_[size_t(a)])
            throw PreconditionError("TorusSubsetSampler: output window wider than the torus");
    sqrt_s_ = torus_sqrt_density(sides_);
    phases_.resize(size_t(d));
    for (int a = 0; a < d; ++a) {
        const int L = sides_[size_t(a)];
        phases_[size_t(a)].resize(size_t(L) * size_t(out_.extent(a)));
        for (int th = 0; th < L; ++th)
            for (int t = 0; t < out_.extent(a); ++t) {
                const double ang = 2.0 * M_PI * double(th) * double(out_.lo()[size_t(a)] + t) / L;
                phases_[size_t(a)][size_t(th) * size_t(out_.extent(a)) + size_t(t)] = {
                    std::cos(ang), std::sin(ang)};
            }
    }
}

TorusSubsetSampler::TorusSubsetSampler(int d, int L, Window out, uint64_t seed)
    : TorusSubsetSampler(LatticeVector(size_t(d), L), std::move(out), seed) {}

FieldSample TorusSubsetSampler::sample(uint64_t stream_id) const {
    const int d = int(sides_.size());
    const size_t n = sqrt_s_.size();
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::complex<double>>& work = work_;
    work.resize(n);
    double scale = 1.0;
    for (int v : sides_) scale /= std::sqrt(double(v));
    fill_spectral_noise(seed_, stream_id, sides_, sqrt_s_.data(), scale, work.data());
    // contract axes from last to first: after step a the array has shape
    // (L_0 .. L_{a-1}, E_a, E_{a+1}, ..., E_{d-1}); each step is a batch of
    // (E x L) . (L x trail) products
    using CMatRM =
        Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    size_t trail = 1;  // prod of already-contracted extents
    for (int a = d - 1; a >= 0; --a) {
        const int L = sides_[size_t(a)];
        const size_t E = size_t(out_.extent(a));
        size_t lead = 1;
        for (int b = 0; b < a; ++b) lead *= size_t(sides_[size_t(b)]);
        std::vector<std::complex<double>>& next = next_;
        next.resize(lead * E * trail);
        Eigen::Map<const CMatRM> P(phases_[size_t(a)].data(), L, Eigen::Index(E));
        if (trail == 1) {
            // one large GEMM: (lead x L) . (L x E)
            Eigen::Map<const CMatRM> in(work.data(), Eigen::Index(lead), L);
            Eigen::Map<CMatRM> out_m(next.data(), Eigen::Index(lead), Eigen::Index(E));
            out_m.noalias() = in * P;
        } else {
            for (size_t m = 0; m < lead; ++m) {
                Eigen::Map<const CMatRM> in(work.data() + m * size_t(L) * trail, L,
                                            Eigen::Index(trail));
                Eigen::Map<CMatRM> out_m(next.data() + m * E * trail, Eigen::Index(E),
                                         Eigen::Index(trail));
                out_m.noalias() = P.transpose() * in;
            }
        }
        work.swap(next);
        trail *= E;
    }
    FieldSample out;
    int maxside = 0;
    for (int v : sides_) maxside = std::max(maxside, v);
    out.geometry = GeometrySpec{GeometrySpec::Kind::torus, d, maxside};
    out.window = out_;
    out.seed = seed_;
    out.stream_id = stream_id;
    out.values.resize(out_.size());
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = work[i].real();
    return out;
}

// ---------------------------------------------------------------------------
// Exact infinite-volume window

ExactWindowSampler::ExactWindowSampler(int d, int radius, uint64_t seed, double quad_tol)
    : geom_{GeometrySpec::Kind::exact_window, d, radius}, box_(Window::box(d, radius)),
      seed_(seed) {
    geom_.validate();
    const GreenTable table = build_green_table(GreenKind::bilaplacian, d, 2 * radius, quad_tol);
    // dense offset lookup over [-2R .. 2R]^d
    const Window offs = Window::box(d, 2 * radius);
    std::vector<double> lut(offs.size());
    {
        LatticeVector o = offs.lo();
        size_t i = 0;
        do {
            lut[i++] = table.at(o);
        } while (offs.next_site(o));
    }
    const size_t n = box_.size();
    const auto fill = [&](double jitter) {
        gram_.resize(Eigen::Index(n), Eigen::Index(n));
        LatticeVector x = box_.lo(), y;
        size_t i = 0;
        LatticeVector delta = LatticeVector(size_t(d));
        do {
            y = box_.lo();
            size_t j = 0;
            do {
                for (int a = 0; a < d; ++a) delta[size_t(a)] = x[size_t(a)] - y[size_t(a)];
                gram_(Eigen::Index(i), Eigen::Index(j)) = lut[offs.index(delta)];
                ++j;
            } while (box_.next_site(y));
            if (jitter > 0) gram_(Eigen::Index(i), Eigen::Index(i)) += jitter;
            ++i;
        } while (box_.next_site(x));
    };
    fill(0.0);
    {
        Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(gram_);  // in-place factorization
        if (llt.info() != Eigen::Success) {
            // retry with diagonal jitter, reported via jitter_applied()
            fill(1e-10);
            jitter_applied_ = true;
            Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> retry(gram_);
            if (retry.info() != Eigen::Success)
                throw NumericError("ExactWindowSampler: Gram matrix not positive definite");
        }
    }
}

FieldSample ExactWindowSampler::sample(uint64_t stream_id) const {
    return std::move(sample_block(stream_id, 1)[0]);
}

std::vector<FieldSample> ExactWindowSampler::sample_block(uint64_t stream0, int count) const {
    const size_t n = box_.size();
    Eigen::MatrixXd Z = Eigen::MatrixXd(Eigen::Index(n), Eigen::Index(count));
    std::vector<double> g(2 * (n / 2 + 1));
    for (int c = 0; c < count; ++c) {
        gaussian_blocks(seed_, stream0 + uint64_t(c), 0, n / 2 + 1, g.data());
        for (size_t i = 0; i < n; ++i) Z(Eigen::Index(i), c) = g[i];
    }
    Eigen::MatrixXd Phi = gram_.triangularView<Eigen::Lower>() * Z;
    std::vector<FieldSample> out = std::vector<FieldSample>(size_t(count));
    for (int c = 0; c < count; ++c) {
        FieldSample& s = out[size_t(c)];
        s.geometry = geom_;
        s.window = box_;
        s.seed = seed_;
        s.stream_id = stream0 + uint64_t(c);
        s.values.assign(Phi.col(c).data(), Phi.col(c).data() + Phi.rows());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conditional decomposition phi = xi + psi

namespace {

// Reads the sample at x, wrapping through the torus when the geometry wraps.
double sample_value(const FieldSample& s, const LatticeVector& x, bool wrap) {
    if (!wrap) return s.values[s.window.index(x)];
    LatticeVector w(x.size());
    const int L = s.geometry.param;
    for (size_t a = 0; a < x.size(); ++a) w[a] = ((x[a] % L) + L) % L;
    return s.values[s.window.index(w)];
}

}  // namespace

ConditionalSplit conditional_split(const FieldSample& sample, const Window& U,
                                   double residual_tol) {
    const int d = sample.window.dim();
    if (U.dim() != d) throw PreconditionError("conditional_split: dimension mismatch");
    const Window grown2 = grow_window(U, 2);
    const bool full_torus = sample.geometry.kind == GeometrySpec::Kind::torus &&
                            sample.window.size() == size_t(std::llround(
                                std::pow(double(sample.geometry.param), d)));
    if (full_torus) {
        for (int a = 0; a < d; ++a)
            if (U.extent(a) + 4 > sample.geometry.param)
                throw PreconditionError("conditional_split: margin wraps onto U");
    } else {
        if (!sample.window.contains(grown2.lo()) || !sample.window.contains(grown2.hi()))
            throw PreconditionError("conditional_split: U needs a two-layer margin in the window");
    }

    // rhs = -(Delta^2 [phi restricted to the double layer]) on U
    std::vector<double> w(grown2.size(), 0.0), tmp, lap2;
    {
        LatticeVector x = grown2.lo();
        size_t i = 0;
        do {
            if (!U.contains(x)) w[i] = sample_value(sample, x, full_torus);
            ++i;
        } while (grown2.next_site(x));
    }
    apply_laplacian_window(grown2, w, tmp);
    apply_laplacian_window(grown2, tmp, lap2);
    std::vector<double> rhs(U.size());
    {
        LatticeVector x = U.lo();
        size_t i = 0;
        do {
            rhs[i++] = -lap2[grown2.index(x)];
        } while (U.next_site(x));
    }

    const DirichletBilaplacian A(U);
    const DstBilaplacianInverse M(U);
    std::vector<double> xi_u;
    const CgResult cg = solve_dirichlet_bilaplacian(A, M, rhs, xi_u, 1e-13, 50000);

    std::vector<double> back;
    A.apply(xi_u, back);
    double resid = 0;
    for (size_t i = 0; i < back.size(); ++i) resid = std::max(resid, std::abs(back[i] - rhs[i]));
    if (resid > residual_tol)
        throw NumericError("conditional_split: stencil residual above tolerance", resid);

    ConditionalSplit out;
    out.region = U;
    out.stencil_residual = resid;
    out.iterations = cg.iterations;
    out.xi = sample.values;
    {
        LatticeVector x = U.lo();
        size_t i = 0;
        do {
            LatticeVector w2 = x;
            if (full_torus) {
                const int L = sample.geometry.param;
                for (int a = 0; a < d; ++a) w2[size_t(a)] = ((x[size_t(a)] % L) + L) % L;
            }
            out.xi[sample.window.index(w2)] = xi_u[i++];
        } while (U.next_site(x));
    }
    out.psi.resize(sample.values.size());
    for (size_t i = 0; i < out.psi.size(); ++i) out.psi[i] = sample.values[i] - out.xi[i];
    return out;
}

FieldSample torus_window_view(const FieldSample& torus_sample, int radius) {
    if (torus_sample.geometry.kind != GeometrySpec::Kind::torus)
        throw PreconditionError("torus_window_view: torus sample required");
    const int d = torus_sample.window.dim();
    const int L = torus_sample.geometry.param;
    if (2 * radius + 1 > L) throw PreconditionError("torus_window_view: window wider than torus");
    FieldSample out;
    out.geometry = torus_sample.geometry;
    out.window = Window::box(d, radius);
    out.seed = torus_sample.seed;
    out.stream_id = torus_sample.stream_id;
    out.values.resize(out.window.size());
    LatticeVector x = out.window.lo();
    LatticeVector w = LatticeVector(size_t(d));
    size_t i = 0;
    do {
        for (int a = 0; a < d; ++a) w[size_t(a)] = ((x[size_t(a)] % L) + L) % L;
        out.values[i++] = torus_sample.values[torus_sample.window.index(w)];
    } while (out.window.next_site(x));
    return out;
}

// ---------------------------------------------------------------------------
// Raw dump

void write_field_dump(const FieldSample& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("field dump: cannot write " + path);
    out.write("MPFS", 4);
    const uint8_t kind = uint8_t(s.geometry.kind);
    const uint16_t d = uint16_t(s.geometry.d), param = uint16_t(s.geometry.param);
    out.write(reinterpret_cast<const char*>(&kind), 1);
    out.write(reinterpret_cast<const char*>(&d), 2);
    out.write(reinterpret_cast<const char*>(&param), 2);
    out.write(reinterpret_cast<const char*>(&s.seed), 8);
    out.write(reinterpret_cast<const char*>(&s.stream_id), 8);
    out.write(reinterpret_cast<const char*>(s.values.data()),
              std::streamsize(s.values.size() * sizeof(double)));
}

FieldSample read_field_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("field dump: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MPFS", 4) != 0) throw NumericError("field dump: bad magic");
    uint8_t kind;
    uint16_t d, param;
    FieldSample s;
    in.read(reinterpret_cast<char*>(&kind), 1);
    in.read(reinterpret_cast<char*>(&d), 2);
    in.read(reinterpret_cast<char*>(&param), 2);
    in.read(reinterpret_cast<char*>(&s.seed), 8);
    in.read(reinterpret_cast<char*>(&s.stream_id), 8);
    s.geometry = GeometrySpec{GeometrySpec::Kind(kind), int(d), int(param)};
    s.window = s.geometry.window();
    s.values.resize(s.window.size());
    in.read(reinterpret_cast<char*>(s.values.data()),
            std::streamsize(s.values.size() * sizeof(double)));
    if (!in) throw NumericError("field dump: truncated file");
    return s;
}

}  // namespace membrane
