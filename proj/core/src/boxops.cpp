#include "membrane/boxops.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "membrane/errors.hpp"

namespace membrane {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

void apply_laplacian_window(const Window& win, const std::vector<double>& in,
                            std::vector<double>& out) {
    const int d = win.dim();
    const double inv2d = 1.0 / (2.0 * d);
    out.assign(win.size(), 0.0);
    // strides per axis
    std::vector<size_t> stride(size_t(d), 1);
    for (int i = d - 2; i >= 0; --i) stride[size_t(i)] = stride[size_t(i) + 1] * size_t(win.extent(i + 1));
    LatticeVector x = win.lo();
    size_t idx = 0;
    do {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            if (x[i] > win.lo()[i]) s += in[idx - stride[size_t(i)]];
            if (x[i] < win.hi()[i]) s += in[idx + stride[size_t(i)]];
        }
        out[idx] = inv2d * s - in[idx];
        ++idx;
    } while (win.next_site(x));
}

namespace {
Window grow_window(const Window& w, int by) {
    LatticeVector lo = w.lo(), hi = w.hi();
    for (size_t i = 0; i < lo.size(); ++i) {
        lo[i] -= by;
        hi[i] += by;
    }
    return Window(lo, hi);
}
}  // namespace

DirichletBilaplacian::DirichletBilaplacian(const Window& box)
    : box_(box), grown_(grow_window(box, 1)) {
    embed_.resize(box_.size());
    LatticeVector x = box_.lo();
    size_t i = 0;
    do {
        embed_[i++] = grown_.index(x);
    } while (box_.next_site(x));
    pad_.resize(grown_.size());
    lap_.resize(grown_.size());
}

void DirichletBilaplacian::apply(const std::vector<double>& in, std::vector<double>& out) const {
    std::fill(pad_.begin(), pad_.end(), 0.0);
    for (size_t i = 0; i < embed_.size(); ++i) pad_[embed_[i]] = in[i];
    apply_laplacian_window(grown_, pad_, lap_);
    apply_laplacian_window(grown_, lap_, pad_);
    out.resize(box_.size());
    for (size_t i = 0; i < embed_.size(); ++i) out[i] = pad_[embed_[i]];
}

CgResult conjugate_gradient(const LinearOp& A, const std::vector<double>& b, std::vector<double>& x,
                            double rel_tol, int max_iters) {
    return conjugate_gradient(
        A, [](const std::vector<double>& r, std::vector<double>& z) { z = r; }, b, x, rel_tol,
        max_iters);
}

CgResult conjugate_gradient(const LinearOp& A, const LinearOp& M_inv, const std::vector<double>& b,
                            std::vector<double>& x, double rel_tol, int max_iters) {
    const size_t n = b.size();
    x.assign(n, 0.0);
    std::vector<double> r = b, z(n), p(n), Ap(n);
    double b_norm = 0;
    for (double v : b) b_norm += v * v;
    b_norm = std::sqrt(b_norm);
    if (b_norm == 0) return {0, 0.0, true};
    M_inv(r, z);
    p = z;
    double rz = 0;
    for (size_t i = 0; i < n; ++i) rz += r[i] * z[i];
    CgResult res;
    for (int it = 0; it < max_iters; ++it) {
        A(p, Ap);
        double pAp = 0;
        for (size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (pAp <= 0) throw NumericError("conjugate_gradient: operator not positive definite");
        const double alpha = rz / pAp;
        double rr = 0;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rr += r[i] * r[i];
        }
        res.iterations = it + 1;
        res.residual_norm = std::sqrt(rr);
        if (res.residual_norm <= rel_tol * b_norm) {
            res.converged = true;
            return res;
        }
        M_inv(r, z);
        double rz_new = 0;
        for (size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    return res;
}

struct DstBilaplacianInverse::Impl {
    Window box;
    fftw_plan plan = nullptr;
    std::vector<double> eig_inv;  // 1 / lambda(k)^2, lambda = single-layer Dirichlet symbol
    double norm;                  // DST-I applied twice multiplies by prod 2(n_i + 1)
    mutable std::vector<double> buf;

    explicit Impl(const Window& b) : box(b) {
        const int d = box.dim();
        auto n = std::vector<int>(size_t(d));
        norm = 1.0;
        for (int i = 0; i < d; ++i) {
            n[size_t(i)] = box.extent(i);
            norm *= 2.0 * (box.extent(i) + 1);
        }
        buf.resize(box.size());
        std::vector<fftw_r2r_kind> kinds(size_t(d), FFTW_RODFT00);
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            plan = fftw_plan_r2r(d, n.data(), buf.data(), buf.data(), kinds.data(),
                                 FFTW_ESTIMATE);
        }
        if (!plan) throw NumericError("DstBilaplacianInverse: fftw plan failed");
        // lambda(k) = (1/d) sum_i (1 - cos(pi k_i / (n_i + 1))), k_i = 1..n_i
        eig_inv.resize(box.size());
        auto axis = std::vector<std::vector<double>>(size_t(d));
        for (int i = 0; i < d; ++i) {
            axis[size_t(i)].resize(size_t(box.extent(i)));
            for (int k = 1; k <= box.extent(i); ++k)
                axis[size_t(i)][size_t(k) - 1] = 1.0 - std::cos(M_PI * k / (box.extent(i) + 1.0));
        }
        LatticeVector idx(size_t(d), 0);  // zero-based spectral index
        size_t flat = 0;
        for (;;) {
            double lam = 0;
            for (int i = 0; i < d; ++i) lam += axis[size_t(i)][size_t(idx[size_t(i)])];
            lam /= d;
            eig_inv[flat] = 1.0 / (lam * lam);
            ++flat;
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++idx[size_t(i)] < box.extent(i)) break;
                idx[size_t(i)] = 0;
            }
            if (i < 0) break;
        }
    }

    ~Impl() {
        if (plan) {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }

    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        buf = in;
        fftw_execute_r2r(plan, buf.data(), buf.data());
        const double inv_norm = 1.0 / norm;
        for (size_t i = 0; i < buf.size(); ++i) buf[i] *= eig_inv[i] * inv_norm;
        fftw_execute_r2r(plan, buf.data(), buf.data());
        out = buf;
    }
};

DstBilaplacianInverse::DstBilaplacianInverse(const Window& box) : impl_(new Impl(box)) {}
DstBilaplacianInverse::~DstBilaplacianInverse() = default;

void DstBilaplacianInverse::apply(const std::vector<double>& in, std::vector<double>& out) const {
    impl_->apply(in, out);
}

CgResult solve_dirichlet_bilaplacian(const DirichletBilaplacian& A, const DstBilaplacianInverse& M,
                                     const std::vector<double>& b, std::vector<double>& x,
                                     double rel_tol, int max_iters) {
    return conjugate_gradient(
        [&A](const std::vector<double>& v, std::vector<double>& out) { A.apply(v, out); },
        [&M](const std::vector<double>& v, std::vector<double>& out) { M.apply(v, out); }, b, x,
        rel_tol, max_iters);
}

}  // namespace membrane
