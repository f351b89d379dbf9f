#include "membrane/finite_volume.hpp"

#include <cmath>

#include "membrane/errors.hpp"
#include "membrane/green.hpp"

namespace membrane {

namespace {

constexpr size_t kDirectCap = 4000;

std::vector<double> unit_vector(const Window& box, const LatticeVector& x) {
    if (!box.contains(x)) throw PreconditionError("finite volume: probe site outside box");
    std::vector<double> e(box.size(), 0.0);
    e[box.index(x)] = 1.0;
    return e;
}

}  // namespace

size_t direct_solver_cap() { return kDirectCap; }

Eigen::SparseMatrix<double> bilaplacian_matrix(int d, int N) {
    const Window box = Window::box(d, N);
    const size_t n = box.size();
    const double inv2d = 1.0 / (2.0 * d);
    const double c_center = 1.0 + inv2d;          // 1 + 1/(2d)
    const double c_nn = -1.0 / d;                 // +-e_i
    const double c_2 = 1.0 / (4.0 * d * d);       // +-2 e_i
    const double c_diag = 1.0 / (2.0 * d * d);    // +-e_i +- e_j, i != j
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n * size_t(2 * d * d + 2 * d + 1));
    LatticeVector x = box.lo();
    LatticeVector y;
    do {
        const auto row = Eigen::Index(box.index(x));
        trips.emplace_back(row, row, c_center);
        y = x;
        for (int i = 0; i < d; ++i) {
            for (int s : {-1, 1}) {
                y[i] = x[i] + s;
                if (box.contains(y)) trips.emplace_back(row, Eigen::Index(box.index(y)), c_nn);
                y[i] = x[i] + 2 * s;
                if (box.contains(y)) trips.emplace_back(row, Eigen::Index(box.index(y)), c_2);
                y[i] = x[i];
            }
            for (int j = i + 1; j < d; ++j) {
                for (int si : {-1, 1})
                    for (int sj : {-1, 1}) {
                        y[i] = x[i] + si;
                        y[j] = x[j] + sj;
                        if (box.contains(y))
                            trips.emplace_back(row, Eigen::Index(box.index(y)), c_diag);
                        y[i] = x[i];
                        y[j] = x[j];
                    }
            }
        }
    } while (box.next_site(x));
    Eigen::SparseMatrix<double> A = Eigen::SparseMatrix<double>(Eigen::Index(n), Eigen::Index(n));
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

FiniteVolumeBox::FiniteVolumeBox(int d, int N) : d_(d), N_(N), box_(Window::box(d, N)) {
    if (N < 0 || d < 1) throw PreconditionError("FiniteVolumeBox: bad arguments");
    if (box_.size() <= kDirectCap) {
        llt_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
        llt_->compute(bilaplacian_matrix(d, N));
        if (llt_->info() != Eigen::Success)
            throw NumericError("FiniteVolumeBox: sparse factorization failed");
    } else {
        op_ = std::make_unique<DirichletBilaplacian>(d, N);
        pre_ = std::make_unique<DstBilaplacianInverse>(box_);
    }
}

std::vector<double> FiniteVolumeBox::dirichlet_column(const LatticeVector& x,
                                                      double residual_tol) const {
    const std::vector<double> rhs = unit_vector(box_, x);
    std::vector<double> col(box_.size());
    if (llt_) {
        Eigen::Map<const Eigen::VectorXd> b(rhs.data(), Eigen::Index(rhs.size()));
        Eigen::VectorXd sol = llt_->solve(b);
        std::copy(sol.data(), sol.data() + sol.size(), col.begin());
    } else {
        const CgResult cg = solve_dirichlet_bilaplacian(*op_, *pre_, rhs, col, 1e-13, 20000);
        if (!cg.converged)
            throw NumericError("dirichlet_column: CG did not converge", cg.residual_norm);
    }
    // verify the defining equation
    std::vector<double> back;
    if (op_) {
        op_->apply(col, back);
    } else {
        DirichletBilaplacian A(d_, N_);
        A.apply(col, back);
    }
    double resid = 0;
    for (size_t i = 0; i < back.size(); ++i) resid = std::max(resid, std::abs(back[i] - rhs[i]));
    if (resid > residual_tol)
        throw NumericError("dirichlet_column: residual above tolerance", resid);
    return col;
}

std::vector<double> FiniteVolumeBox::killed_column(const LatticeVector& x,
                                                   double residual_tol) const {
    // (I - Q) g = delta_x, and I - Q is exactly -Delta with zero padding.
    const std::vector<double> rhs = unit_vector(box_, x);
    std::vector<double> col(box_.size());
    const LinearOp A = [this](const std::vector<double>& v, std::vector<double>& out) {
        apply_laplacian_window(box_, v, out);
        for (double& o : out) o = -o;
    };
    const CgResult cg = conjugate_gradient(A, rhs, col, 1e-14, 20000);
    if (!cg.converged) throw NumericError("killed_column: CG did not converge", cg.residual_norm);
    std::vector<double> back(box_.size());
    A(col, back);
    double resid = 0;
    for (size_t i = 0; i < back.size(); ++i) resid = std::max(resid, std::abs(back[i] - rhs[i]));
    if (resid > residual_tol) throw NumericError("killed_column: residual above tolerance", resid);
    return col;
}

double FiniteVolumeBox::dirichlet_value(const LatticeVector& x, const LatticeVector& y,
                                        double residual_tol) const {
    const std::vector<double> col = dirichlet_column(x, residual_tol);
    if (!box_.contains(y)) throw PreconditionError("dirichlet_value: y outside box");
    return col[box_.index(y)];
}

double FiniteVolumeBox::bar_value(const LatticeVector& x, const LatticeVector& y) const {
    const std::vector<double> cx = killed_column(x);
    const std::vector<double> cy = (x == y) ? cx : killed_column(y);
    double s = 0;
    for (size_t i = 0; i < cx.size(); ++i) s += cx[i] * cy[i];
    return s;
}

double variance_xi(int N, const LatticeVector& x, int d, double quad_tol) {
    if (int(x.size()) != d) throw PreconditionError("variance_xi: dimension mismatch");
    if (linf_norm(x) > N) throw PreconditionError("variance_xi: x outside B(0,N)");
    const double Gxx = green_bilaplacian(LatticeVector(size_t(d), 0), quad_tol).value;
    const FiniteVolumeBox box(d, N);
    return Gxx - box.dirichlet_value(x, x);
}

namespace {

GreenTable column_table(GreenKind kind, int N, int d, const std::vector<LatticeVector>& probes) {
    GreenTable t;
    t.kind = kind;
    t.d = d;
    t.radius = N;
    t.tol = 1e-10;
    const FiniteVolumeBox fv(d, N);
    const Window& box = fv.box();
    for (const LatticeVector& x : probes) {
        std::vector<double> col;
        if (kind == GreenKind::dirichlet_GN)
            col = fv.dirichlet_column(x);
        else if (kind == GreenKind::killed_gN)
            col = fv.killed_column(x);
        else {
            // bar G_N column: convolve g_N(x,.) against g_N(.,y) columns is
            // quadratic; store the diagonal-relevant pairs instead, i.e.
            // bar(x,y) for y over the box via one extra solve per y would be
            // wasteful. The standard use is bar(x,x) and bar(x,y) for probe
            // pairs, so store pairs over probes only.
            continue;
        }
        LatticeVector y = box.lo();
        size_t idx = 0;
        do {
            t.pairs[{x, y}] = GreenEntry{col[idx], 1e-10};
            ++idx;
        } while (box.next_site(y));
    }
    if (kind == GreenKind::bar_GN) {
        std::map<LatticeVector, std::vector<double>> cols;
        for (const LatticeVector& x : probes) cols[x] = fv.killed_column(x);
        for (const auto& [x, cx] : cols)
            for (const auto& [y, cy] : cols) {
                double s = 0;
                for (size_t i = 0; i < cx.size(); ++i) s += cx[i] * cy[i];
                t.pairs[{x, y}] = GreenEntry{s, 1e-10};
            }
    }
    return t;
}

}  // namespace

GreenTable green_dirichlet_GN(int N, int d, const std::vector<LatticeVector>& probes) {
    return column_table(GreenKind::dirichlet_GN, N, d, probes);
}

GreenTable killed_green_gN(int N, int d, const std::vector<LatticeVector>& probes) {
    return column_table(GreenKind::killed_gN, N, d, probes);
}

GreenTable bar_GN(int N, int d, const std::vector<LatticeVector>& probes) {
    return column_table(GreenKind::bar_GN, N, d, probes);
}

}  // namespace membrane
