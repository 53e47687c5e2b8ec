#include "weylkit/interval.hpp"

#include <cmath>

namespace weylkit {

namespace {

constexpr double kPoleWindow = 1e-8;

Complex sqrt_branch(Complex z, int branch) {
    return double(branch) * std::sqrt(z);
}

/// tan with +-i saturation for large |Im w|.
Complex tan_c(Complex w) {
    if (w.imag() > kTrigOverflowGuard) return Complex(0, 1);
    if (w.imag() < -kTrigOverflowGuard) return Complex(0, -1);
    return std::sin(w) / std::cos(w);
}

Complex sec_c(Complex w) {
    if (std::abs(w.imag()) > kTrigOverflowGuard) return Complex(0, 0);
    return Complex(1, 0) / std::cos(w);
}

} // namespace

ModelKind ModelKind::dirac(double c) {
    if (!(c > 0)) fail(ErrorKind::InputError, "Dirac model requires c > 0");
    return {Model::Dirac, c};
}

DiracKinematics DiracKinematics::at(double c, Complex z, int branch) {
    DiracKinematics kin;
    kin.k = sqrt_branch(z * z - std::pow(c * c / 2, 2), branch) / c;
    kin.k1 = c * kin.k / (z + c * c / 2);
    return kin;
}

bool gap_contains(const ModelKind& model, double a) {
    switch (model.model) {
        case Model::Momentum: return false;
        case Model::Schroedinger: return a < 0;
        case Model::Dirac: return std::abs(a) < model.c * model.c / 2;
    }
    return false;
}

bool near_block_pole(const ModelKind& model, double d, Complex z) {
    switch (model.model) {
        case Model::Momentum: {
            const Complex w = z * d / 2.0;
            if (std::abs(w.imag()) > kTrigOverflowGuard) return false;
            return std::abs(std::sin(w)) < kPoleWindow * (1 + std::abs(std::cos(w)));
        }
        case Model::Schroedinger: {
            const Complex w = std::sqrt(z) * d;
            if (std::abs(w.imag()) > kTrigOverflowGuard) return false;
            return std::abs(w * std::sin(w)) < kPoleWindow * (1 + std::abs(std::cos(w)));
        }
        case Model::Dirac: {
            const Complex w = d * DiracKinematics::at(model.c, z).k;
            if (std::abs(w.imag()) > kTrigOverflowGuard) return false;
            return std::abs(std::cos(w)) < kPoleWindow * (1 + std::abs(std::sin(w)));
        }
    }
    return false;
}

std::vector<double> block_pole_locations(const ModelKind& model, double d, double lo, double hi) {
    std::vector<double> poles;
    switch (model.model) {
        case Model::Momentum:
            // z d/2 = pi m
            for (long m = std::lround(std::ceil(lo * d / (2 * M_PI)));; ++m) {
                const double z = 2 * M_PI * m / d;
                if (z > hi) break;
                if (z >= lo) poles.push_back(z);
            }
            break;
        case Model::Schroedinger:
            // sqrt(z) d = pi m, m >= 0 (Neumann block spectrum)
            for (long m = 0;; ++m) {
                const double z = std::pow(M_PI * m / d, 2);
                if (z > hi) break;
                if (z >= lo) poles.push_back(z);
                if (m > 0 && z > hi) break;
            }
            break;
        case Model::Dirac: {
            // d k = pi (m + 1/2)  ->  z = +-sqrt(c^2 k^2 + c^4/4)
            const double c = model.c;
            for (long m = 0;; ++m) {
                const double k = M_PI * (m + 0.5) / d;
                const double z = std::sqrt(c * c * k * k + std::pow(c * c / 2, 2));
                if (z > hi && -z < lo) break;
                if (z >= lo && z <= hi) poles.push_back(z);
                if (-z >= lo && -z <= hi) poles.push_back(-z);
            }
            std::sort(poles.begin(), poles.end());
            break;
        }
    }
    return poles;
}

Matrix weyl_block(const ModelKind& model, double d, Complex z, int branch) {
    if (!(d > 0)) fail(ErrorKind::InputError, "weyl_block: d must be positive");
    switch (model.model) {
        case Model::Momentum: {
            Matrix m(1, 1);
            const Complex w = z * d / 2.0;
            if (std::abs(w.imag()) <= kTrigOverflowGuard &&
                std::abs(std::sin(w)) < kPoleWindow * (1 + std::abs(std::cos(w))))
                fail(ErrorKind::PoleProximity, "momentum block pole near z");
            m(0, 0) = -cot_c(w);
            return m;
        }
        case Model::Schroedinger: {
            const Complex w = sqrt_branch(z, branch) * d;
            Matrix m(2, 2);
            if (std::abs(w.imag()) > kTrigOverflowGuard) {
                // cot -> -i sgn(Im w), csc -> 0
                m(0, 0) = m(1, 1) = -(d / w) * cot_c(w);
                m(0, 1) = m(1, 0) = 0;
                return m;
            }
            const Complex wsin = w * std::sin(w);
            if (std::abs(wsin) < kPoleWindow * (1 + std::abs(std::cos(w))))
                fail(ErrorKind::PoleProximity, "Schroedinger block pole near z");
            m(0, 0) = m(1, 1) = -d * std::cos(w) / wsin;
            m(0, 1) = m(1, 0) = d / wsin;
            return m;
        }
        case Model::Dirac: {
            const double c = model.c;
            const DiracKinematics kin = DiracKinematics::at(c, z, branch);
            const Complex w = d * kin.k;
            Matrix m(2, 2);
            if (std::abs(w.imag()) > kTrigOverflowGuard) {
                const Complex t = tan_c(w);
                m(0, 0) = (z - c * c / 2) * (d / w) * t;
                m(1, 1) = (z + c * c / 2) * (d / w) * t / (c * c);
                m(0, 1) = m(1, 0) = 0;
                return m;
            }
            const Complex cosw = std::cos(w);
            if (std::abs(cosw) < kPoleWindow * (1 + std::abs(std::sin(w))))
                fail(ErrorKind::PoleProximity, "Dirac block pole near z");
            const Complex dsinc = d * sinc_c(w);
            m(0, 0) = (z - c * c / 2) * dsinc / cosw;
            m(0, 1) = m(1, 0) = 1.0 / cosw;
            m(1, 1) = (z + c * c / 2) * dsinc / (c * c * cosw);
            return m;
        }
    }
    fail(ErrorKind::InputError, "weyl_block: unknown model");
}

Matrix weyl_block_derivative(const ModelKind& model, double d, double a) {
    if (model.model == Model::Momentum)
        fail(ErrorKind::NoCommonGap, "momentum blocks have no common spectral gap");
    if (!gap_contains(model, a))
        fail(ErrorKind::GapViolation, "a outside the model gap");
    const Complex z(a, 0);
    switch (model.model) {
        case Model::Schroedinger: {
            // M11 = -z^{-1/2} cot(w), M12 = z^{-1/2} csc(w), w = sqrt(z) d
            const Complex sz = std::sqrt(z);
            const Complex w = sz * d;
            const Complex cotw = cot_c(w);
            const Complex cscw = csc_c(w);
            const Complex z32 = z * sz;
            Matrix m(2, 2);
            m(0, 0) = m(1, 1) = 0.5 * cotw / z32 + (d / (2.0 * z)) * (1.0 + cotw * cotw);
            m(0, 1) = m(1, 0) = -0.5 * cscw / z32 - (d / (2.0 * z)) * cotw * cscw;
            return m;
        }
        case Model::Dirac: {
            const double c = model.c;
            const DiracKinematics kin = DiracKinematics::at(c, z);
            if (std::abs(kin.k) < 1e-10)
                fail(ErrorKind::PoleProximity, "Dirac derivative: k(a) ~ 0 at the gap edge");
            const Complex w = d * kin.k;
            const Complex kp = z / (c * c * kin.k);
            const Complex zp = z + c * c / 2;
            const Complex k1p = c * (kp * zp - kin.k) / (zp * zp);
            const Complex t = tan_c(w);
            const Complex sec2 = 1.0 + t * t;
            const Complex ck1 = c * kin.k1;
            Matrix m(2, 2);
            m(0, 0) = c * k1p * t + ck1 * d * kp * sec2;
            m(0, 1) = m(1, 0) = d * kp * sec_c(w) * t;
            m(1, 1) = (d * kp * sec2 * ck1 - t * c * k1p) / (ck1 * ck1);
            return m;
        }
        default: break;
    }
    fail(ErrorKind::InputError, "weyl_block_derivative: unknown model");
}

// --- ExpPoly -------------------------------------------------------------------

Complex ExpPoly::eval(double x) const {
    Complex v = 0;
    for (const auto& t : terms_) v += t.coeff * std::pow(x, t.power) * std::exp(t.exponent * x);
    return v;
}

ExpPoly ExpPoly::derivative() const {
    std::vector<ExpPolyTerm> out;
    out.reserve(2 * terms_.size());
    for (const auto& t : terms_) {
        if (t.exponent != Complex(0, 0)) out.push_back({t.coeff * t.exponent, t.power, t.exponent});
        if (t.power > 0) out.push_back({t.coeff * double(t.power), t.power - 1, t.exponent});
    }
    return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::conjugated() const {
    std::vector<ExpPolyTerm> out = terms_;
    for (auto& t : out) {
        t.coeff = std::conj(t.coeff);
        t.exponent = std::conj(t.exponent);
    }
    return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::operator*(const ExpPoly& rhs) const {
    std::vector<ExpPolyTerm> out;
    out.reserve(terms_.size() * rhs.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : rhs.terms_)
            out.push_back({a.coeff * b.coeff, a.power + b.power, a.exponent + b.exponent});
    return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::operator+(const ExpPoly& rhs) const {
    std::vector<ExpPolyTerm> out = terms_;
    out.insert(out.end(), rhs.terms_.begin(), rhs.terms_.end());
    return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::operator*(Complex s) const {
    std::vector<ExpPolyTerm> out = terms_;
    for (auto& t : out) t.coeff *= s;
    return ExpPoly(std::move(out));
}

namespace {

double pow_int(double x, int k) {
    double v = 1;
    for (int i = 0; i < k; ++i) v *= x;
    return v;
}

/// Exact integral of x^k e^{mu x} over [a, b].
Complex integrate_monomial_exp(int k, Complex mu, double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(mu) * scale < 0.5 && std::abs(mu) * std::max(1.0, scale) < 0.5) {
        // series: sum_j mu^j / j! * (b^{k+j+1} - a^{k+j+1})/(k+j+1)
        Complex sum = 0, muj = 1;
        double fact = 1;
        for (int j = 0; j < 40; ++j) {
            if (j > 0) {
                muj *= mu;
                fact *= j;
            }
            sum += muj / fact * (pow_int(b, k + j + 1) - pow_int(a, k + j + 1)) / double(k + j + 1);
        }
        return sum;
    }
    // recursion I_k = [x^k e^{mux}/mu] - (k/mu) I_{k-1}
    Complex ik = (std::exp(mu * b) - std::exp(mu * a)) / mu;
    for (int j = 1; j <= k; ++j)
        ik = (pow_int(b, j) * std::exp(mu * b) - pow_int(a, j) * std::exp(mu * a)) / mu -
             double(j) / mu * ik;
    return ik;
}

} // namespace

Complex integrate(const ExpPoly& f, double a, double b) {
    Complex v = 0;
    for (const auto& t : f.terms()) v += t.coeff * integrate_monomial_exp(t.power, t.exponent, a, b);
    return v;
}

Complex l2_inner(const IntervalFunction& f, const IntervalFunction& g) {
    if (f.comp.size() != g.comp.size() || f.length != g.length)
        fail(ErrorKind::DimensionMismatch, "l2_inner: mismatched interval functions");
    Complex v = 0;
    for (size_t i = 0; i < f.comp.size(); ++i)
        v += integrate(f.comp[i] * g.comp[i].conjugated(), 0, f.length);
    return v;
}

IntervalFunction apply_expression(const ModelKind& model, const IntervalFunction& f) {
    IntervalFunction out;
    out.length = f.length;
    switch (model.model) {
        case Model::Momentum:
            out.comp = {f.comp[0].derivative() * Complex(0, -1)};
            return out;
        case Model::Schroedinger:
            out.comp = {f.comp[0].derivative().derivative() * Complex(-1, 0)};
            return out;
        case Model::Dirac: {
            const double c = model.c;
            const Complex mic(0, -c);
            out.comp = {f.comp[0] * Complex(c * c / 2, 0) + f.comp[1].derivative() * mic,
                        f.comp[0].derivative() * mic + f.comp[1] * Complex(-c * c / 2, 0)};
            return out;
        }
    }
    fail(ErrorKind::InputError, "apply_expression: unknown model");
}

BoundaryMaps boundary_maps(const ModelKind& model, double d) {
    (void)d;
    BoundaryMaps bm;
    switch (model.model) {
        case Model::Momentum: {
            bm.trace_dim = 2;
            bm.trace_labels = {"f(a+)", "f(b-)"};
            bm.gamma0 = Matrix(1, 2);
            bm.gamma0 << Complex(0, -1 / std::sqrt(2.0)), Complex(0, 1 / std::sqrt(2.0));
            bm.gamma1 = Matrix(1, 2);
            bm.gamma1 << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
            bm.green_form = Matrix::Zero(2, 2);
            bm.green_form(0, 0) = Complex(0, 1);
            bm.green_form(1, 1) = Complex(0, -1);
            return bm;
        }
        case Model::Schroedinger: {
            bm.trace_dim = 4;
            bm.trace_labels = {"f(a+)", "f(b-)", "f'(a+)", "f'(b-)"};
            bm.gamma0 = Matrix::Zero(2, 4);
            bm.gamma0(0, 2) = 1;
            bm.gamma0(1, 3) = 1;
            bm.gamma1 = Matrix::Zero(2, 4);
            bm.gamma1(0, 0) = -1;
            bm.gamma1(1, 1) = 1;
            bm.green_form = Matrix::Zero(4, 4);
            bm.green_form(0, 2) = 1;
            bm.green_form(1, 3) = -1;
            bm.green_form(2, 0) = -1;
            bm.green_form(3, 1) = 1;
            return bm;
        }
        case Model::Dirac: {
            const Complex ic(0, model.c);
            bm.trace_dim = 4;
            bm.trace_labels = {"f1(a+)", "f2(a+)", "f1(b-)", "f2(b-)"};
            bm.gamma0 = Matrix::Zero(2, 4);
            bm.gamma0(0, 0) = 1;
            bm.gamma0(1, 3) = ic;
            bm.gamma1 = Matrix::Zero(2, 4);
            bm.gamma1(0, 1) = ic;
            bm.gamma1(1, 2) = 1;
            bm.green_form = Matrix::Zero(4, 4);
            bm.green_form(0, 1) = ic;
            bm.green_form(1, 0) = ic;
            bm.green_form(2, 3) = -ic;
            bm.green_form(3, 2) = -ic;
            return bm;
        }
    }
    fail(ErrorKind::InputError, "boundary_maps: unknown model");
}

Vector traces(const ModelKind& model, const IntervalFunction& f) {
    const double d = f.length;
    switch (model.model) {
        case Model::Momentum: {
            Vector t(2);
            t << f.comp[0].eval(0), f.comp[0].eval(d);
            return t;
        }
        case Model::Schroedinger: {
            const ExpPoly fp = f.comp[0].derivative();
            Vector t(4);
            t << f.comp[0].eval(0), f.comp[0].eval(d), fp.eval(0), fp.eval(d);
            return t;
        }
        case Model::Dirac: {
            Vector t(4);
            t << f.comp[0].eval(0), f.comp[1].eval(0), f.comp[0].eval(d), f.comp[1].eval(d);
            return t;
        }
    }
    fail(ErrorKind::InputError, "traces: unknown model");
}

FiniteTriple trace_triple(const ModelKind& model, double d) {
    const BoundaryMaps bm = boundary_maps(model, d);
    const int tau = bm.trace_dim;
    const int h = model.boundary_dim();
    Matrix span(tau + 2 * h, tau);
    span.topRows(tau) = Matrix::Identity(tau, tau);
    span.middleRows(tau, h) = bm.gamma0;
    span.bottomRows(h) = bm.gamma1;
    FiniteTriple t = FiniteTriple::from_graph(tau / 2, h, span);
    t.j_state = Complex(0, -1) * bm.green_form;
    return t;
}

DefectSolution defect_gamma(const ModelKind& model, double d, Complex z, const Vector& h) {
    if (h.size() != model.boundary_dim())
        fail(ErrorKind::DimensionMismatch, "defect_gamma: boundary vector size mismatch");
    DefectSolution out;
    out.f.length = d;
    switch (model.model) {
        case Model::Momentum: {
            const Complex q = std::exp(Complex(0, 1) * z * d);
            if (std::abs(q - 1.0) < 1e-10)
                fail(ErrorKind::PoleProximity, "defect_gamma: z is an A0 eigenvalue");
            const Complex a = Complex(0, -1) * std::sqrt(2.0) * h(0) / (q - 1.0);
            out.f.comp = {ExpPoly::exponential(a, Complex(0, 1) * z)};
            out.gamma1_data = Vector(1);
            out.gamma1_data(0) = a * (q + 1.0) / std::sqrt(2.0);
            return out;
        }
        case Model::Schroedinger: {
            const Complex sz = std::sqrt(z);
            const Complex w = sz * d;
            const Complex denom = z * d * sinc_c(w); // = sqrt(z) sin(w)
            if (std::abs(denom) < 1e-12 * (1 + std::abs(std::cos(w))))
                fail(ErrorKind::PoleProximity, "defect_gamma: z is an A0 eigenvalue");
            const Complex b = h(0);
            const Complex a = (h(1) - b * std::cos(w)) / (-denom);
            // cos(sz x) and sin(sz x)/sz in exponential form
            const Complex i(0, 1);
            ExpPoly cosp({{0.5, 0, i * sz}, {0.5, 0, -i * sz}});
            ExpPoly sinp = std::abs(sz) < 1e-8
                               ? ExpPoly({{1.0, 1, Complex(0, 0)}}) // ~ x as z -> 0
                               : ExpPoly({{0.5 / (i * sz), 0, i * sz}, {-0.5 / (i * sz), 0, -i * sz}});
            out.f.comp = {cosp * a + sinp * b};
            out.gamma1_data = Vector(2);
            out.gamma1_data(0) = -a;
            out.gamma1_data(1) = a * std::cos(w) + b * d * sinc_c(w);
            return out;
        }
        case Model::Dirac: {
            const double c = model.c;
            const DiracKinematics kin = DiracKinematics::at(c, z);
            if (std::abs(kin.k) < 1e-10 || std::abs(kin.k1) < 1e-10)
                fail(ErrorKind::PoleProximity, "defect_gamma: degenerate kinematics near the gap edge");
            const Complex i(0, 1);
            const Complex ep = std::exp(i * kin.k * d);
            const Complex em = std::exp(-i * kin.k * d);
            Matrix sys(2, 2);
            sys << 1, 1, i * c * kin.k1 * ep, -i * c * kin.k1 * em;
            if (smallest_singular_value(sys) < 1e-12 * operator_norm(sys))
                fail(ErrorKind::PoleProximity, "defect_gamma: z is an A0 eigenvalue");
            const Vector ab = sys.partialPivLu().solve(h);
            const Complex a = ab(0), b = ab(1);
            out.f.comp = {ExpPoly({{a, 0, i * kin.k}, {b, 0, -i * kin.k}}),
                          ExpPoly({{a * kin.k1, 0, i * kin.k}, {-b * kin.k1, 0, -i * kin.k}})};
            out.gamma1_data = Vector(2);
            out.gamma1_data(0) = i * c * kin.k1 * (a - b);
            out.gamma1_data(1) = a * ep + b * em;
            return out;
        }
    }
    fail(ErrorKind::InputError, "defect_gamma: unknown model");
}

} // namespace weylkit
