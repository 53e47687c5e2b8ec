#include "weylkit/lattice.hpp"

#include <cmath>
#include <limits>

namespace weylkit {

// --- LatticeSpec ---------------------------------------------------------------

LatticeSpec LatticeSpec::one_over_n(int n) {
    LatticeSpec s;
    s.rule = LatticeRule::OneOverN;
    s.truncation = n;
    s.validate();
    return s;
}

LatticeSpec LatticeSpec::constant(double h, int n) {
    LatticeSpec s;
    s.rule = LatticeRule::Constant;
    s.constant_h = h;
    s.truncation = n;
    s.validate();
    return s;
}

LatticeSpec LatticeSpec::geometric(double r, int n, double coeff) {
    LatticeSpec s;
    s.rule = LatticeRule::Geometric;
    s.ratio = r;
    s.coeff = coeff;
    s.truncation = n;
    s.validate();
    return s;
}

LatticeSpec LatticeSpec::power_law(double p, int n, double coeff) {
    LatticeSpec s;
    s.rule = LatticeRule::Power;
    s.power = p;
    s.coeff = coeff;
    s.truncation = n;
    s.validate();
    return s;
}

LatticeSpec LatticeSpec::explicit_list(std::vector<double> d) {
    LatticeSpec s;
    s.rule = LatticeRule::Explicit;
    s.truncation = static_cast<int>(d.size());
    s.explicit_d = std::move(d);
    s.validate();
    return s;
}

void LatticeSpec::validate() const {
    if (truncation < 1) fail(ErrorKind::InputError, "lattice: N >= 1 required");
    switch (rule) {
        case LatticeRule::Explicit:
            if (explicit_d.size() != size_t(truncation))
                fail(ErrorKind::LengthMismatch, "lattice: explicit list length != N");
            for (double v : explicit_d)
                if (!(v > 0)) fail(ErrorKind::InputError, "lattice: all d_n must be positive");
            break;
        case LatticeRule::Constant:
            if (!(constant_h > 0)) fail(ErrorKind::InputError, "lattice: h > 0 required");
            break;
        case LatticeRule::Geometric:
            if (!(ratio > 0) || !(coeff > 0)) fail(ErrorKind::InputError, "lattice: r, coeff > 0 required");
            break;
        case LatticeRule::Power:
            if (!(power > 0) || !(coeff > 0))
                fail(ErrorKind::InputError, "lattice: power rule requires p > 0, coeff > 0");
            break;
        case LatticeRule::OneOverN:
            break;
    }
}

double LatticeSpec::d(int n) const {
    switch (rule) {
        case LatticeRule::Explicit: return explicit_d[n - 1];
        case LatticeRule::OneOverN: return 1.0 / n;
        case LatticeRule::Constant: return constant_h;
        case LatticeRule::Geometric: return coeff * std::pow(ratio, n);
        case LatticeRule::Power: return coeff * std::pow(double(n), -power);
    }
    fail(ErrorKind::InputError, "lattice: unknown rule");
}

std::vector<double> LatticeSpec::lengths() const {
    std::vector<double> out(truncation);
    for (int n = 1; n <= truncation; ++n) out[n - 1] = d(n);
    return out;
}

double LatticeSpec::total_length() const {
    double sum = 0;
    for (int n = 1; n <= truncation; ++n) sum += d(n);
    return sum;
}

double LatticeSpec::d_star() const {
    switch (rule) {
        case LatticeRule::Explicit: {
            double m = explicit_d[0];
            for (double v : explicit_d) m = std::min(m, v);
            return m;
        }
        case LatticeRule::OneOverN:
        case LatticeRule::Power: return 0;
        case LatticeRule::Constant: return constant_h;
        case LatticeRule::Geometric: return ratio < 1 ? 0 : coeff * ratio;
    }
    return 0;
}

double LatticeSpec::d_sup() const {
    switch (rule) {
        case LatticeRule::Explicit: {
            double m = explicit_d[0];
            for (double v : explicit_d) m = std::max(m, v);
            return m;
        }
        case LatticeRule::OneOverN: return 1;
        case LatticeRule::Power: return coeff;
        case LatticeRule::Constant: return constant_h;
        case LatticeRule::Geometric:
            return ratio <= 1 ? coeff * ratio : std::numeric_limits<double>::infinity();
    }
    return 0;
}

bool LatticeSpec::accumulates_at_zero() const { return is_rule() && d_star() == 0; }
bool LatticeSpec::grows_unbounded() const { return is_rule() && std::isinf(d_sup()); }

// --- block evaluators ------------------------------------------------------------

namespace {

Matrix ones2() {
    Matrix k(2, 2);
    k << 1, 1, 1, 1;
    return k;
}

Matrix flip2() {
    Matrix q(2, 2);
    q << 0, 1, 1, 0;
    return q;
}

double dtilde(double d) { return std::min(1.0, d); }

/// Transposed block -M(z)^{-1} in pole-safe closed form.
Matrix transposed_block(const ModelKind& model, double d, Complex z) {
    switch (model.model) {
        case Model::Momentum: {
            const Complex w = z * d / 2.0;
            Matrix m(1, 1);
            if (std::abs(w.imag()) > kTrigOverflowGuard) {
                m(0, 0) = w.imag() > 0 ? Complex(0, 1) : Complex(0, -1);
                return m;
            }
            if (std::abs(std::cos(w)) < 1e-8 * (1 + std::abs(std::sin(w))))
                fail(ErrorKind::PoleProximity, "transposed momentum block pole");
            m(0, 0) = std::sin(w) / std::cos(w);
            return m;
        }
        case Model::Schroedinger: {
            // -sqrt(z) [[cot w, csc w],[csc w, cot w]] = -(1/(d sinc w)) [[cos w, 1],[1, cos w]]
            const Complex w = std::sqrt(z) * d;
            Matrix m(2, 2);
            if (std::abs(w.imag()) > kTrigOverflowGuard) {
                m(0, 0) = m(1, 1) = -(w / d) * cot_c(w);
                m(0, 1) = m(1, 0) = 0;
                return m;
            }
            if (std::abs(w) > 1e-4 && std::abs(std::sin(w)) < 1e-8 * (1 + std::abs(std::cos(w))))
                fail(ErrorKind::PoleProximity, "transposed Schroedinger block pole");
            const Complex s = sinc_c(w);
            m(0, 0) = m(1, 1) = -std::cos(w) / (d * s);
            m(0, 1) = m(1, 0) = -1.0 / (d * s);
            return m;
        }
        case Model::Dirac: {
            // det M = -1, so -M^{-1} = [[m22, -m12],[-m12, m11]]
            const Matrix m = weyl_block(model, d, z);
            Matrix out(2, 2);
            out << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
            return out;
        }
    }
    fail(ErrorKind::InputError, "transposed_block: unknown model");
}

/// Regularized Schroedinger block M^r = -dt^{-1} M^{-1} + dt^{-2} [[1,1],[1,1]],
/// evaluated with a series for small |w| to avoid the 1/d^2 cancellation.
Matrix schroedinger_regularized_block(double d, Complex z) {
    const double dt = dtilde(d);
    const Complex w = std::sqrt(z) * dt; // note: dt = d whenever the cancellation matters
    Matrix m(2, 2);
    if (d <= 1 && std::abs(w) < 0.1) {
        // w cot w   = 1 - w^2/3 - w^4/45 - 2 w^6/945 + O(w^8)
        // w csc w   = 1 + w^2/6 + 7 w^4/360 + 31 w^6/15120 + O(w^8)
        const Complex w2 = w * w;
        const double d2 = dt * dt;
        const Complex diag = (w2 / 3.0 + w2 * w2 / 45.0 + 2.0 * w2 * w2 * w2 / 945.0) / d2;
        const Complex off = (-w2 / 6.0 - 7.0 * w2 * w2 / 360.0 - 31.0 * w2 * w2 * w2 / 15120.0) / d2;
        m << diag, off, off, diag;
        return m;
    }
    const Matrix mt = transposed_block(ModelKind::schroedinger(), d, z); // -M^{-1} at length d
    // rescale: M^r = dt^{-1} (-M(d)^{-1}) ... but M depends on d only through w = sqrt(z) d,
    // and dt != d only for d > 1 where dt = 1:
    const double s = 1.0 / dt;
    return s * mt + (s * s) * ones2();
}

/// u cot(u), entire at 0, with +-i saturation for large |Im u|.
Complex ucot(Complex u) {
    if (std::abs(u) < 1e-4) {
        const Complex u2 = u * u;
        return 1.0 - u2 / 3.0 - u2 * u2 / 45.0;
    }
    if (std::abs(u.imag()) > kTrigOverflowGuard)
        return u * (u.imag() > 0 ? Complex(0, -1) : Complex(0, 1));
    if (std::abs(std::sin(u)) < 1e-8 * (1 + std::abs(std::cos(u))))
        fail(ErrorKind::PoleProximity, "cot pole");
    return u * std::cos(u) / std::sin(u);
}

/// Dirac tilde block (flip - M)^{-1} in pole-safe closed form:
///   diag entries -u cot(u) / (d (z -+ c^2/2)) with u = d k/2, off-diagonal 1/2.
Matrix dirac_tilde_block(const ModelKind& model, double d, Complex z) {
    const double c = model.c;
    if (std::abs(z - c * c / 2) < 1e-10 || std::abs(z + c * c / 2) < 1e-10)
        fail(ErrorKind::PoleProximity, "Dirac tilde block pole at z = +-c^2/2");
    const DiracKinematics kin = DiracKinematics::at(c, z);
    const Complex u = d * kin.k / 2.0;
    const Complex uc = ucot(u);
    Matrix m(2, 2);
    m(0, 0) = -uc / (d * (z - c * c / 2));
    m(1, 1) = -c * c * uc / (d * (z + c * c / 2));
    m(0, 1) = m(1, 0) = 0.5;
    return m;
}

} // namespace

BlockEvaluator make_evaluator(const ModelKind& model, RenormScheme scheme, bool transposed) {
    switch (scheme) {
        case RenormScheme::None:
            break;
        case RenormScheme::DiagSqrt:
            if (model.model == Model::Dirac)
                fail(ErrorKind::SchemeMismatch, "DiagSqrt applies to momentum and Schroedinger");
            break;
        case RenormScheme::SchrodingerRegularized:
            if (model.model != Model::Schroedinger)
                fail(ErrorKind::SchemeMismatch, "SchrodingerRegularized applies to Schroedinger only");
            break;
        case RenormScheme::DiracTilde:
            if (model.model != Model::Dirac)
                fail(ErrorKind::SchemeMismatch, "DiracTilde applies to Dirac only");
            break;
    }
    return BlockEvaluator{model, scheme, transposed};
}

Matrix BlockEvaluator::operator()(double d, Complex z) const {
    Matrix base;
    switch (scheme) {
        case RenormScheme::None:
            base = transposed ? transposed_block(model, d, z) : weyl_block(model, d, z);
            return base;
        case RenormScheme::DiagSqrt:
            base = transposed ? transposed_block(model, d, z) : weyl_block(model, d, z);
            return transposed ? Matrix(base / dtilde(d)) : Matrix(dtilde(d) * base);
        case RenormScheme::SchrodingerRegularized:
            base = schroedinger_regularized_block(d, z);
            break;
        case RenormScheme::DiracTilde:
            base = dirac_tilde_block(model, d, z);
            break;
    }
    if (transposed) {
        if (smallest_singular_value(base) < 1e-12 * std::max(1.0, operator_norm(base)))
            fail(ErrorKind::PoleProximity, "transposed block: M(z) singular");
        return -base.partialPivLu().inverse();
    }
    return base;
}

// --- BlockDiagonal ---------------------------------------------------------------

int BlockDiagonal::dimension() const {
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.rows());
    return n;
}

Matrix BlockDiagonal::dense() const {
    const int n = dimension();
    Matrix out = Matrix::Zero(n, n);
    int at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += static_cast<int>(b.rows());
    }
    return out;
}

double BlockDiagonal::norm() const {
    double v = 0;
    for (const auto& b : blocks) v = std::max(v, operator_norm(b));
    return v;
}

bool BlockDiagonal::psd(Tolerance tol) const {
    for (const auto& b : blocks)
        if (!psd_check(b, tol)) return false;
    return true;
}

BlockDiagonal BlockDiagonal::adjoint() const {
    BlockDiagonal out;
    out.blocks.reserve(blocks.size());
    for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
    return out;
}

BlockDiagonal direct_sum_weyl(const BlockEvaluator& eval, const LatticeSpec& lattice, Complex z) {
    BlockDiagonal out;
    out.blocks.reserve(lattice.truncation);
    for (int n = 1; n <= lattice.truncation; ++n) {
        try {
            out.blocks.push_back(eval(lattice.d(n), z));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::PoleProximity)
                fail(ErrorKind::PoleProximity, "block " + std::to_string(n) + ": " + e.what());
            throw;
        }
    }
    return out;
}

// --- classification ----------------------------------------------------------------

const char* to_string(TripleVerdict v) {
    switch (v) {
        case TripleVerdict::Ordinary: return "ordinary";
        case TripleVerdict::BGeneralized: return "B-generalized";
        case TripleVerdict::SGeneralized: return "S-generalized";
        case TripleVerdict::ESGeneralizedOnly: return "ES-generalized-only";
    }
    return "?";
}

namespace {

enum class Endpoint { Zero, Infinity };

/// Closed-form limit of the block matrix as d -> endpoint; nullopt = divergent.
std::optional<Matrix> block_limit(const BlockEvaluator& ev, Endpoint ep, Complex z) {
    const ModelKind& mk = ev.model;
    const Complex i(0, 1);
    const double sgn = z.imag() > 0 ? 1.0 : -1.0;
    switch (mk.model) {
        case Model::Momentum: {
            Matrix m(1, 1);
            if (ev.scheme == RenormScheme::DiagSqrt) {
                if (ev.transposed) {
                    // -(dt M)^{-1} = tan(zd/2)/dt ~ z d/(2 dt)
                    m(0, 0) = ep == Endpoint::Zero ? z / 2.0 : sgn * i;
                } else {
                    m(0, 0) = ep == Endpoint::Zero ? -2.0 / z : sgn * i;
                }
                return m;
            }
            if (ev.transposed) {
                m(0, 0) = ep == Endpoint::Zero ? Complex(0, 0) : sgn * i;
                return m;
            }
            if (ep == Endpoint::Zero) return std::nullopt; // -cot(zd/2) ~ -2/(zd)
            m(0, 0) = sgn * i;
            return m;
        }
        case Model::Schroedinger: {
            const Complex sz = std::sqrt(z);
            const Matrix I2 = Matrix::Identity(2, 2);
            Matrix k(2, 2);
            k << 1, -1, -1, 1;
            Matrix r(2, 2);
            r << 1.0 / 3, -1.0 / 6, -1.0 / 6, 1.0 / 3;
            switch (ev.scheme) {
                case RenormScheme::None:
                    if (ep == Endpoint::Zero) return std::nullopt; // both M and -M^{-1} diverge
                    return Matrix(ev.transposed ? i * sz * I2 : (i / sz) * I2);
                case RenormScheme::DiagSqrt:
                    if (ev.transposed) {
                        if (ep == Endpoint::Zero) return std::nullopt; // -(dt M)^{-1} = -M^{-1}/dt
                        return Matrix(i * sz * I2);
                    }
                    return ep == Endpoint::Zero ? Matrix((-1.0 / z) * k) : Matrix((i / sz) * I2);
                case RenormScheme::SchrodingerRegularized: {
                    Matrix lim0 = z * r;
                    Matrix liminf = i * sz * I2 + ones2();
                    Matrix lim = ep == Endpoint::Zero ? lim0 : liminf;
                    if (!ev.transposed) return lim;
                    if (smallest_singular_value(lim) < 1e-12) return std::nullopt;
                    return Matrix(-lim.partialPivLu().inverse());
                }
                default: break;
            }
            return std::nullopt;
        }
        case Model::Dirac: {
            const double c = mk.c;
            const DiracKinematics kin = DiracKinematics::at(c, z);
            Matrix q = flip2();
            Matrix minf(2, 2);
            minf << sgn * i * c * kin.k1, 0, 0, sgn * i / (c * kin.k1);
            switch (ev.scheme) {
                case RenormScheme::None: {
                    Matrix lim = ep == Endpoint::Zero ? q : minf;
                    if (!ev.transposed) return lim;
                    Matrix out(2, 2); // det M = -1: -M^{-1} = [[m22,-m12],[-m12,m11]]
                    out << lim(1, 1), -lim(0, 1), -lim(1, 0), lim(0, 0);
                    return out;
                }
                case RenormScheme::DiracTilde: {
                    if (ep == Endpoint::Zero) {
                        if (!ev.transposed) return std::nullopt;
                        // -Mtilde^{-1} = M - Q ~ d diag(z - c^2/2, (z + c^2/2)/c^2) -> 0
                        return Matrix(Matrix::Zero(2, 2));
                    }
                    Matrix den = q - minf;
                    Matrix lim = den.partialPivLu().inverse();
                    if (!ev.transposed) return lim;
                    Matrix out = -(q - minf); // -(Mtilde)^{-1} = -(Q - M)
                    return out;
                }
                default: break;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

struct LimitInfo {
    bool bounded = true;
    double value = 0;
};

enum class ConstKind { NormM, NormIm, NormImInv };

LimitInfo constant_limit(const BlockEvaluator& ev, Endpoint ep, Complex z, ConstKind kind) {
    const auto lim = block_limit(ev, ep, z);
    if (lim) {
        switch (kind) {
            case ConstKind::NormM: return {true, operator_norm(*lim)};
            case ConstKind::NormIm: return {true, operator_norm(imaginary_part(*lim))};
            case ConstKind::NormImInv: {
                const Matrix im = imaginary_part(*lim);
                const double smin = smallest_singular_value(im);
                if (smin < 1e-10 * std::max(1.0, operator_norm(im))) return {false, 0};
                return {true, 1.0 / smin};
            }
        }
    }
    // divergent block: the few cases where a constant still stays bounded
    if (kind == ConstKind::NormImInv) {
        if (ev.model.model == Model::Momentum && ev.scheme == RenormScheme::None &&
            !ev.transposed && ep == Endpoint::Zero)
            return {true, 0}; // (Im M(i))^{-1} = tanh(d/2) -> 0
        if (ev.model.model == Model::Dirac && ev.scheme == RenormScheme::DiracTilde &&
            !ev.transposed && ep == Endpoint::Zero)
            return {true, 0}; // Im Mtilde ~ D/d with D nonsingular
    }
    return {false, 0};
}

std::vector<Endpoint> active_endpoints(const LatticeSpec& lat) {
    std::vector<Endpoint> eps;
    if (lat.accumulates_at_zero()) eps.push_back(Endpoint::Zero);
    if (lat.grows_unbounded()) eps.push_back(Endpoint::Infinity);
    return eps;
}

void finish_constant(ConstantReport& r, const LatticeSpec& lat) {
    r.truncation_sup = 0;
    for (double v : r.curve) r.truncation_sup = std::max(r.truncation_sup, v);
    const size_t n = r.curve.size();
    if (n >= 10) {
        double head = 0, tail = 0;
        for (size_t i = 0; i < n / 10 + 1; ++i) head = std::max(head, r.curve[i]);
        for (size_t i = n - n / 10 - 1; i < n; ++i) tail = std::max(tail, r.curve[i]);
        r.increasing_trend = tail > 1.5 * head && tail > 0.9 * r.truncation_sup;
    }
    (void)lat;
}

ConstantReport make_constant(const std::string& name, std::vector<double> curve,
                             const LatticeSpec& lat, const BlockEvaluator& ev, Complex z,
                             std::optional<ConstKind> kind) {
    ConstantReport r;
    r.name = name;
    r.curve = std::move(curve);
    finish_constant(r, lat);
    if (lat.is_rule() && kind) {
        bool bounded = true;
        double lv = 0;
        for (Endpoint ep : active_endpoints(lat)) {
            const LimitInfo li = constant_limit(ev, ep, z, *kind);
            bounded = bounded && li.bounded;
            lv = std::max(lv, li.value);
        }
        r.limit_bounded = bounded;
        r.limit_value = lv;
    }
    return r;
}

} // namespace

ClassificationReport classify(const ModelKind& model, const LatticeSpec& lattice,
                              std::optional<double> gap_point, bool transposed,
                              RenormScheme scheme) {
    lattice.validate();
    const BlockEvaluator ev = make_evaluator(model, scheme, transposed);
    const Complex zi(0, 1);
    if (gap_point) {
        if (model.model == Model::Momentum)
            fail(ErrorKind::NoCommonGap, "momentum blocks have no common spectral gap");
        if (!gap_contains(model, *gap_point))
            fail(ErrorKind::GapViolation, "gap point outside the declared common gap");
    }

    const int n_blocks = lattice.truncation;
    std::vector<double> cm, cimi, cim, c3, c4, c5;
    cm.reserve(n_blocks);
    cimi.reserve(n_blocks);
    cim.reserve(n_blocks);
    for (int n = 1; n <= n_blocks; ++n) {
        const double d = lattice.d(n);
        const Matrix m = ev(d, zi);
        const Matrix im = imaginary_part(m);
        cm.push_back(operator_norm(m));
        cim.push_back(operator_norm(im));
        const double smin = smallest_singular_value(im);
        cimi.push_back(smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity());
        if (gap_point && scheme == RenormScheme::None && !transposed) {
            const Matrix ma = weyl_block(model, d, Complex(*gap_point, 0));
            const Matrix dma = weyl_block_derivative(model, d, *gap_point);
            c3.push_back(operator_norm(ma));
            c4.push_back(operator_norm(dma));
            const double dsmin = smallest_singular_value(dma);
            c5.push_back(dsmin > 0 ? 1.0 / dsmin : std::numeric_limits<double>::infinity());
        }
    }

    ClassificationReport rep;
    rep.truncation = n_blocks;
    rep.c1 = make_constant("C1 = sup ||M_n(i)||", std::move(cm), lattice, ev, zi, ConstKind::NormM);
    rep.c2 = make_constant("C2 = sup ||(Im M_n(i))^{-1}||", std::move(cimi), lattice, ev, zi,
                           ConstKind::NormImInv);
    rep.c_im = make_constant("C_Im = sup ||Im M_n(i)||", std::move(cim), lattice, ev, zi,
                             ConstKind::NormIm);
    if (!c3.empty()) {
        // gap-point curves are reported as truncation data (no limit table)
        rep.c3 = make_constant("C3 = sup ||M_n(a)||", std::move(c3), lattice, ev, zi, std::nullopt);
        rep.c4 = make_constant("C4 = sup ||M_n'(a)||", std::move(c4), lattice, ev, zi, std::nullopt);
        rep.c5 = make_constant("C5 = sup ||(M_n'(a))^{-1}||", std::move(c5), lattice, ev, zi,
                               std::nullopt);
    }

    if (lattice.is_rule()) {
        rep.verdict_from_limits = true;
        const bool b1 = rep.c1.limit_bounded.value_or(true);
        const bool b2 = rep.c2.limit_bounded.value_or(true);
        const bool bim = rep.c_im.limit_bounded.value_or(true);
        if (b1 && b2) rep.verdict = TripleVerdict::Ordinary;
        else if (b1) rep.verdict = TripleVerdict::BGeneralized;
        else if (bim) rep.verdict = TripleVerdict::SGeneralized;
        else rep.verdict = TripleVerdict::ESGeneralizedOnly;
    } else {
        // finite direct sums of ordinary triples are ordinary at truncation;
        // the trend flags carry the divergence diagnostics
        rep.verdict_from_limits = false;
        rep.verdict = TripleVerdict::Ordinary;
    }
    return rep;
}

// --- membership -------------------------------------------------------------------

WeightedSequence WeightedSequence::power_pairs(int n, double aa, double pa, double ab, double pb) {
    WeightedSequence s;
    s.has_rule = true;
    s.amp_a = aa;
    s.pow_a = pa;
    s.amp_b = ab;
    s.pow_b = pb;
    s.entries.resize(n);
    for (int k = 1; k <= n; ++k) {
        Vector v(2);
        v << aa * std::pow(double(k), -pa), ab * std::pow(double(k), -pb);
        s.entries[k - 1] = v;
    }
    return s;
}

WeightedSequence WeightedSequence::power_scalars(int n, double amp, double p) {
    WeightedSequence s;
    s.has_rule = true;
    s.amp_a = amp;
    s.pow_a = p;
    s.entries.resize(n);
    for (int k = 1; k <= n; ++k) {
        Vector v(1);
        v << amp * std::pow(double(k), -p);
        s.entries[k - 1] = v;
    }
    return s;
}

namespace {

enum class Reduce { First, Difference, Sum, PairNorm };

struct MembershipLaw {
    Reduce reduce;
    int weight_exponent; // w_n = d_n^{-q}
};

MembershipLaw membership_law(const ModelKind& model, const LatticeSpec& lat, MembershipKind kind) {
    switch (model.model) {
        case Model::Momentum:
            switch (kind) {
                case MembershipKind::DomM: return {Reduce::First, 2};
                case MembershipKind::RanGamma0: return {Reduce::First, 1};
                case MembershipKind::FormDomain: return {Reduce::First, 1};
                // -M^{-1}(z) = tan(z d/2) stays bounded: plain l2
                case MembershipKind::DomMTransposed: return {Reduce::First, 0};
                case MembershipKind::FormDomainTransposed: return {Reduce::First, 0};
            }
            break;
        case Model::Schroedinger:
            switch (kind) {
                case MembershipKind::DomM: return {Reduce::Difference, 2};
                case MembershipKind::RanGamma0:
                    if (lat.grows_unbounded())
                        fail(ErrorKind::DomainViolation,
                             "Schroedinger ran Gamma_0 membership requires d^* < infinity");
                    return {Reduce::Difference, 1};
                case MembershipKind::FormDomain: return {Reduce::Difference, 1};
                case MembershipKind::DomMTransposed: return {Reduce::Sum, 2};
                case MembershipKind::FormDomainTransposed: return {Reduce::Sum, 1};
            }
            break;
        case Model::Dirac:
            // membership refers to the renormalized (tilde) Dirac triple
            switch (kind) {
                case MembershipKind::DomM: return {Reduce::PairNorm, 2};
                case MembershipKind::RanGamma0: return {Reduce::PairNorm, 1};
                case MembershipKind::FormDomain: return {Reduce::PairNorm, 1};
                // -Mtilde^{-1} is a bounded family: plain l2
                case MembershipKind::DomMTransposed: return {Reduce::PairNorm, 0};
                case MembershipKind::FormDomainTransposed: return {Reduce::PairNorm, 0};
            }
            break;
    }
    fail(ErrorKind::InputError, "membership: unknown model/kind");
}

double reduced_mag2(Reduce r, const Vector& v) {
    switch (r) {
        case Reduce::First: return std::norm(v(0));
        case Reduce::Difference: return std::norm(v(0) - v(1));
        case Reduce::Sum: return std::norm(v(0) + v(1));
        case Reduce::PairNorm: return v.squaredNorm();
    }
    return 0;
}

/// Reduced power rule |s_n| ~ amp n^{-p} from the component rules.
void reduced_rule(Reduce r, const WeightedSequence& s, double& amp, double& p) {
    switch (r) {
        case Reduce::First:
            amp = std::abs(s.amp_a);
            p = s.pow_a;
            return;
        case Reduce::Difference:
        case Reduce::Sum: {
            const double sign = r == Reduce::Difference ? -1.0 : 1.0;
            if (s.pow_a == s.pow_b) {
                amp = std::abs(s.amp_a + sign * s.amp_b);
                p = s.pow_a;
            } else if (std::abs(s.amp_a) == 0) {
                amp = std::abs(s.amp_b);
                p = s.pow_b;
            } else if (std::abs(s.amp_b) == 0) {
                amp = std::abs(s.amp_a);
                p = s.pow_a;
            } else {
                p = std::min(s.pow_a, s.pow_b);
                amp = p == s.pow_a ? std::abs(s.amp_a) : std::abs(s.amp_b);
            }
            return;
        }
        case Reduce::PairNorm: {
            if (std::abs(s.amp_a) == 0) {
                amp = std::abs(s.amp_b);
                p = s.pow_b;
            } else if (std::abs(s.amp_b) == 0) {
                amp = std::abs(s.amp_a);
                p = s.pow_a;
            } else {
                p = std::min(s.pow_a, s.pow_b);
                amp = std::hypot(s.pow_a <= s.pow_b ? s.amp_a : 0.0,
                                 s.pow_b <= s.pow_a ? s.amp_b : 0.0);
            }
            return;
        }
    }
}

} // namespace

MembershipReport membership(const ModelKind& model, const LatticeSpec& lattice,
                            const WeightedSequence& seq, MembershipKind kind) {
    lattice.validate();
    if (seq.entries.size() != size_t(lattice.truncation))
        fail(ErrorKind::LengthMismatch, "membership: sequence length != lattice N");
    const int want = model.model == Model::Momentum ? 1 : 2;
    for (const auto& v : seq.entries)
        if (v.size() != want) fail(ErrorKind::LengthMismatch, "membership: entry size mismatch");

    const MembershipLaw law = membership_law(model, lattice, kind);
    MembershipReport rep;

    const int n = lattice.truncation;
    double sum = 0;
    std::vector<double> marks;
    for (int k = 1; k <= n; ++k) {
        const double w = std::pow(lattice.d(k), -law.weight_exponent);
        sum += w * reduced_mag2(law.reduce, seq.entries[k - 1]);
        if (k == n / 4 || k == n / 2 || k == (3 * n) / 4 || k == n) marks.push_back(sum);
    }
    rep.weighted_partial_sum = sum;
    rep.partial_sums = std::move(marks);
    if (rep.partial_sums.size() >= 2 && sum > 0) {
        const double prev = rep.partial_sums[rep.partial_sums.size() - 2];
        rep.growing = (sum - prev) > 0.02 * sum;
    }

    if (seq.has_rule && lattice.is_rule()) {
        // closed-form comparison test on t_n = w_n |s_n|^2 = C n^mu g^n
        double amp = 0, p = 0;
        reduced_rule(law.reduce, seq, amp, p);
        rep.analytic = true;
        if (amp == 0) {
            rep.in_set = true;
            return rep;
        }
        double mu = -2 * p;
        double g = 1;
        switch (lattice.rule) {
            case LatticeRule::OneOverN: mu += law.weight_exponent; break;
            case LatticeRule::Power: mu += law.weight_exponent * lattice.power; break;
            case LatticeRule::Constant: break;
            case LatticeRule::Geometric: g = std::pow(lattice.ratio, -law.weight_exponent); break;
            case LatticeRule::Explicit: break;
        }
        if (g < 1 - 1e-12) rep.in_set = true;
        else if (g > 1 + 1e-12) rep.in_set = false;
        else rep.in_set = mu < -1; // sum n^mu converges iff mu < -1 (mu = -1 diverges)
        return rep;
    }

    rep.analytic = false;
    rep.in_set = !rep.growing; // truncation-scope verdict
    return rep;
}

} // namespace weylkit
