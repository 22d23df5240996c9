#include "funnel/flow/vector_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace funnel::flow {

double radial_profile(double r)
{
    if (r <= 0.5) {
        return 1.0;
    }
    if (r >= 1.0) {
        return 0.0;
    }
    const double s = 2.0 * r - 1.0;
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double radial_profile_derivative(double r)
{
    if (r <= 0.5 || r >= 1.0) {
        return 0.0;
    }
    const double s = 2.0 * r - 1.0;
    return -2.0 * 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

double excursion_bound(double speed, double lipschitz, double t)
{
    t = std::abs(t);
    if (lipschitz * t < 1e-12) {
        return speed * t * (1.0 + lipschitz * t);
    }
    return speed * std::expm1(lipschitz * t) / lipschitz;
}

namespace detail {

class FieldNode {
public:
    virtual ~FieldNode() = default;
    virtual int dim() const = 0;
    virtual Vec eval(const Vec& x) const = 0;
    virtual double lipschitz() const = 0;
    virtual double sup_bound(const Box& box) const = 0;
    virtual double growth_rate(const Vec& center, double radius, TimeDirection dir) const = 0;
    virtual double growth_rate(TimeDirection dir) const = 0;
    virtual std::optional<AffineMap> affine_flow(double t) const = 0;
    virtual std::string describe() const = 0;
};

}  // namespace detail

namespace {

constexpr double kSlack = 1e-12;

TimeDirection opposite(TimeDirection d)
{
    return d == TimeDirection::forward ? TimeDirection::backward : TimeDirection::forward;
}

Mat identity(int n) { return Mat::Identity(n, n); }

class ConstantField final : public detail::FieldNode {
public:
    explicit ConstantField(Vec c) : c_(std::move(c)) {}
    int dim() const override { return static_cast<int>(c_.size()); }
    Vec eval(const Vec&) const override { return c_; }
    double lipschitz() const override { return 0.0; }
    double sup_bound(const Box&) const override { return c_.norm() * (1.0 + kSlack); }
    double growth_rate(const Vec&, double, TimeDirection) const override { return 0.0; }
    double growth_rate(TimeDirection) const override { return 0.0; }
    std::optional<AffineMap> affine_flow(double t) const override { return AffineMap{identity(dim()), t * c_}; }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "constant(" << c_.transpose() << ")";
        return os.str();
    }

private:
    Vec c_;
};

class LinearField final : public detail::FieldNode {
public:
    explicit LinearField(Mat a) : a_(std::move(a))
    {
        if (a_.rows() != a_.cols() || a_.rows() == 0) {
            throw std::invalid_argument("linear field needs a square matrix");
        }
        const Eigen::MatrixXd dense = a_;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
        const double scale = dense.cwiseAbs().maxCoeff();
        norm_ = svd.singularValues()(0) * (1.0 + kSlack) + kSlack * scale;
        const Eigen::MatrixXd sym = 0.5 * (dense + dense.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
        rate_forward_ = eig.eigenvalues().maxCoeff() + kSlack * (1.0 + scale);
        rate_backward_ = -eig.eigenvalues().minCoeff() + kSlack * (1.0 + scale);
    }
    int dim() const override { return static_cast<int>(a_.rows()); }
    Vec eval(const Vec& x) const override { return a_ * x; }
    double lipschitz() const override { return norm_; }
    double sup_bound(const Box& box) const override { return norm_ * box.max_norm(); }
    double growth_rate(const Vec&, double, TimeDirection dir) const override { return growth_rate(dir); }
    double growth_rate(TimeDirection dir) const override
    {
        return dir == TimeDirection::forward ? rate_forward_ : rate_backward_;
    }
    std::optional<AffineMap> affine_flow(double t) const override
    {
        const Eigen::MatrixXd at = t * Eigen::MatrixXd(a_);
        Mat e = at.exp();
        return AffineMap{std::move(e), Vec::Zero(dim())};
    }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "linear([";
        for (Eigen::Index i = 0; i < a_.rows(); ++i) {
            os << (i ? "; " : "") << a_.row(i);
        }
        os << "])";
        return os.str();
    }

private:
    Mat a_;
    double norm_ = 0.0;
    double rate_forward_ = 0.0;
    double rate_backward_ = 0.0;
};

class RotationField final : public detail::FieldNode {
public:
    explicit RotationField(double omega) : omega_(omega) {}
    int dim() const override { return 2; }
    Vec eval(const Vec& x) const override { return make_vec({-omega_ * x[1], omega_ * x[0]}); }
    double lipschitz() const override { return std::abs(omega_); }
    double sup_bound(const Box& box) const override { return std::abs(omega_) * box.max_norm() * (1.0 + kSlack); }
    // Skew-symmetric Jacobian: the flow is an isometry.
    double growth_rate(const Vec&, double, TimeDirection) const override { return 0.0; }
    double growth_rate(TimeDirection) const override { return 0.0; }
    std::optional<AffineMap> affine_flow(double t) const override
    {
        const double c = std::cos(omega_ * t);
        const double s = std::sin(omega_ * t);
        Mat r(2, 2);
        r << c, -s, s, c;
        return AffineMap{std::move(r), Vec::Zero(2)};
    }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "rotation(omega=" << omega_ << ")";
        return os.str();
    }

private:
    double omega_;
};

// Bin-wise upper bounds of the radial growth rates on [0, 1]. The symmetric
// Jacobian g I + g'(r) q q^T / r has eigenvalues g and g + g' r.
class RadialRateTable {
public:
    static constexpr int kBins = 4096;
    // |d/dr (g + g' r)| <= 2 sup|g'| + sup|g''| <= 7.5 + 23.1.
    static constexpr double kRateLipschitz = 31.0;

    static const RadialRateTable& instance()
    {
        static const RadialRateTable table;
        return table;
    }

    double sup(double r_lo, double r_hi, TimeDirection dir) const
    {
        const auto& bins = dir == TimeDirection::forward ? forward_ : backward_;
        double best = -INFINITY;
        if (r_hi >= 1.0) {
            best = 0.0;  // Dv = 0 beyond the unit sphere
        }
        r_lo = std::clamp(r_lo, 0.0, 1.0);
        r_hi = std::clamp(r_hi, 0.0, 1.0);
        const int k0 = std::min(kBins - 1, static_cast<int>(std::floor(r_lo * kBins)));
        const int k1 = std::min(kBins - 1, static_cast<int>(std::floor(r_hi * kBins)));
        for (int k = k0; k <= k1; ++k) {
            best = std::max(best, bins[static_cast<std::size_t>(k)]);
        }
        return best;
    }

private:
    RadialRateTable()
    {
        auto f_fwd = [](double r) {
            const double g = radial_profile(r);
            return std::max(g, g + radial_profile_derivative(r) * r);
        };
        auto f_bwd = [](double r) {
            const double g = radial_profile(r);
            return std::max(-g, -(g + radial_profile_derivative(r) * r));
        };
        const double pad = kRateLipschitz / (2.0 * kBins);
        for (int k = 0; k < kBins; ++k) {
            const double a = static_cast<double>(k) / kBins;
            const double b = static_cast<double>(k + 1) / kBins;
            forward_[static_cast<std::size_t>(k)] = std::max(f_fwd(a), f_fwd(b)) + pad;
            backward_[static_cast<std::size_t>(k)] = std::max(f_bwd(a), f_bwd(b)) + pad;
        }
    }

    std::array<double, kBins> forward_{};
    std::array<double, kBins> backward_{};
};

class RadialField final : public detail::FieldNode {
public:
    RadialField(int dim, bool extend) : dim_(dim), extend_(extend)
    {
        if (dim < 1 || dim > kMaxDim) {
            throw std::invalid_argument("radial field dimension out of range");
        }
    }
    int dim() const override { return dim_; }
    Vec eval(const Vec& x) const override
    {
        const double r = x.norm();
        if (r >= 1.0) {
            if (!extend_) {
                throw std::domain_error("radial field evaluated outside the unit disk");
            }
            return Vec::Zero(dim_);
        }
        return radial_profile(r) * x;
    }
    double lipschitz() const override { return kRadialProfileSup + kRadialProfileSlopeSup; }
    double sup_bound(const Box& box) const override { return std::min(box.max_norm(), 1.0) * kRadialProfileSup; }
    double growth_rate(const Vec& center, double radius, TimeDirection dir) const override
    {
        const double c = center.norm();
        return RadialRateTable::instance().sup(c - radius, c + radius, dir);
    }
    double growth_rate(TimeDirection dir) const override { return RadialRateTable::instance().sup(0.0, 2.0, dir); }
    std::optional<AffineMap> affine_flow(double) const override { return std::nullopt; }
    std::string describe() const override
    {
        return std::string("radial(g bump, ") + (extend_ ? "zero outside unit disk" : "undefined outside") + ")";
    }

private:
    int dim_;
    bool extend_;
};

class ShiftedField final : public detail::FieldNode {
public:
    ShiftedField(VectorField inner, Vec offset) : inner_(std::move(inner)), offset_(std::move(offset))
    {
        if (offset_.size() != inner_.dim()) {
            throw std::invalid_argument("shift offset dimension mismatch");
        }
    }
    int dim() const override { return inner_.dim(); }
    Vec eval(const Vec& x) const override { return inner_.eval(x - offset_); }
    double lipschitz() const override { return inner_.lipschitz(); }
    double sup_bound(const Box& box) const override
    {
        return inner_.sup_bound(Box(box.lo - offset_, box.hi - offset_));
    }
    double growth_rate(const Vec& center, double radius, TimeDirection dir) const override
    {
        return inner_.growth_rate(center - offset_, radius, dir);
    }
    double growth_rate(TimeDirection dir) const override { return inner_.growth_rate(dir); }
    std::optional<AffineMap> affine_flow(double t) const override
    {
        auto inner = inner_.affine_flow(t);
        if (!inner) {
            return std::nullopt;
        }
        // Φ_t(x) = Ψ_t(x - w) + w
        Vec offset = inner->offset + offset_ - inner->linear * offset_;
        return AffineMap{inner->linear, std::move(offset)};
    }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "shifted(" << inner_.describe() << ", by (" << offset_.transpose() << "))";
        return os.str();
    }

private:
    VectorField inner_;
    Vec offset_;
};

class ScaledField final : public detail::FieldNode {
public:
    ScaledField(VectorField inner, double factor) : inner_(std::move(inner)), factor_(factor) {}
    int dim() const override { return inner_.dim(); }
    Vec eval(const Vec& x) const override { return factor_ * inner_.eval(x); }
    double lipschitz() const override { return std::abs(factor_) * inner_.lipschitz(); }
    double sup_bound(const Box& box) const override { return std::abs(factor_) * inner_.sup_bound(box); }
    double growth_rate(const Vec& center, double radius, TimeDirection dir) const override
    {
        return std::abs(factor_) * inner_.growth_rate(center, radius, factor_ >= 0.0 ? dir : opposite(dir));
    }
    double growth_rate(TimeDirection dir) const override
    {
        return std::abs(factor_) * inner_.growth_rate(factor_ >= 0.0 ? dir : opposite(dir));
    }
    // Φ^{s v}_t = Φ^{v}_{s t}
    std::optional<AffineMap> affine_flow(double t) const override { return inner_.affine_flow(factor_ * t); }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "scaled(" << inner_.describe() << ", by " << factor_ << ")";
        return os.str();
    }

private:
    VectorField inner_;
    double factor_;
};

}  // namespace

VectorField::VectorField(std::shared_ptr<const detail::FieldNode> node) : node_(std::move(node)) {}

VectorField VectorField::constant(const Vec& c) { return VectorField(std::make_shared<ConstantField>(c)); }
VectorField VectorField::linear(const Mat& a) { return VectorField(std::make_shared<LinearField>(a)); }
VectorField VectorField::rotation(double omega) { return VectorField(std::make_shared<RotationField>(omega)); }
VectorField VectorField::radial(int dim, bool extend_by_zero)
{
    return VectorField(std::make_shared<RadialField>(dim, extend_by_zero));
}
VectorField VectorField::shifted(const VectorField& inner, const Vec& offset)
{
    return VectorField(std::make_shared<ShiftedField>(inner, offset));
}
VectorField VectorField::scaled(const VectorField& inner, double factor)
{
    return VectorField(std::make_shared<ScaledField>(inner, factor));
}

int VectorField::dim() const { return node_->dim(); }
Vec VectorField::eval(const Vec& x) const
{
    if (x.size() != dim()) {
        throw std::invalid_argument("field evaluated at a point of the wrong dimension");
    }
    return node_->eval(x);
}
double VectorField::lipschitz() const { return node_->lipschitz(); }
double VectorField::sup_bound(const Box& box) const { return node_->sup_bound(box); }
double VectorField::growth_rate(const Vec& center, double radius, TimeDirection dir) const
{
    return node_->growth_rate(center, radius, dir);
}
double VectorField::growth_rate(TimeDirection dir) const { return node_->growth_rate(dir); }
std::optional<AffineMap> VectorField::affine_flow(double t) const { return node_->affine_flow(t); }
std::string VectorField::describe() const { return node_->describe(); }

}  // namespace funnel::flow
