#include "funnel/evolute/evolute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "funnel/parallel.hpp"

namespace funnel::evolute {

using flow::FlowMap;
using flow::TimeDirection;
using flow::VectorField;
using sets::Membership;
using sets::SetDescription;

std::string to_string(TimeMode m) { return m == TimeMode::open ? "open" : "closed"; }

TimeMode parse_time_mode(const std::string& s)
{
    if (s == "closed") {
        return TimeMode::closed;
    }
    if (s == "open") {
        return TimeMode::open;
    }
    throw std::invalid_argument("time mode must be 'closed' or 'open', got '" + s + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (e^{Ls} - 1) / L, the excursion per unit speed.
double phi(double lip, double s) { return lip > 0.0 ? std::expm1(lip * s) / lip : s; }

// Backward-trajectory classifier for balls B(x, rho).
//
// Along the sampled trajectory y_j ≈ Φ_{-τ_j}(x) it tracks err_j (distance
// of y_j from the exact point) and spread_j (radius of the image of the ball
// B(x, rho) around the exact point), both grown with local growth rates.
class Classifier {
public:
    Classifier(SetDescription set, VectorField field, double t, double dtau, TimeMode mode, double tol)
        : set_(std::move(set)), field_(std::move(field)), t_(t), mode_(mode), tol_(tol)
    {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("evolute time must be finite and nonnegative");
        }
        if (!(dtau > 0.0)) {
            throw std::invalid_argument("evolute time step must be positive");
        }
        if (set_.dim() != field_.dim()) {
            throw std::invalid_argument("set and field dimensions differ");
        }
        if (t == 0.0) {
            steps_ = 0;
            dtau_ = 0.0;
            last_dt_ = 0.0;
        } else if (dtau >= t) {
            steps_ = 1;
            dtau_ = t;
            last_dt_ = t;
        } else {
            steps_ = static_cast<std::size_t>(std::ceil(t / dtau - 1e-9));
            dtau_ = dtau;
            last_dt_ = t - static_cast<double>(steps_ - 1) * dtau;
            if (last_dt_ <= 0.0) {
                last_dt_ = dtau;
            }
        }
        // Open mode needs at least one interior sample.
        if (mode_ == TimeMode::open && steps_ == 1) {
            steps_ = 2;
            dtau_ = last_dt_ = 0.5 * t;
        }
        flow::IntegratorOptions io;
        io.tol = tol;
        full_.emplace(field_, -dtau_, io);
        last_.emplace(field_, -last_dt_, io);
        lip_ = field_.lipschitz();
        mu_global_ = field_.growth_rate(TimeDirection::backward);
        contracting_ = mu_global_ <= 0.0;
    }

    [[nodiscard]] double dtau() const { return dtau_; }

    [[nodiscard]] Membership classify(const Vec& x, double rho) const
    {
        const std::size_t n = steps_;
        Vec y = x;
        double spread = rho;
        double err = 0.0;
        double prev_step_spread = rho;
        double dt_prev = 0.0;
        double tau = 0.0;
        bool out_ok = true;
        double out_margin = kInf;
        const std::size_t last_in = mode_ == TimeMode::closed ? n : (n >= 1 ? n - 1 : 0);
        const std::size_t first_in = mode_ == TimeMode::closed ? 0 : 1;
        const bool any_in = mode_ == TimeMode::closed || n >= 2;

        for (std::size_t j = 0; j <= n; ++j) {
            const double dt_next = j < n ? (j + 1 < n ? dtau_ : last_dt_) : 0.0;
            const Membership m = set_.membership(y);
            const double speed = field_.eval(y).norm() + lip_ * err;

            double growth = 1.0;
            double step_spread = spread;
            if (j < n && !contracting_) {
                const double reach = speed * phi(lip_, dt_next) + err + spread * std::exp(lip_ * dt_next);
                const double mu = field_.growth_rate(y, reach, TimeDirection::backward);
                growth = std::exp(mu * dt_next);
                step_spread = spread * std::max(growth, 1.0);
            }

            if (any_in && j >= first_in && j <= last_in && m.status == sets::Status::in &&
                m.margin > spread + err) {
                const double g = std::exp(mu_global_ * tau);
                return {sets::Status::in, std::max(0.0, (m.margin - err) / g - rho)};
            }

            if (out_ok) {
                const double half = 0.5 * std::max(dt_prev, dt_next);
                const double eps = speed * phi(lip_, half);
                const double cover = std::max(prev_step_spread, step_spread);
                if (m.status == sets::Status::out && m.margin > eps + err + cover) {
                    const double g = std::exp(std::max(mu_global_ * (tau + half), mu_global_ * (tau - half)));
                    out_margin = std::min(out_margin, (m.margin - eps - err) / g - rho);
                } else {
                    out_ok = false;
                }
            }
            if (!out_ok && (!any_in || j + 1 > last_in)) {
                return Membership::unknown();
            }
            if (j == n) {
                break;
            }

            y = (j + 1 < n ? *full_ : *last_)(y);
            const double step_err = full_->closed_form() ? 1e-14 * (1.0 + y.norm()) : tol_;
            err = err * growth + step_err;
            spread *= growth;
            prev_step_spread = step_spread;
            dt_prev = dt_next;
            tau += dt_next;
        }
        if (out_ok) {
            return {sets::Status::out, std::max(0.0, out_margin)};
        }
        return Membership::unknown();
    }

private:
    SetDescription set_;
    VectorField field_;
    double t_;
    TimeMode mode_;
    double tol_;
    std::size_t steps_ = 0;
    double dtau_ = 0.0;
    double last_dt_ = 0.0;
    std::optional<FlowMap> full_;
    std::optional<FlowMap> last_;
    double lip_ = 0.0;
    double mu_global_ = 0.0;
    bool contracting_ = false;
};

std::string format_double(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

Membership evoluted_membership(const SetDescription& set, const VectorField& field, double t, const Vec& x,
                               const EvoluteOptions& opts)
{
    if (x.size() != set.dim()) {
        throw std::invalid_argument("point dimension does not match the set");
    }
    const Classifier c(set, field, t, opts.dtau, opts.mode, opts.tol);
    return c.classify(x, 0.0);
}

double default_dtau(const VectorField& field, const Box& box, double h)
{
    const double s = field.sup_bound(box);
    return s > 0.0 && std::isfinite(s) ? h / s : kInf;
}

double resolve_dtau(const VectorField& field, const GridSpec& spec, const EvoluteOptions& opts, double t)
{
    double dtau = opts.dtau > 0.0 ? opts.dtau : default_dtau(field, spec.box, spec.h.minCoeff());
    if (t > 0.0) {
        dtau = std::min(dtau, t);
    }
    return dtau;
}

OccupancyGrid evolve_grid(const SetDescription& set, const VectorField& field, double t, const GridSpec& spec,
                          const EvoluteOptions& opts)
{
    if (set.dim() != spec.box.dim()) {
        throw std::invalid_argument("set and grid dimensions differ");
    }
    double dtau = resolve_dtau(field, spec, opts, t);
    if (!std::isfinite(dtau)) {
        dtau = 1.0;  // t == 0 on a vanishing field: no steps are taken anyway
    }
    const Classifier c(set, field, t, dtau, opts.mode, opts.tol);
    OccupancyGrid grid(spec, {"evolute", set.describe(), field.describe(), t, c.dtau(), to_string(opts.mode)});
    const double rho = grid.half_diagonal();
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            grid.set(i, c.classify(grid.cell_center(i), rho).status);
        }
    });
    return grid;
}

SetDescription flow_image(const SetDescription& set, const VectorField& field, double tau, double tol)
{
    if (set.dim() != field.dim()) {
        throw std::invalid_argument("set and field dimensions differ");
    }
    flow::IntegratorOptions io;
    io.tol = tol;
    auto back = std::make_shared<const FlowMap>(field, -tau, io);
    const double rate = field.growth_rate(tau >= 0.0 ? TimeDirection::backward : TimeDirection::forward);
    const double gain = std::exp(rate * std::abs(tau));
    const std::string label = "flow_image(" + set.describe() + ", " + field.describe() + ", t=" + format_double(tau) + ")";
    return sets::make_custom(set.dim(), set.topology(), label, [set, back, gain, tol](const Vec& y) {
        const Vec x = (*back)(y);
        const Membership m = set.membership(x);
        if (m.status == sets::Status::unknown) {
            return m;
        }
        const double e = back->closed_form() ? 1e-14 * (1.0 + x.norm()) : tol;
        const double margin = (m.margin - e) / gain;
        if (!(margin > 0.0)) {
            return Membership::unknown();
        }
        return Membership{m.status, margin};
    });
}

OccupancyGrid pushforward_set_grid(const SetDescription& set, const VectorField& field, double tau,
                                   const GridSpec& spec, double tol)
{
    OccupancyGrid grid = tau == 0.0 ? membership_grid(set, spec) : membership_grid(flow_image(set, field, tau, tol), spec);
    grid.set_metadata({"pushforward", set.describe(), field.describe(), tau, 0.0, ""});
    return grid;
}

}  // namespace funnel::evolute
