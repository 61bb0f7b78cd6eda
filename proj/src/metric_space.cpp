#include "metpath/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "metpath/error.hpp"

namespace metpath {

struct MetricSpace::Impl {
    SpaceKind kind;
    std::size_t dim;
    std::string name;
    double alpha = 1.0;
    std::shared_ptr<const Impl> base;  // snowflake only

    double raw(std::span<const double> p, std::span<const double> q) const {
        switch (kind) {
            case SpaceKind::Euclidean: {
                double acc = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double d = p[i] - q[i];
                    acc += d * d;
                }
                return std::sqrt(acc);
            }
            case SpaceKind::SupNorm: {
                double m = 0.0;
                for (std::size_t i = 0; i < dim; ++i) m = std::max(m, std::abs(p[i] - q[i]));
                return m;
            }
            case SpaceKind::Snowflake: {
                const double d = base->raw(p, q);
                return alpha == 1.0 ? d : std::pow(d, alpha);
            }
        }
        return 0.0;
    }
};

double MetricSpace::distance(std::span<const double> p, std::span<const double> q) const {
    if (p.size() != impl_->dim || q.size() != impl_->dim) {
        std::ostringstream os;
        os << impl_->name << ": expected points of dimension " << impl_->dim << ", got " << p.size()
           << " and " << q.size();
        throw InputError(os.str());
    }
    const double d = impl_->raw(p, q);
    if (std::isnan(d) || d < 0.0) throw EvaluationError(impl_->name + ": distance oracle returned an invalid value");
    return d;
}

SpaceKind MetricSpace::kind() const noexcept { return impl_->kind; }
std::size_t MetricSpace::dim() const noexcept { return impl_->dim; }
const std::string& MetricSpace::name() const noexcept { return impl_->name; }
double MetricSpace::alpha() const noexcept { return impl_->alpha; }

MetricSpace euclidean(std::size_t dim) {
    if (dim == 0) throw InputError("euclidean: dimension must be positive");
    auto impl = std::make_shared<MetricSpace::Impl>();
    impl->kind = SpaceKind::Euclidean;
    impl->dim = dim;
    impl->name = "euclidean(" + std::to_string(dim) + ")";
    return MetricSpace(std::move(impl));
}

MetricSpace supnorm(std::size_t dim) {
    if (dim == 0) throw InputError("supnorm: dimension must be positive");
    auto impl = std::make_shared<MetricSpace::Impl>();
    impl->kind = SpaceKind::SupNorm;
    impl->dim = dim;
    impl->name = "supnorm(" + std::to_string(dim) + ")";
    return MetricSpace(std::move(impl));
}

MetricSpace snowflake(const MetricSpace& base, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("snowflake: alpha must lie in (0, 1]");
    auto impl = std::make_shared<MetricSpace::Impl>();
    impl->kind = SpaceKind::Snowflake;
    impl->dim = base.dim();
    std::ostringstream os;
    os << "snowflake(" << base.name() << ", " << alpha << ")";
    impl->name = os.str();
    impl->alpha = alpha;
    impl->base = base.impl_;
    return MetricSpace(std::move(impl));
}

KuratowskiEmbedding kuratowski_embed(const MetricSpace& space, std::vector<Point> anchors) {
    if (anchors.empty()) throw InputError("kuratowski_embed: anchor list is empty");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (space.distance(anchors[i], anchors[j]) == 0.0)
                throw InputError("kuratowski_embed: anchors must be pairwise distinct");
        }
    }
    std::vector<double> offsets(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) offsets[i] = space.distance(anchors[0], anchors[i]);

    auto shared_anchors = std::make_shared<const std::vector<Point>>(anchors);
    auto shared_offsets = std::make_shared<const std::vector<double>>(offsets);
    auto map = [space, shared_anchors, shared_offsets](const Point& p) {
        Point image(shared_anchors->size());
        for (std::size_t i = 0; i < image.size(); ++i)
            image[i] = space.distance(p, (*shared_anchors)[i]) - (*shared_offsets)[i];
        return image;
    };
    return KuratowskiEmbedding{supnorm(anchors.size()), std::move(anchors), std::move(offsets), std::move(map)};
}

}  // namespace metpath
