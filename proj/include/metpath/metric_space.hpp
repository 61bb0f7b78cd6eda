#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace metpath {

/// A point is a finite real vector; its meaning is fixed by the owning space.
using Point = std::vector<double>;

enum class SpaceKind { Euclidean, SupNorm, Snowflake };

/// Immutable handle to a metric space. Copies share the same distance oracle
/// and are safe to use from several threads.
class MetricSpace {
public:
    struct Impl;

    MetricSpace() = delete;

    /// rho(p, q). Throws InputError on dimension mismatch and EvaluationError
    /// if the oracle returns NaN or a negative value.
    [[nodiscard]] double distance(std::span<const double> p, std::span<const double> q) const;

    [[nodiscard]] SpaceKind kind() const noexcept;
    [[nodiscard]] std::size_t dim() const noexcept;
    [[nodiscard]] const std::string& name() const noexcept;
    /// Exponent of a snowflaked space (1 for the others).
    [[nodiscard]] double alpha() const noexcept;

    friend MetricSpace euclidean(std::size_t dim);
    friend MetricSpace supnorm(std::size_t dim);
    friend MetricSpace snowflake(const MetricSpace& base, double alpha);

private:
    explicit MetricSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// R^dim with the Euclidean norm.
MetricSpace euclidean(std::size_t dim);
/// R^dim with the max norm; the finite-index stand-in for l_inf(Gamma).
MetricSpace supnorm(std::size_t dim);
/// (x, y) -> rho(x, y)^alpha, 0 < alpha <= 1.
MetricSpace snowflake(const MetricSpace& base, double alpha);

/// Result of the Kuratowski embedding over a finite anchor set.
struct KuratowskiEmbedding {
    MetricSpace target;              // sup-norm space indexed by the anchors
    std::vector<Point> anchors;
    std::vector<double> base_offsets;  // rho(a_0, a_i)
    std::function<Point(const Point&)> map;
};

/// p -> (rho(p, a_i) - rho(a_0, a_i))_i. Isometric on the anchors,
/// 1-Lipschitz everywhere. Anchor a_0 is the basepoint.
KuratowskiEmbedding kuratowski_embed(const MetricSpace& space, std::vector<Point> anchors);

}  // namespace metpath
