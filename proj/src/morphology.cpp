#include "gms/morphology.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace gms {

namespace {

// Sliding-window extremum over a strided 1-D line, window [i-r, i+r] clipped
// to [0, n). Monotonic deque of indices; `better(a, b)` is true when a should
// replace b as the window extremum.
template <typename Better>
void sliding_extremum(const double* in, double* out, std::size_t n, std::size_t stride, std::size_t radius,
                      std::vector<std::size_t>& deque, Better better) {
    deque.resize(n);
    std::size_t head = 0;
    std::size_t tail = 0;
    std::size_t next = 0;  // next input index to push
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::min(n - 1, i + radius);
        for (; next <= hi; ++next) {
            const double v = in[next * stride];
            while (tail > head && !better(in[deque[tail - 1] * stride], v)) --tail;
            deque[tail++] = next;
        }
        const std::size_t lo = i >= radius ? i - radius : 0;
        while (deque[head] < lo) ++head;
        out[i * stride] = in[deque[head] * stride];
    }
}

template <typename Better>
Raster2D rank_filter(const Raster2D& f, StructuringElement se, Better better) {
    if (se.radius() == 0) return f;
    const std::size_t w = f.width();
    const std::size_t h = f.height();
    std::vector<double> rows(f.size());
    std::vector<double> out(f.size());
    std::vector<std::size_t> deque;
    const double* src = f.values().data();
    for (std::size_t r = 0; r < h; ++r) {
        sliding_extremum(src + r * w, rows.data() + r * w, w, 1, se.radius(), deque, better);
    }
    for (std::size_t c = 0; c < w; ++c) {
        sliding_extremum(rows.data() + c, out.data() + c, h, w, se.radius(), deque, better);
    }
    return Raster2D(w, h, std::move(out), f.units());
}

Raster2D subtract(const Raster2D& a, const Raster2D& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return Raster2D(a.width(), a.height(), std::move(out), Units::Dimensionless);
}

}  // namespace

GradientField::GradientField(Raster2D raster) : raster_(std::move(raster)) {
    if (raster_.units() != Units::Dimensionless) {
        raster_ = Raster2D(raster_.width(), raster_.height(),
                           std::vector<double>(raster_.values().begin(), raster_.values().end()),
                           Units::Dimensionless);
    }
    for (double v : raster_.values()) {
        if (v < 0.0) throw InvalidArgument("GradientField: values must be non-negative");
    }
}

Raster2D dilate(const Raster2D& f, StructuringElement se) {
    return rank_filter(f, se, std::greater<>{});
}

Raster2D erode(const Raster2D& f, StructuringElement se) {
    return rank_filter(f, se, std::less<>{});
}

GradientField morphological_gradient(const Raster2D& f, StructuringElement se) {
    if (se.radius() == 0) throw InvalidArgument("morphological_gradient: radius must be at least 1");
    return GradientField(subtract(dilate(f, se), erode(f, se)));
}

GradientField multiscale_gradient(const Raster2D& f, const GradientConfig& cfg) {
    if (cfg.n_scales == 0) throw InvalidArgument("multiscale_gradient: n_scales must be at least 1");
    std::vector<double> sum(f.size(), 0.0);
    for (std::size_t i = 1; i <= cfg.n_scales; ++i) {
        const GradientField g = morphological_gradient(f, StructuringElement(i));
        const Raster2D term = erode(g.raster(), StructuringElement(i - 1));
        for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += term[p];
    }
    const auto n = static_cast<double>(cfg.n_scales);
    for (auto& v : sum) v /= n;
    return GradientField(Raster2D(f.width(), f.height(), std::move(sum), Units::Dimensionless));
}

GradientField multispectral_gradient(const MultiChannelImage& image, const GradientConfig& cfg) {
    std::vector<double> sum(image.width() * image.height(), 0.0);
    for (const auto& ch : image.channels()) {
        const GradientField g = multiscale_gradient(ch.raster, cfg);
        double scale = 1.0;
        if (cfg.normalize_channels) {
            const double peak = *std::max_element(g.values().begin(), g.values().end());
            if (peak > 0.0) scale = peak;
        }
        for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += g[p] / scale;
    }
    return GradientField(Raster2D(image.width(), image.height(), std::move(sum), Units::Dimensionless));
}

}  // namespace gms
