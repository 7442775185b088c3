#include "mctf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mctf {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

void require_same_shape(const Tensor3& a, const Tensor3& b, const char* who) {
    if (a.shape() != b.shape()) throw ArgumentError(std::string(who) + ": shape mismatch");
}

void require_peak(double peak) {
    if (!(peak > 0.0) || !std::isfinite(peak)) throw ArgumentError("peak must be positive");
}

std::array<double, kWindow> gaussian_taps() {
    std::array<double, kWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kWindow / 2;
        w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return w;
}

// reflect-101: ... 2 1 | 0 1 2 ... n-1 | n-2 ...
Index reflect(Index i, Index n) {
    if (n == 1) return 0;
    const Index period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

// Separable Gaussian filter of a column-major rows x cols image.
Matrix blur(const Matrix& img) {
    static const auto taps = gaussian_taps();
    const Index rows = img.rows(), cols = img.cols();
    Matrix tmp(rows, cols), out(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t) acc += taps[static_cast<std::size_t>(t)] * img(reflect(r + t - kWindow / 2, rows), c);
            tmp(r, c) = acc;
        }
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t) acc += taps[static_cast<std::size_t>(t)] * tmp(r, reflect(c + t - kWindow / 2, cols));
            out(r, c) = acc;
        }
    return out;
}

double slice_ssim(const Matrix& x, const Matrix& y, double peak) {
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const Matrix mx = blur(x), my = blur(y);
    const Matrix exx = blur(x.cwiseProduct(x)), eyy = blur(y.cwiseProduct(y)), exy = blur(x.cwiseProduct(y));
    double total = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
        const double ux = mx(i), uy = my(i);
        const double vx = exx(i) - ux * ux;
        const double vy = eyy(i) - uy * uy;
        const double cxy = exy(i) - ux * uy;
        total += ((2.0 * ux * uy + c1) * (2.0 * cxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(x.size());
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double default_peak(const Tensor3& ref) {
    const double m = ref.vec().cwiseAbs().maxCoeff();
    return m > 0.0 ? m : 1.0;
}

std::vector<double> psnr_per_slice(const Tensor3& ref, const Tensor3& est, double peak) {
    require_same_shape(ref, est, "psnr");
    require_peak(peak);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ref.dim(3)));
    for (Index k = 0; k < ref.dim(3); ++k) {
        const double mse = (ref.slice(k) - est.slice(k)).squaredNorm() / static_cast<double>(ref.slice(k).size());
        out.push_back(mse == 0.0 ? kPsnrCap : std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse)));
    }
    return out;
}

double psnr(const Tensor3& ref, const Tensor3& est, double peak) { return mean(psnr_per_slice(ref, est, peak)); }

std::vector<double> ssim_per_slice(const Tensor3& ref, const Tensor3& est, double peak) {
    require_same_shape(ref, est, "ssim");
    require_peak(peak);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ref.dim(3)));
    for (Index k = 0; k < ref.dim(3); ++k) out.push_back(slice_ssim(ref.slice(k), est.slice(k), peak));
    return out;
}

double ssim(const Tensor3& ref, const Tensor3& est, double peak) { return mean(ssim_per_slice(ref, est, peak)); }

double ergas(const Tensor3& ref, const Tensor3& est, double scale_ratio) {
    require_same_shape(ref, est, "ergas");
    if (!(scale_ratio > 0.0)) throw ArgumentError("ergas: scale ratio must be positive");
    double acc = 0.0;
    for (Index k = 0; k < ref.dim(3); ++k) {
        const auto r = ref.slice(k);
        const double n = static_cast<double>(r.size());
        const double band_mean = r.sum() / n;
        if (band_mean == 0.0) throw ArgumentError("ergas: reference band " + std::to_string(k) + " has zero mean");
        const double mse = (r - est.slice(k)).squaredNorm() / n;
        acc += mse / (band_mean * band_mean);
    }
    return 100.0 * scale_ratio * std::sqrt(acc / static_cast<double>(ref.dim(3)));
}

SamResult sam_detail(const Tensor3& ref, const Tensor3& est) {
    require_same_shape(ref, est, "sam");
    const Index bands = ref.dim(3);
    const Index plane = ref.dim(1) * ref.dim(2);
    Eigen::VectorXd a(bands), b(bands);
    double total = 0.0;
    Index counted = 0;
    SamResult result;
    for (Index p = 0; p < plane; ++p) {
        for (Index k = 0; k < bands; ++k) {
            a(k) = ref[p + plane * k];
            b(k) = est[p + plane * k];
        }
        const double na = a.norm(), nb = b.norm();
        if (na == 0.0 || nb == 0.0) {
            ++result.skipped;
            continue;
        }
        const Eigen::VectorXd ua = a / na, ub = b / nb;
        // 2 atan2 form stays exact at 0 where acos(dot) loses half the digits
        total += 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
        ++counted;
    }
    result.mean_angle = counted > 0 ? total / static_cast<double>(counted) : 0.0;
    return result;
}

double sam(const Tensor3& ref, const Tensor3& est) { return sam_detail(ref, est).mean_angle; }

QualityReport evaluate(const Tensor3& ref, const Tensor3& est, double peak, double scale_ratio) {
    QualityReport q;
    q.peak = peak;
    q.scale_ratio = scale_ratio;
    q.psnr_per_slice = psnr_per_slice(ref, est, peak);
    q.ssim_per_slice = ssim_per_slice(ref, est, peak);
    q.psnr = mean(q.psnr_per_slice);
    q.ssim = mean(q.ssim_per_slice);
    q.ergas = ergas(ref, est, scale_ratio);
    const SamResult s = sam_detail(ref, est);
    q.sam = s.mean_angle;
    q.sam_skipped = s.skipped;
    return q;
}

}  // namespace mctf
