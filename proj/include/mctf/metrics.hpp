#pragma once

#include <vector>

#include "mctf/tensor.hpp"

namespace mctf {

/// PSNR reported for slices that match exactly (and the upper clamp for all slices).
inline constexpr double kPsnrCap = 100.0;

/// Picture quality indices. psnr and ssim are means over frontal slices
/// (mode 3); the per-slice arrays hold one value per slice.
struct QualityReport {
    double psnr = 0.0;
    double ssim = 0.0;
    double ergas = 0.0;
    double sam = 0.0;
    std::vector<double> psnr_per_slice;
    std::vector<double> ssim_per_slice;
    double peak = 0.0;
    double scale_ratio = 1.0;
    /// Spatial positions skipped by SAM because a spectral fiber was all zero.
    Index sam_skipped = 0;
};

/// max |ref|, or 1 for an all-zero reference.
double default_peak(const Tensor3& ref);

/// 10 log10(peak^2 / MSE) per frontal slice, clamped to kPsnrCap.
std::vector<double> psnr_per_slice(const Tensor3& ref, const Tensor3& est, double peak);
double psnr(const Tensor3& ref, const Tensor3& est, double peak);

/// Single-scale SSIM per frontal slice: 11x11 Gaussian window, sigma 1.5,
/// C1 = (0.01 peak)^2, C2 = (0.03 peak)^2. Local statistics are computed at
/// every pixel with reflect-101 padding (edge pixel not repeated), so slices
/// smaller than the window are handled the same way.
std::vector<double> ssim_per_slice(const Tensor3& ref, const Tensor3& est, double peak);
double ssim(const Tensor3& ref, const Tensor3& est, double peak);

/// 100 * scale_ratio * sqrt(mean over slices of MSE_b / mean_b^2), where
/// mean_b is the mean of the reference slice. Throws if any mean_b is zero.
double ergas(const Tensor3& ref, const Tensor3& est, double scale_ratio = 1.0);

struct SamResult {
    double mean_angle = 0.0;  // radians
    Index skipped = 0;
};
/// Mean angle between mode-3 fibers of ref and est over all spatial positions.
SamResult sam_detail(const Tensor3& ref, const Tensor3& est);
double sam(const Tensor3& ref, const Tensor3& est);

QualityReport evaluate(const Tensor3& ref, const Tensor3& est, double peak, double scale_ratio = 1.0);

}  // namespace mctf
