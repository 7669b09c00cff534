#pragma once

#include "amhd/field.hpp"

namespace amhd {

/// (i k_axis)^order applied mode by mode. For odd orders the Nyquist entry
/// along `axis` is zeroed: it has no real-valued odd derivative.
SpectralField derivative(const SpectralField& f, Axis axis, int order = 1);

/// Multiplication by -(k1^2 + k2^2).
SpectralField horizontal_laplacian(const SpectralField& f);

/// Multiplication by -|k|^2.
SpectralField laplacian(const SpectralField& f);

/// Zeroes every mode with |m_j| > n_j / 3 on some axis.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

/// Pointwise product of two spectral fields with the 2/3 rule applied to
/// both inputs and to the result.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// \int f g dx over the box, evaluated from the coefficients (Parseval).
double inner_product(const SpectralField& f, const SpectralField& g);
double inner_product(const VectorField& v, const VectorField& w);

/// Largest |f| over the collocation points (either space accepted).
double max_abs(const SpectralField& f);
/// Largest pointwise Euclidean magnitude over the collocation points.
double max_magnitude(const VectorField& v);

/// Largest |f| on a grid refined `factor` times by zero-padded spectral
/// interpolation. Reduces collocation undershoot of L-infinity norms.
double oversampled_max_abs(const SpectralField& f, int factor = 2);

VectorField dealias(const VectorField& v);
VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& v);
VectorField curl(const VectorField& v);

/// Largest |div v| on the collocation grid.
double max_divergence(const VectorField& v);

/// Divergence-free part: (I - k k^T / |k|^2) v(k); the mean mode is kept.
VectorField leray_project(const VectorField& v);
/// Gradient part: v - leray_project(v).
VectorField leray_complement(const VectorField& v);

/// Pointwise (a . grad) w with dealiased products.
VectorField advect(const VectorField& a, const VectorField& w);

}  // namespace amhd
