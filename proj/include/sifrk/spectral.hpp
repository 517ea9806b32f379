#pragma once

#include <span>
#include <vector>

#include "sifrk/grid.hpp"

namespace sifrk {

/// Diagonal representation of the stabilized operator L^h - kappa*I in the
/// transform basis matching the grid's boundary condition: discrete Fourier
/// modes for periodic grids, even (cosine) modes for cell-centered Neumann
/// grids.  lambda is indexed per mode in natural order and is symmetric under
/// k -> n-k for periodic grids, so it multiplies halfcomplex storage
/// directly.
class OperatorSymbol {
public:
    OperatorSymbol(Grid grid, std::vector<double> lambda, double kappa,
                   double diffusivity = 1.0);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& eigenvalues() const { return lambda_; }
    double kappa() const { return kappa_; }
    double diffusivity() const { return diffusivity_; }

    OperatorSymbol with_kappa(double kappa) const;

private:
    Grid grid_;
    std::vector<double> lambda_;
    double kappa_;
    double diffusivity_;
};

/// Eigenvalues of the second-order central-difference Laplacian scaled by
/// the diffusivity; kappa starts at zero.
/// Periodic: lambda_k = sum_d nu (2 cos(2 pi k_d / n_d) - 2) / h_d^2.
/// Neumann:  lambda_k = sum_d nu (2 cos(pi k_d / n_d) - 2) / h_d^2.
OperatorSymbol laplacian_symbol(const Grid& grid, double diffusivity);

/// u  ->  inverse-transform( exp(t (lambda_k - kappa)) * transform(u) ).
Field apply_exp(const OperatorSymbol& sym, double t, const Field& u);

/// Central-difference stencil applied in physical space (periodic wrap or
/// cell-centered mirror), scaled by the diffusivity baked into the symbol.
/// kappa is not applied here.
Field apply_laplacian(const OperatorSymbol& sym, const Field& u);

double sup_norm(const Field& u);

/// Low-level transform access used by the stepper and by tests.  Plans are
/// cached per (dim, n, bc) and executed through FFTW's new-array interface;
/// the backward transform is unnormalized, divide by normalization().
namespace transforms {

void forward(const Grid& grid, std::span<const double> in, std::span<double> out);
void backward_raw(const Grid& grid, std::span<const double> in, std::span<double> out);
double normalization(const Grid& grid);

/// Thread count used by FFTW plans; reads SIFRK_THREADS once (default 1).
int thread_count();

}  // namespace transforms

}  // namespace sifrk
