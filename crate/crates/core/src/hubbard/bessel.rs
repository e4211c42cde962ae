/// Bessel function of the first kind, order zero.
///
/// The rational approximations of the FreeBSD/musl `j0` (via the `libm`
/// crate); accurate to a few ulp, far inside the 1e-10 needed by the
/// density-of-state quadrature.
#[inline]
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}
