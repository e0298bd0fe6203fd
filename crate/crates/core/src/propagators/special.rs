//! Exact integrals of complex exponentials over intervals and triangles.
//!
//! All arguments are purely imaginary in practice, so `|e^z| = 1` and the
//! closed forms never overflow; small arguments switch to power series.

use num_complex::Complex64;

const SERIES_RADIUS: f64 = 0.5;

/// `E0(z) = ∫_0^1 e^{zs} ds = (e^z - 1) / z`.
pub(crate) fn e0(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        // Σ z^n / (n + 1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..30 {
            term *= z / (n as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `Tri(x, y) = ∫_0^1 dr e^{xr} ∫_0^r ds e^{ys}`.
pub(crate) fn tri(x: Complex64, y: Complex64) -> Complex64 {
    if y.norm() >= 1.0 {
        (e0(x + y) - e0(x)) / y
    } else if x.norm() >= 1.0 {
        (x.exp() * e0(y) - e0(x + y)) / x
    } else {
        // Σ x^m y^n / (m! n! (n + 1)(m + n + 2))
        let mut sum = Complex64::new(0.0, 0.0);
        let mut xm = Complex64::new(1.0, 0.0);
        for m in 0..40 {
            let mut yn = Complex64::new(1.0, 0.0);
            let mut inner = Complex64::new(0.0, 0.0);
            for n in 0..40 {
                let t = yn / ((n as f64 + 1.0) * (m as f64 + n as f64 + 2.0));
                inner += t;
                if yn.norm() < 1e-20 {
                    break;
                }
                yn *= y / (n as f64 + 1.0);
            }
            sum += xm * inner;
            if xm.norm() < 1e-20 {
                break;
            }
            xm *= x / (m as f64 + 1.0);
        }
        sum
    }
}

/// `∫_p^q e^{iωt} dt`, zero when `q <= p`.
pub(crate) fn exp_integral(omega: f64, p: f64, q: f64) -> Complex64 {
    if q <= p {
        return Complex64::new(0.0, 0.0);
    }
    let h = q - p;
    if omega == 0.0 {
        return Complex64::new(h, 0.0);
    }
    Complex64::from_polar(h, omega * p) * e0(Complex64::new(0.0, omega * h))
}
