//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.
//!
//! Panels are bisected depth-first in a fixed order so results are bit-reproducible.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Number of equal panels the interval is cut into before refinement.
    pub base_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            base_panels: 16,
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_depth: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(centre - half * x);
        let f2 = f(centre + half * x);
        let pair = f1 + f2;
        kronrod += pair * w;
        if k % 2 == 1 {
            gauss += pair * WG[k / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

struct State {
    value: Complex64,
    error: f64,
    evaluations: usize,
    unresolved: f64,
}

fn refine<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    (a, b): (f64, f64),
    estimate: (Complex64, f64),
    tol: f64,
    depth: u32,
    opts: &AdaptiveOptions,
    st: &mut State,
) {
    let (value, err) = estimate;
    let local = tol.max(opts.rel_tol * value.norm());
    if err <= local || (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
        st.value += value;
        st.error += err;
        return;
    }
    if depth >= opts.max_depth {
        st.value += value;
        st.error += err;
        st.unresolved += err;
        return;
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    st.evaluations += 30;
    refine(f, (a, mid), left, 0.5 * tol, depth + 1, opts, st);
    refine(f, (mid, b), right, 0.5 * tol, depth + 1, opts, st);
}

/// Integrates `f` over `[a, b]` (empty when `b <= a`).
pub fn integrate<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<Integral> {
    let mut st = State {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
        unresolved: 0.0,
    };
    if a.is_nan() || b.is_nan() || b <= a {
        return Ok(Integral {
            value: st.value,
            error: 0.0,
            evaluations: 0,
        });
    }
    let n = opts.base_panels.max(1);
    let h = (b - a) / n as f64;
    let tol = opts.abs_tol / n as f64;
    for k in 0..n {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == n { b } else { a + (k + 1) as f64 * h };
        let est = gk15(&mut f, lo, hi);
        st.evaluations += 15;
        refine(&mut f, (lo, hi), est, tol, 0, opts, &mut st);
    }
    let allowed = opts.abs_tol.max(opts.rel_tol * st.value.norm()) * 1e3;
    if st.unresolved > allowed {
        return Err(Error::NonConvergence {
            estimate: st.unresolved,
            tolerance: allowed,
        });
    }
    Ok(Integral {
        value: st.value,
        error: st.error,
        evaluations: st.evaluations,
    })
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<Integral> {
    integrate(|t| Complex64::new(f(t), 0.0), a, b, opts)
}
