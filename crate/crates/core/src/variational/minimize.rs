//! Bracketed global minimization of a smooth scalar function of one variable.
//!
//! The bracket is split into a fixed number of cells and the derivative is
//! sign-scanned to locate every interior local minimum. Each one is refined
//! by a safeguarded Newton iteration on the derivative (bisection whenever
//! the Newton step leaves the bracket or the curvature is not positive).
//! When the scan finds more than one derivative root the function is
//! multimodal; each minimum cell is then first narrowed by golden-section
//! search on the function values before the Newton polish.

use crate::error::{Error, Result};

/// A function with analytic first and second derivatives.
pub trait Smooth1D {
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;
    fn curvature(&self, x: f64) -> f64;
}

/// Number of cells used by the derivative sign scan.
pub const SCAN_CELLS: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub slope: f64,
    /// Total refinement iterations over all candidate minima.
    pub iterations: usize,
    /// Number of derivative sign changes found by the scan.
    pub roots_found: usize,
}

/// Global minimum of `f` over `[lo, hi]`.
///
/// Candidates are the refined interior minima together with any endpoint
/// whose slope points out of the interval; the lowest value wins and ties go
/// to the smaller `x`. Fails if a
/// refinement cannot bring `|f'|` below `tol` within `max_iter` steps.
pub fn global_minimum<F: Smooth1D>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Minimum> {
    debug_assert!(lo <= hi);
    let mut grid = Vec::with_capacity(SCAN_CELLS + 1);
    for k in 0..=SCAN_CELLS {
        let x = if k == SCAN_CELLS {
            hi
        } else {
            lo + (hi - lo) * (k as f64 / SCAN_CELLS as f64)
        };
        grid.push((x, f.slope(x)));
    }

    let roots_found = grid
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .count();
    let multimodal = roots_found > 1;

    let mut candidates = Vec::new();
    let (g_lo, g_hi) = (grid[0].1, grid[SCAN_CELLS].1);
    if g_lo >= 0.0 {
        candidates.push((lo, f.value(lo), g_lo));
    }
    if g_hi <= 0.0 {
        candidates.push((hi, f.value(hi), g_hi));
    }
    let mut iterations = 0;
    for w in grid.windows(2) {
        let ((a, ga), (b, gb)) = (w[0], w[1]);
        if !(ga < 0.0 && gb >= 0.0) {
            continue;
        }
        let start = if multimodal {
            golden_section(f, a, b, max_iter)
        } else {
            0.5 * (a + b)
        };
        let (x, g, used) = newton_bisect(f, a, b, start, tol, max_iter)?;
        iterations += used;
        candidates.push((x, f.value(x), g));
    }

    let best = candidates
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1).then(p.0.total_cmp(&q.0)))
        .expect("a continuous slope has a boundary or interior minimum");
    Ok(Minimum {
        x: best.0,
        value: best.1,
        slope: best.2,
        iterations,
        roots_found,
    })
}

/// Root of `f'` in `[a, b]` given `f'(a) < 0 ≤ f'(b)`.
fn newton_bisect<F: Smooth1D>(
    f: &F,
    mut a: f64,
    mut b: f64,
    start: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64, usize)> {
    let mut x = start.clamp(a, b);
    let mut best = (x, f.slope(x));
    for it in 1..=max_iter {
        let g = f.slope(x);
        if g.abs() < best.1.abs() {
            best = (x, g);
        }
        if g.abs() <= tol {
            return Ok((x, g, it));
        }
        if g < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let c = f.curvature(x);
        let newton = x - g / c;
        let next = if c > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if next == x || b <= a {
            break;
        }
        x = next;
    }
    Err(Error::MinimizerNotConverged {
        iterations: max_iter,
        best_lambda: best.0,
        best_energy: f.value(best.0),
        gradient_residual: best.1.abs(),
    })
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
fn golden_section<F: Smooth1D>(f: &F, mut a: f64, mut b: f64, max_iter: usize) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f.value(c);
    let mut fd = f.value(d);
    for _ in 0..max_iter {
        if (b - a) <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f.value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f.value(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic(f64);

    impl Smooth1D for Quadratic {
        fn value(&self, x: f64) -> f64 {
            (x - self.0).powi(2)
        }
        fn slope(&self, x: f64) -> f64 {
            2.0 * (x - self.0)
        }
        fn curvature(&self, _: f64) -> f64 {
            2.0
        }
    }

    /// Double well `(x² − 1)² + s·x`: two minima near ±1, the tilt picks one.
    struct DoubleWell(f64);

    impl Smooth1D for DoubleWell {
        fn value(&self, x: f64) -> f64 {
            (x * x - 1.0).powi(2) + self.0 * x
        }
        fn slope(&self, x: f64) -> f64 {
            4.0 * x * (x * x - 1.0) + self.0
        }
        fn curvature(&self, x: f64) -> f64 {
            12.0 * x * x - 4.0
        }
    }

    #[test]
    fn finds_interior_minimum() {
        let m = global_minimum(&Quadratic(0.3), 0.0, 1.0, 1e-12, 100).unwrap();
        assert!((m.x - 0.3).abs() < 1e-12);
        assert_eq!(m.roots_found, 1);
    }

    #[test]
    fn endpoint_minimum() {
        let m = global_minimum(&Quadratic(2.0), 0.0, 1.0, 1e-12, 100).unwrap();
        assert_eq!(m.x, 1.0);
    }

    #[test]
    fn picks_global_of_two_wells() {
        let m = global_minimum(&DoubleWell(0.1), -2.0, 2.0, 1e-12, 100).unwrap();
        assert_eq!(m.roots_found, 3);
        assert!(m.x < 0.0, "{m:?}");
        assert!(m.slope.abs() <= 1e-12);

        let m = global_minimum(&DoubleWell(-0.1), -2.0, 2.0, 1e-12, 100).unwrap();
        assert!(m.x > 0.0, "{m:?}");
    }

    struct Flat;

    impl Smooth1D for Flat {
        fn value(&self, _: f64) -> f64 {
            1.0
        }
        fn slope(&self, _: f64) -> f64 {
            0.0
        }
        fn curvature(&self, _: f64) -> f64 {
            0.0
        }
    }

    #[test]
    fn ties_go_to_smaller_x() {
        let m = global_minimum(&Flat, 0.25, 3.0, 1e-12, 100).unwrap();
        assert_eq!(m.x, 0.25);
    }

    #[test]
    fn unreachable_tolerance_reports_best_iterate() {
        let err = global_minimum(&DoubleWell(0.1), -2.0, 2.0, 1e-300, 2).unwrap_err();
        match err {
            Error::MinimizerNotConverged { best_lambda, .. } => {
                assert!((-2.0..=2.0).contains(&best_lambda))
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
