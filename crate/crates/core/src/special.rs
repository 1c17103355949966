//! Generalized Laguerre polynomials and displaced-oscillator matrix elements.

use crate::error::{Error, Result};

/// Largest Fock index accepted by [`laguerre`] and [`f_m`].
pub const MAX_INDEX: u64 = 1_000_000;

/// Arguments of [`f_m`]: order `m`, Fock index `n` and displacement `mu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FmParams {
    pub m: u64,
    pub n: u64,
    pub mu: f64,
}

impl FmParams {
    pub fn new(m: u64, n: u64, mu: f64) -> Self {
        FmParams { m, n, mu }
    }
}

fn check_index(function: &'static str, name: &str, v: u64) -> Result<()> {
    if v > MAX_INDEX {
        return Err(Error::Domain {
            function,
            reason: format!("{name} = {v} exceeds the supported maximum {MAX_INDEX}"),
        });
    }
    Ok(())
}

/// Generalized Laguerre polynomial `L_n^m(x)`.
///
/// Evaluated with the three-term recurrence
/// `(k+1) L_{k+1} = (2k + 1 + m − x) L_k − (k + m) L_{k−1}`,
/// which avoids the cancellation of the alternating factorial sum.
pub fn laguerre(n: u64, m: u64, x: f64) -> Result<f64> {
    check_index("laguerre", "n", n)?;
    check_index("laguerre", "m", m)?;
    if !x.is_finite() {
        return Err(Error::Domain {
            function: "laguerre",
            reason: format!("argument must be finite, got {x}"),
        });
    }
    Ok(laguerre_unchecked(n, m, x))
}

fn laguerre_unchecked(n: u64, m: u64, x: f64) -> f64 {
    let m = m as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + m - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `F_m(n) = exp(−μ²/2) μ^m n!/(n+m)! L_n^m(μ²)`.
///
/// This is the coefficient function of the normal-ordered expansion of the
/// displacement operator `exp[μ(a† − a)]`; `⟨n+m| D(μ) |n⟩ = √((n+m)!/n!) F_m(n)`.
pub fn f_m(p: FmParams) -> Result<f64> {
    let FmParams { m, n, mu } = p;
    check_index("f_m", "n", n)?;
    check_index("f_m", "m", m)?;
    if !mu.is_finite() {
        return Err(Error::Domain {
            function: "f_m",
            reason: format!("displacement must be finite, got {mu}"),
        });
    }
    let x = mu * mu;
    // n!/(n+m)! = Π_{j=1}^{m} 1/(n+j), folded together with μ^m.
    let mut prefactor = (-0.5 * x).exp();
    for j in 1..=m {
        prefactor *= mu / (n + j) as f64;
    }
    if prefactor == 0.0 {
        return Ok(0.0);
    }
    Ok(prefactor * laguerre_unchecked(n, m, x))
}

/// `F_0(n)` at displacement `mu`, the diagonal matrix element `⟨n| D(μ) |n⟩`.
pub fn f_0(n: u64, mu: f64) -> Result<f64> {
    f_m(FmParams::new(0, n, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    use proptest::prelude::*;

    fn factorial(k: u64) -> BigInt {
        (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
    }

    /// Σ_i (−x)^i (n+m)! / [(m+i)! (n−i)! i!] in exact rational arithmetic.
    fn laguerre_exact(n: u64, m: u64, x: &BigRational) -> BigRational {
        let mut sum = BigRational::zero();
        let mut pow = BigRational::one();
        let neg_x = -x.clone();
        for i in 0..=n {
            let den = factorial(m + i) * factorial(n - i) * factorial(i);
            sum += pow.clone() * BigRational::new(factorial(n + m), den);
            pow *= neg_x.clone();
        }
        sum
    }

    /// `exp(μ (a† − a))` on a truncated Fock space.
    fn displacement(mu: f64, dim: usize) -> DMatrix<f64> {
        let mut gen = DMatrix::<f64>::zeros(dim, dim);
        for k in 0..dim - 1 {
            let s = ((k + 1) as f64).sqrt();
            gen[(k + 1, k)] = mu * s;
            gen[(k, k + 1)] = -mu * s;
        }
        gen.exp()
    }

    fn sqrt_factorial_ratio(n: u64, m: u64) -> f64 {
        // √((n+m)!/n!)
        (1..=m).map(|j| ((n + j) as f64).sqrt()).product()
    }

    #[test]
    fn laguerre_closed_forms() {
        assert_eq!(laguerre(0, 3, 2.7).unwrap(), 1.0);
        assert_eq!(laguerre(1, 0, 0.5).unwrap(), 0.5);
        assert_relative_eq!(
            laguerre(2, 0, 0.5).unwrap(),
            0.5 * (0.25 - 2.0 + 2.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn laguerre_matches_exact_factorial_sum() {
        let x = BigRational::new(BigInt::from(13), BigInt::from(10));
        let exact = laguerre_exact(4, 2, &x).to_f64().unwrap();
        // mpmath: L_4^2(1.3) = -0.40299583333333333...
        assert_relative_eq!(exact, -0.402_995_833_333_333_3, max_relative = 1e-15);
        assert_relative_eq!(laguerre(4, 2, 1.3).unwrap(), exact, max_relative = 1e-12);

        let x = BigRational::new(BigInt::from(15), BigInt::from(2));
        let exact = laguerre_exact(30, 3, &x).to_f64().unwrap();
        assert_relative_eq!(laguerre(30, 3, 7.5).unwrap(), exact, max_relative = 1e-12);
        assert_relative_eq!(exact, 53.700_541_053_146_23, max_relative = 1e-14);
    }

    #[test]
    fn laguerre_rejects_out_of_domain() {
        assert!(laguerre(MAX_INDEX + 1, 0, 1.0).is_err());
        assert!(laguerre(3, MAX_INDEX + 1, 1.0).is_err());
        assert!(laguerre(3, 0, f64::NAN).is_err());
        assert!(f_m(FmParams::new(0, MAX_INDEX + 1, 0.5)).is_err());
        assert!(f_m(FmParams::new(0, 3, f64::INFINITY)).is_err());
    }

    #[test]
    fn f_m_examples() {
        for n in [0, 1, 5, 40] {
            assert_eq!(f_m(FmParams::new(0, n, 0.0)).unwrap(), 1.0);
            assert_eq!(f_m(FmParams::new(2, n, 0.0)).unwrap(), 0.0);
        }
        assert_relative_eq!(
            f_0(0, 1.0).unwrap(),
            0.606_530_659_712_633_4,
            max_relative = 1e-15
        );
        // mpmath: 0.8 exp(-0.32)
        assert_relative_eq!(
            f_m(FmParams::new(1, 0, 0.8)).unwrap(),
            0.580_919_229_658_952_7,
            max_relative = 1e-14
        );
        // mpmath: exp(-1.7²/2) 1.7³ 7!/10! L_7^3(1.7²)
        assert_relative_eq!(
            f_m(FmParams::new(3, 7, 1.7)).unwrap(),
            0.002_566_871_236_043_084,
            max_relative = 1e-12
        );
    }

    #[test]
    fn f_0_vacuum_is_gaussian() {
        for mu in [-3.0, -0.4, 0.0, 0.1, 1.3, 4.9] {
            assert_eq!(f_0(0, mu).unwrap(), (-0.5 * mu * mu).exp());
        }
    }

    #[test]
    fn f_m_matches_displacement_operator_overlap() {
        let dim = 300;
        for &mu in &[0.8, -1.3, 2.5, 5.0] {
            let d = displacement(mu, dim);
            for n in [0u64, 1, 7, 20, 50] {
                for m in [0u64, 1, 2, 5] {
                    let overlap = d[((n + m) as usize, n as usize)];
                    let via_fm = sqrt_factorial_ratio(n, m) * f_m(FmParams::new(m, n, mu)).unwrap();
                    assert!(
                        (overlap - via_fm).abs() <= 1e-10,
                        "mu={mu} n={n} m={m}: {overlap} vs {via_fm}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn f_m_bounded(m in 0u64..8, n in 0u64..60, mu in -5.0f64..5.0) {
            let v = f_m(FmParams::new(m, n, mu)).unwrap();
            prop_assert!(v.abs() <= 1.0 + 1e-12, "F_{}({}) at {} = {}", m, n, mu, v);
        }

        #[test]
        fn f_m_parity(m in 0u64..8, n in 0u64..60, mu in -5.0f64..5.0) {
            let plus = f_m(FmParams::new(m, n, mu)).unwrap();
            let minus = f_m(FmParams::new(m, n, -mu)).unwrap();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((minus - sign * plus).abs() <= 1e-15 * (1.0 + plus.abs()));
        }
    }
}
