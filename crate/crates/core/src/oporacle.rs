//! Finite-matrix checks of the singular value inequalities behind the
//! Hölder bound for singular traces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seqcore::{StepFunction, WindowPolicy};
use crate::traces::{dixmier_step, LimitProcedure};

pub const MAX_DIMENSION: usize = 64;
const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;
/// Allowed violation of a finite-dimensional inequality.
pub const INEQUALITY_SLACK: f64 = 1e-10;
/// Relative slack of the Hölder chain, whose sides are limit emulations.
pub const HOLDER_SLACK: f64 = 0.05;

/// A dense square matrix of dimension at most 64, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SmallMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::Shape(format!(
                "dimension must lie in 1..={MAX_DIMENSION}, got {n}"
            )));
        }
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            data[i * n + i] = x;
        }
        Self::new(n, data)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::diag(&vec![1.0; n])
    }

    /// Entries uniform in `[-1, 1)`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new(n, (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self {
            n,
            data: (0..n * n).map(|k| self.get(k % n, k / n)).collect(),
        }
    }

    pub fn mul(&self, other: &SmallMatrix) -> Result<Self> {
        let n = self.n;
        if other.n != n {
            return Err(Error::Shape(format!(
                "cannot multiply {n}x{n} by {0}x{0}",
                other.n
            )));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self { n, data })
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &SmallMatrix) -> Result<Vec<f64>> {
    let n = m.n;
    let mut a = m.data.clone();
    let frobenius = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) > JACOBI_TOLERANCE * frobenius {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence("Jacobi sweeps"));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

/// Singular values, non-increasing: square roots of the eigenvalues of `mᵀm`.
pub fn singular_values(m: &SmallMatrix) -> Result<Vec<f64>> {
    let gram = m.transpose().mul(m)?;
    let mut s: Vec<f64> = symmetric_eigenvalues(&gram)?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            lhs,
            rhs,
            pass: lhs <= rhs + slack,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn spectra(a: &SmallMatrix, b: &SmallMatrix) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    Ok((
        singular_values(&a.mul(b)?)?,
        singular_values(a)?,
        singular_values(b)?,
    ))
}

/// `Σ_{i≥2n} μ_i(ab) ≤ Σ_{i≥n} μ_i(a) μ_i(b)`, indices from 0.
pub fn coweyl_check(a: &SmallMatrix, b: &SmallMatrix, n: usize) -> Result<InequalityCheck> {
    let (ab, sa, sb) = spectra(a, b)?;
    let lhs = ab.iter().skip(2 * n).sum();
    let rhs = sa.iter().zip(&sb).skip(n).map(|(x, y)| x * y).sum();
    Ok(InequalityCheck::new(lhs, rhs, INEQUALITY_SLACK))
}

/// `Σ_{i<N} μ_i(ab) ≤ Σ_{i<N} μ_i(a) μ_i(b)`.
pub fn weyl_check(a: &SmallMatrix, b: &SmallMatrix, count: usize) -> Result<InequalityCheck> {
    let (ab, sa, sb) = spectra(a, b)?;
    let lhs = ab.iter().take(count).sum();
    let rhs = sa.iter().zip(&sb).take(count).map(|(x, y)| x * y).sum();
    Ok(InequalityCheck::new(lhs, rhs, INEQUALITY_SLACK))
}

/// `C_p = 1 + 2√(p−1)/p`, with `C_∞ = 1`.
pub fn holder_constant(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Invalid(format!(
            "Hölder exponent must be at least 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(1.0);
    }
    Ok(1.0 + 2.0 * (p - 1.0).sqrt() / p)
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderCheck {
    pub p: f64,
    pub constant: f64,
    /// `τ(|ab|)`.
    pub lhs: f64,
    pub tau_a: f64,
    pub tau_b: f64,
    /// `C · τ(|a|^p)^{1/p} τ(|b|^q)^{1/q}`.
    pub rhs: f64,
    pub pass: bool,
}

/// The Hölder chain for commuting diagonal `a, b` with the given eigenvalue
/// functions aligned on a common basis, so `μ_{ab}` is their pointwise product.
/// `constant` overrides `C_p`.
pub fn holder_check(
    a: &StepFunction,
    b: &StepFunction,
    p: f64,
    constant: Option<f64>,
    proc: &LimitProcedure,
    policy: &WindowPolicy,
) -> Result<HolderCheck> {
    let c = match constant {
        Some(c) => c,
        None => holder_constant(p)?,
    };
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Invalid(format!(
            "Hölder check needs 1 < p < ∞, got {p}"
        )));
    }
    let q = p / (p - 1.0);
    let trace = |mu: &StepFunction| dixmier_step(mu, &[], proc, policy).map(|r| r.value);
    let lhs = trace(&a.pointwise_product(b))?;
    let tau_a = trace(&a.power(p)?)?;
    let tau_b = trace(&b.power(q)?)?;
    let rhs = c * tau_a.max(0.0).powf(1.0 / p) * tau_b.max(0.0).powf(1.0 / q);
    Ok(HolderCheck {
        p,
        constant: c,
        lhs,
        tau_a,
        tau_b,
        rhs,
        pass: lhs <= rhs * (1.0 + HOLDER_SLACK),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub pair: usize,
    pub inequality: &'static str,
    pub index: usize,
    pub check: InequalityCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub pairs: usize,
    pub dimension: usize,
    pub checks: usize,
    pub min_slack: f64,
    pub failures: Vec<SweepFailure>,
}

/// Co-Weyl (`n = 0..4`) and Weyl (`N = 1..=dim`) checks on seeded random
/// pairs; pair `k` draws from stream `k` of the seeded generator.
pub fn random_sweep(seed: u64, pairs: usize, dimension: usize) -> Result<SweepReport> {
    let per_pair = (0..pairs)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let a = SmallMatrix::random(dimension, &mut rng)?;
            let b = SmallMatrix::random(dimension, &mut rng)?;
            let mut out = Vec::new();
            for n in 0..4 {
                out.push(("coweyl", n, coweyl_check(&a, &b, n)?));
            }
            for count in 1..=dimension {
                out.push(("weyl", count, weyl_check(&a, &b, count)?));
            }
            Ok((k, out))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut checks = 0;
    let mut min_slack = f64::INFINITY;
    let mut failures = Vec::new();
    for (pair, out) in per_pair {
        for (inequality, index, check) in out {
            checks += 1;
            min_slack = min_slack.min(check.slack());
            if !check.pass {
                failures.push(SweepFailure {
                    pair,
                    inequality,
                    index,
                    check,
                });
            }
        }
    }
    Ok(SweepReport {
        seed,
        pairs,
        dimension,
        checks,
        min_slack,
        failures,
    })
}

/// `μ(x) = ⌊x+1⌋^{-e}` on `[0, n)`, unit widths.
pub fn power_sequence(exponent: f64, n: usize) -> Result<StepFunction> {
    Ok(
        StepFunction::build((1..=n).map(|k| ((k as f64).powf(-exponent), 1.0)))?
            .with_truncation(true),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub sweep: SweepReport,
    pub constants: Vec<(f64, f64)>,
    pub constants_pass: bool,
    pub holder: Vec<(String, HolderCheck)>,
    pub pass: bool,
}

/// The whole appendix suite: random sweep, constants on a grid, and the
/// three diagonal Hölder cases on `depth` eigenvalues.
pub fn appendix_suite(seed: u64, depth: usize, policy: &WindowPolicy) -> Result<AppendixReport> {
    let sweep = random_sweep(seed, 200, 8)?;
    let c2 = holder_constant(2.0)?;
    let constants = [
        1.0,
        1.1,
        1.25,
        1.5,
        2.0,
        3.0,
        4.0,
        8.0,
        16.0,
        100.0,
        f64::INFINITY,
    ]
    .into_iter()
    .map(|p| Ok((p, holder_constant(p)?)))
    .collect::<Result<Vec<_>>>()?;
    let constants_pass = c2 == 2.0 && constants.iter().all(|&(_, c)| (1.0..=c2).contains(&c));
    let half = power_sequence(0.5, depth)?;
    let cesaro = LimitProcedure::cesaro_log();
    let holder = vec![
        (
            "equal pair n^-1/2, p = 2".to_string(),
            holder_check(&half, &half, 2.0, None, &cesaro, policy)?,
        ),
        (
            "n^-2/3 with n^-1/3, p = 3/2".to_string(),
            holder_check(
                &power_sequence(2.0 / 3.0, depth)?,
                &power_sequence(1.0 / 3.0, depth)?,
                1.5,
                None,
                &LimitProcedure::geometric(),
                policy,
            )?,
        ),
        (
            "n^-2/3 with n^-1/3, p = 3/2, constant 1, cesaro_log".to_string(),
            holder_check(
                &power_sequence(2.0 / 3.0, depth)?,
                &power_sequence(1.0 / 3.0, depth)?,
                1.5,
                Some(1.0),
                &cesaro,
                policy,
            )?,
        ),
    ];
    let pass = sweep.failures.is_empty() && constants_pass && holder.iter().all(|h| h.1.pass);
    Ok(AppendixReport {
        sweep,
        constants,
        constants_pass,
        holder,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_singular_values() {
        assert_eq!(
            singular_values(&SmallMatrix::diag(&[3.0, -4.0]).unwrap()).unwrap(),
            vec![4.0, 3.0]
        );
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let r = singular_values(&SmallMatrix::new(2, vec![c, -s, s, c]).unwrap()).unwrap();
        assert!(r.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn small_inequalities() {
        let e = SmallMatrix::diag(&[1.0, 0.0]).unwrap();
        let r = coweyl_check(&e, &e, 0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (1.0, 1.0, true));
        let i4 = SmallMatrix::identity(4).unwrap();
        let r = coweyl_check(&i4, &i4, 1).unwrap();
        assert_eq!((r.lhs, r.rhs), (2.0, 3.0));
        let h = SmallMatrix::diag(&[1.0, 0.5]).unwrap();
        let r = weyl_check(&h, &h, 1).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
    }

    #[test]
    fn constants() {
        assert_eq!(holder_constant(1.0).unwrap(), 1.0);
        assert_eq!(holder_constant(2.0).unwrap(), 2.0);
        assert!((holder_constant(4.0).unwrap() - (1.0 + 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert_eq!(holder_constant(f64::INFINITY).unwrap(), 1.0);
        assert!(holder_constant(0.5).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(SmallMatrix::new(65, vec![0.0; 65 * 65]).is_err());
        assert!(SmallMatrix::new(2, vec![0.0; 3]).is_err());
        let a = SmallMatrix::identity(2).unwrap();
        assert!(coweyl_check(&a, &SmallMatrix::identity(3).unwrap(), 0).is_err());
    }
}
