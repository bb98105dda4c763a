//! Isoperimetric function classes and the composition maximum `g`.
//!
//! `g(n)` is the largest value of `f(n_1) + ... + f(n_s)` over all ways of
//! writing `n` as an ordered sum of positive integers. It is computed by
//! dynamic programming and never assumed to coincide with `f`, although for
//! polynomials of degree at least one and for `2^n` the two agree.

use std::fmt;

use thiserror::Error;

/// All arithmetic stays within 63 bits; anything larger is an error rather
/// than a wraparound.
const MAX_MAGNITUDE: u64 = i64::MAX as u64;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum IsoError {
    #[error("value exceeds the 63-bit magnitude limit")]
    Overflow,
    #[error("no class descriptor exists for this variant")]
    UnsupportedClass,
}

/// An evaluable isoperimetric function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionClass {
    /// `n^k` for `k >= 1`.
    Polynomial(u32),
    /// `2^n`.
    Exponential,
    /// Explicit values for `n = 1..=N` with `f(0) = 0`; beyond the table the
    /// function continues as `f(N) + (n - N)^2`.
    Tabulated(Vec<u64>),
    /// Pointwise maximum of heterogeneous classes. Only produced by
    /// [`FunctionClass::pointwise_max`] when the inputs do not collapse into
    /// a single variant.
    Max(Vec<FunctionClass>),
}

fn checked_add(a: u64, b: u64) -> Result<u64, IsoError> {
    match a.checked_add(b) {
        Some(v) if v <= MAX_MAGNITUDE => Ok(v),
        _ => Err(IsoError::Overflow),
    }
}

fn checked_pow(base: u64, exp: u64) -> Result<u64, IsoError> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) if v <= MAX_MAGNITUDE => v,
            _ => return Err(IsoError::Overflow),
        };
    }
    Ok(acc)
}

impl FunctionClass {
    /// Evaluates the function at `n`.
    pub fn eval(&self, n: u64) -> Result<u64, IsoError> {
        match self {
            FunctionClass::Polynomial(k) => checked_pow(n, u64::from(*k)),
            FunctionClass::Exponential => checked_pow(2, n),
            FunctionClass::Tabulated(values) => {
                if n == 0 {
                    return Ok(0);
                }
                let len = values.len() as u64;
                if n <= len {
                    Ok(values[(n - 1) as usize])
                } else {
                    let last = values.last().copied().unwrap_or(0);
                    let excess = n - len;
                    checked_add(last, checked_pow(excess, 2)?)
                }
            }
            FunctionClass::Max(classes) => {
                let mut best = 0;
                for c in classes {
                    best = best.max(c.eval(n)?);
                }
                Ok(best)
            }
        }
    }

    /// Pointwise maximum of a collection of classes, collapsed to a single
    /// variant whenever that is exact: polynomials collapse to the largest
    /// degree, and a homogeneous list collapses to its common member.
    pub fn pointwise_max(classes: Vec<FunctionClass>) -> FunctionClass {
        let mut flat = Vec::new();
        for c in classes {
            match c {
                FunctionClass::Max(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.dedup();
        if flat.iter().all(|c| matches!(c, FunctionClass::Polynomial(_))) && !flat.is_empty() {
            let k = flat
                .iter()
                .map(|c| match c {
                    FunctionClass::Polynomial(k) => *k,
                    _ => unreachable!(),
                })
                .max()
                .unwrap();
            return FunctionClass::Polynomial(k);
        }
        if flat.iter().all(|c| *c == FunctionClass::Exponential) && !flat.is_empty() {
            return FunctionClass::Exponential;
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        FunctionClass::Max(flat)
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionClass::Polynomial(k) => write!(f, "poly {k}"),
            FunctionClass::Exponential => write!(f, "exp"),
            FunctionClass::Tabulated(values) => {
                write!(f, "table")?;
                for v in values {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
            FunctionClass::Max(classes) => {
                write!(f, "max(")?;
                for (i, c) in classes.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Memoized table of `g` values for a fixed source function.
#[derive(Debug, Clone)]
pub struct GTable {
    source: FunctionClass,
    values: Vec<u64>,
}

impl GTable {
    /// Fills `g(0..=n_max)` by the recurrence
    /// `g(0) = 0`, `g(n) = max(f(n), max_{1<=m<n} f(m) + g(n-m))`.
    pub fn build(source: &FunctionClass, n_max: u64) -> Result<GTable, IsoError> {
        let n_max = n_max as usize;
        let mut values = vec![0u64; n_max + 1];
        for n in 1..=n_max {
            let mut best = source.eval(n as u64)?;
            for m in 1..n {
                best = best.max(checked_add(source.eval(m as u64)?, values[n - m])?);
            }
            values[n] = best;
        }
        Ok(GTable {
            source: source.clone(),
            values,
        })
    }

    pub fn source(&self) -> &FunctionClass {
        &self.source
    }

    pub fn g(&self, n: u64) -> Option<u64> {
        self.values.get(n as usize).copied()
    }

    pub fn max_n(&self) -> u64 {
        (self.values.len() - 1) as u64
    }
}

/// Evaluates `f` at `n`.
pub fn eval_f(f: &FunctionClass, n: u64) -> Result<u64, IsoError> {
    f.eval(n)
}

/// The exact maximum of `f(n_1) + ... + f(n_s)` over all compositions of `n`.
pub fn g_of(f: &FunctionClass, n: u64) -> Result<u64, IsoError> {
    let table = GTable::build(f, n)?;
    Ok(table.g(n).unwrap())
}

/// The area bound `g(n) + n^2`.
pub fn iso_bound(f: &FunctionClass, n: u64) -> Result<u64, IsoError> {
    checked_add(g_of(f, n)?, checked_pow(n, 2)?)
}

/// Class descriptor of `g` for the closed-form variants.
///
/// For `Polynomial(k)` and `Exponential` the composition maximum lies in the
/// same class; this is validated by sweeping the table against the closed
/// form (up to overflow) before the descriptor is returned. Tabulated and
/// mixed inputs have no descriptor.
pub fn class_of_g(f: &FunctionClass) -> Result<FunctionClass, IsoError> {
    let limit: u64 = match f {
        FunctionClass::Polynomial(_) => 64,
        FunctionClass::Exponential => 40,
        _ => return Err(IsoError::UnsupportedClass),
    };
    let mut n = 1;
    while n <= limit {
        match f.eval(n) {
            Ok(direct) => {
                let g = g_of(f, n)?;
                assert_eq!(
                    g, direct,
                    "composition maximum diverged from the closed form at n={n}"
                );
            }
            Err(IsoError::Overflow) => break,
            Err(e) => return Err(e),
        }
        n += 1;
    }
    Ok(f.clone())
}
