//! Exact evaluators for the explicit bound functions.
//!
//! Everything is computed in checked `u128`; overflow is an error.

use alloc::vec;

use crate::{Error, Result};

fn pow(base: u128, exp: u32, what: &'static str) -> Result<u128> {
    base.checked_pow(exp).ok_or(Error::Overflow(what))
}

fn add(a: u128, b: u128, what: &'static str) -> Result<u128> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

fn mul(a: u128, b: u128, what: &'static str) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

fn to_u32(x: u128, what: &'static str) -> Result<u32> {
    u32::try_from(x).map_err(|_| Error::Overflow(what))
}

/// `(6^n − 1)/5`, the size function of (m,f)-connectivity.
pub fn g(n: u32) -> Result<u128> {
    // 1 + 6 + ... + 6^(n−1), so values near the top of u128 still fit.
    (0..n).try_fold(0u128, |acc, _| add(mul(acc, 6, "g")?, 1, "g"))
}

/// `2^(k−1) + 1`.
pub fn k0(k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::precondition("k must be positive"));
    }
    add(pow(2, k - 1, "k0")?, 1, "k0")
}

/// `2^(k+k0−2) + 2k − 1` with `k0 = 2^(k−1) + 1`.
pub fn big_l(k: u32) -> Result<u128> {
    let k0 = to_u32(k0(k)?, "L")?;
    let e = k.checked_add(k0).ok_or(Error::Overflow("L"))? - 2;
    add(pow(2, e, "L")?, 2 * k as u128 - 1, "L")
}

/// `d_s = m·2^(m−s)` for `1 ≤ s ≤ m`.
pub fn d_s(m: u32, s: u32) -> Result<u128> {
    if s == 0 || s > m {
        return Err(Error::precondition("need 1 <= s <= m"));
    }
    mul(m as u128, pow(2, m - s, "d_s")?, "d_s")
}

pub fn binom2(x: u128) -> Result<u128> {
    Ok(mul(x, x.saturating_sub(1), "binomial")? / 2)
}

/// Sizes for extracting an `n × n` grid from a path constellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathChain {
    /// Number of hubs used, `n²`.
    pub m: u128,
    pub k3: u128,
    pub k2: u128,
    pub k1: u128,
    pub n_paths: u128,
    pub k_paths: u128,
}

pub fn path_chain(n: u32) -> Result<PathChain> {
    if n == 0 {
        return Err(Error::precondition("n must be positive"));
    }
    let m = mul(n as u128, n as u128, "m")?;
    let k3 = mul(m, pow(2, to_u32(m - 1, "k3")?, "k3")?, "k3")?;
    let k2 = add(k3, m - 1, "k2")?;
    let k1 = add(k2, m - 1, "k1")?;
    let n_paths = mul(m - 1, m, "n_paths")?;
    let k_paths = k1.max(binom2(m)?);
    Ok(PathChain { m, k3, k2, k1, n_paths, k_paths })
}

/// `max(n², C(n², 2))`.
pub fn k_cliques(n: u32) -> Result<u128> {
    let m = mul(n as u128, n as u128, "k_cliques")?;
    Ok(m.max(binom2(m)?))
}

/// Upper bound on the three-colour Ramsey number `R_3(n²)` from
/// `R(a,b,c) ≤ R(a−1,b,c) + R(a,b−1,c) + R(a,b,c−1) − 1`, `R(1,·,·) = 1`.
///
/// The exact value is unknown for every `n ≥ 2`; this is the number of hubs
/// that certainly suffices.
pub fn n_cliques_upper(n: u32) -> Result<u128> {
    let a = (n as usize).checked_mul(n as usize).ok_or(Error::Overflow("n_cliques"))?;
    ramsey3_upper(a)
}

pub fn ramsey3_upper(a: usize) -> Result<u128> {
    if a == 0 {
        return Err(Error::precondition("clique size must be positive"));
    }
    // Far beyond this the bound exceeds 2^128 anyway.
    if a > 100 {
        return Err(Error::Overflow("n_cliques"));
    }
    let idx = |x: usize, y: usize, z: usize| (x * (a + 1) + y) * (a + 1) + z;
    let mut r = vec![0u128; (a + 1) * (a + 1) * (a + 1)];
    for x in 1..=a {
        for y in 1..=a {
            for z in 1..=a {
                r[idx(x, y, z)] = if x == 1 || y == 1 || z == 1 {
                    1
                } else {
                    let s = add(r[idx(x - 1, y, z)], r[idx(x, y - 1, z)], "n_cliques")?;
                    add(s, r[idx(x, y, z - 1)], "n_cliques")? - 1
                };
            }
        }
    }
    Ok(r[idx(a, a, a)])
}
