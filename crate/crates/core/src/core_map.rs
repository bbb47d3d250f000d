//! Exact Syracuse arithmetic on 128-bit words.
//!
//! Every operation is checked: a value that would not fit in a `u128` is
//! reported as [`Error::Overflow`] naming the start value being processed.
//! The [`crate::wide`] module carries the same maps over arbitrary-precision
//! integers for inputs beyond that range.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive odd integer, an element of the domain of the Syracuse map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u128", into = "u128")]
pub struct OddInt(u128);

impl OddInt {
    pub const ONE: OddInt = OddInt(1);

    pub fn new(value: u128) -> Result<Self> {
        if value % 2 == 1 {
            Ok(OddInt(value))
        } else {
            Err(Error::NotOdd(value))
        }
    }

    #[inline]
    pub fn get(self) -> u128 {
        self.0
    }
}

impl TryFrom<u128> for OddInt {
    type Error = Error;

    fn try_from(value: u128) -> Result<Self> {
        OddInt::new(value)
    }
}

impl From<OddInt> for u128 {
    fn from(m: OddInt) -> u128 {
        m.0
    }
}

impl fmt::Display for OddInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `3m + 1` with overflow reported against `m`.
#[inline]
fn three_m_plus_one(m: u128) -> Result<u128> {
    m.checked_mul(3)
        .and_then(|t| t.checked_add(1))
        .ok_or(Error::Overflow { m })
}

/// One application of the Syracuse map: the odd part of `3m + 1` together
/// with the exponent of the power of two that was removed.
#[inline]
pub fn syracuse_step(m: OddInt) -> Result<(OddInt, u32)> {
    let (next, e) = syracuse_raw(m.0)?;
    Ok((OddInt(next), e))
}

/// Unwrapped form of [`syracuse_step`] for sweep inner loops. `m` must be odd.
#[inline]
pub(crate) fn syracuse_raw(m: u128) -> Result<(u128, u32)> {
    debug_assert!(m % 2 == 1);
    let t = three_m_plus_one(m)?;
    let e = t.trailing_zeros();
    Ok((t >> e, e))
}

/// Writes `m, S(m), ..., S^{len-1}(m)` into `out`, reporting overflow
/// against the start value.
#[inline]
pub(crate) fn fill_iterates(m: u128, out: &mut [u128]) -> Result<()> {
    let mut x = m;
    let last = out.len().saturating_sub(1);
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = x;
        if i < last {
            x = syracuse_raw(x).map_err(|_| Error::Overflow { m })?.0;
        }
    }
    Ok(())
}

/// The first `len` iterates of a start value and the valuations between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    start: OddInt,
    iterates: Vec<OddInt>,
    valuations: Vec<u32>,
}

impl Trajectory {
    pub fn start(&self) -> OddInt {
        self.start
    }

    /// `[S^0(m), ..., S^{n-1}(m)]`.
    pub fn iterates(&self) -> &[OddInt] {
        &self.iterates
    }

    /// `valuations()[j - 1]` is the exponent `e` with
    /// `2^e * S^j(m) = 3 * S^{j-1}(m) + 1`.
    pub fn valuations(&self) -> &[u32] {
        &self.valuations
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    /// Iterates as plain integers.
    pub fn values(&self) -> Vec<u128> {
        self.iterates.iter().map(|m| m.get()).collect()
    }
}

pub fn trajectory(m: OddInt, n: usize) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::InvalidArgument("trajectory length must be at least 1".into()));
    }
    let mut iterates = Vec::with_capacity(n);
    let mut valuations = Vec::with_capacity(n - 1);
    iterates.push(m);
    let mut x = m;
    for _ in 1..n {
        let (next, e) = syracuse_step(x).map_err(|_| Error::Overflow { m: m.get() })?;
        iterates.push(next);
        valuations.push(e);
        x = next;
    }
    Ok(Trajectory {
        start: m,
        iterates,
        valuations,
    })
}

fn require_positive(m: u128) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArgument("Collatz maps are defined on positive integers".into()))
    } else {
        Ok(())
    }
}

/// `C(m) = 3m + 1` for odd `m`, `m / 2` for even `m`.
pub fn collatz_step(m: u128) -> Result<u128> {
    require_positive(m)?;
    if m % 2 == 1 {
        three_m_plus_one(m)
    } else {
        Ok(m / 2)
    }
}

/// `C_1(m) = (3m + 1) / 2` for odd `m`, `m / 2` for even `m`.
pub fn collatz1_step(m: u128) -> Result<u128> {
    require_positive(m)?;
    if m % 2 == 1 {
        // (3m + 1) / 2 = m + (m + 1) / 2, which stays in range one bit longer.
        m.checked_add(m / 2 + 1).ok_or(Error::Overflow { m })
    } else {
        Ok(m / 2)
    }
}

/// Largest `k` for which `r_k` fits in a `u128`.
pub const MAX_R_K: u32 = 62;

/// `r_k = 1 + 4 + ... + 4^k = (4^{k+1} - 1) / 3`, the start values with `S(r_k) = 1`.
pub fn r_k(k: u32) -> Result<OddInt> {
    if k == 0 {
        return Err(Error::InvalidArgument("r_k is indexed from k = 1".into()));
    }
    if k > MAX_R_K {
        return Err(Error::Overflow { m: u128::from(k) });
    }
    Ok(OddInt(r_k_raw(k)))
}

/// `r_k` for `0 <= k <= MAX_R_K`; `r_0 = 1`.
#[inline]
pub(crate) fn r_k_raw(k: u32) -> u128 {
    debug_assert!(k <= MAX_R_K);
    // 0b0101...01 with k + 1 ones.
    let ones = 2 * (k + 1);
    let mask = if ones >= 128 { u128::MAX } else { (1u128 << ones) - 1 };
    mask / 3
}

/// Returns `Some(k)` when `m = r_k` for some `k >= 1`. `m = 1` is not a member.
pub fn is_in_r0(m: OddInt) -> Option<u32> {
    let v = m.get();
    if v < 5 {
        return None;
    }
    // r_k has bit length 2k + 1.
    let bits = 128 - v.leading_zeros();
    if bits % 2 == 0 {
        return None;
    }
    let k = (bits - 1) / 2;
    (k <= MAX_R_K && r_k_raw(k) == v).then_some(k)
}
