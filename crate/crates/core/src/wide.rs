//! The same maps over arbitrary-precision integers, for start values or
//! families that do not fit in 128 bits.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn require_odd(m: &BigUint) -> Result<()> {
    if m.bit(0) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{m} is not a positive odd integer")))
    }
}

/// Odd part of `3m + 1` and the removed power of two.
pub fn syracuse_step_big(m: &BigUint) -> Result<(BigUint, u64)> {
    require_odd(m)?;
    let t: BigUint = m * 3u32 + 1u32;
    // t is even and nonzero, so trailing_zeros is Some.
    let e = t.trailing_zeros().unwrap_or(0);
    Ok((t >> e, e))
}

pub fn trajectory_big(m: &BigUint, n: usize) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("trajectory length must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n);
    out.push(m.clone());
    for _ in 1..n {
        let next = syracuse_step_big(out.last().unwrap())?.0;
        out.push(next);
    }
    Ok(out)
}

/// `(4^{k+1} - 1) / 3` for any `k >= 1`.
pub fn r_k_big(k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("r_k is indexed from k = 1".into()));
    }
    let pow: BigUint = BigUint::one() << (2 * (k + 1));
    Ok((pow - 1u32) / 3u32)
}

pub fn is_in_r0_big(m: &BigUint) -> Option<u64> {
    if m.is_zero() {
        return None;
    }
    let bits = m.bits();
    if bits < 3 || bits % 2 == 0 {
        return None;
    }
    let k = (bits - 1) / 2;
    let r = r_k_big(k).ok()?;
    (&r == m).then_some(k)
}
