//! Small shared helpers: guarded enumeration limits and exact binomials.

use crate::error::{Error, Result};

/// Default guards, overridable through the FURST_MAX_GUARD environment
/// variable (a single integer applied as a multiplier floor to every guard).
pub fn guard_limit(default: u128) -> u128 {
    match std::env::var("FURST_MAX_GUARD") {
        Ok(v) => v.parse::<u128>().unwrap_or(default).max(default),
        Err(_) => default,
    }
}

pub fn check_guard(actual: u128, default_limit: u128, what: &str) -> Result<()> {
    let limit = guard_limit(default_limit);
    if actual > limit {
        Err(Error::GuardExceeded(format!(
            "{what}: {actual} exceeds limit {limit}"
        )))
    } else {
        Ok(())
    }
}

/// Exact binomial coefficient; panics on overflow (desk-scale inputs only).
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow");
        acc /= (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient modulo a prime via Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = (acc as u128 * (binom(nd, kd) % p as u128) % p as u128) as u64;
        n /= p;
        k /= p;
    }
    acc
}

/// Generalized binomial C(r, a) = r(r-1)...(r-a+1)/a! for real r.
pub fn gen_binom(r: f64, a: u64) -> f64 {
    let mut acc = 1.0;
    for i in 0..a {
        acc *= (r - i as f64) / (i as f64 + 1.0);
    }
    acc
}
