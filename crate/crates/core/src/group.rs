//! Finitely generated abelian groups in primary normal form.
//!
//! A group is stored as a free rank plus a multiset of prime-power torsion
//! orders, kept sorted by `(prime, exponent)`. That normal form is unique,
//! so equality of values is isomorphism of groups, and the derived `Ord`
//! gives a canonical way to deduplicate sets of candidate groups.
//!
//! Both classical presentations are available: [`FgAbGroup::display_primary`]
//! prints the primary decomposition and [`FgAbGroup::invariant_factors`]
//! recombines it into the divisibility chain d_1 | d_2 | ... .

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    /// A torsion coefficient was too large to factor by trial division with
    /// provable primality of the cofactor.
    #[error("torsion coefficient {0} is too large to factor exactly")]
    TorsionTooLarge(BigInt),
    #[error("matrix does not define a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("extension problem with free subgroup and torsion quotient is not supported")]
    ExtensionUnsupported,
    #[error("extension enumeration would visit {0} classes, over the configured cap {1}")]
    EnumerationTooLarge(BigInt, u64),
}

/// A finitely generated abelian group, `Z^free_rank (+) sum of Z/p^r`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FgAbGroup {
    free_rank: usize,
    /// Sorted `(p, r)` pairs, one per cyclic factor of order `p^r`.
    torsion: Vec<(u64, u32)>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/m` for `m > 1`, the trivial group for `m = 1`, `Z` for `m = 0`.
    pub fn cyclic(m: u64) -> Result<Self, AbelianError> {
        match m {
            0 => Ok(Self::free(1)),
            1 => Ok(Self::trivial()),
            _ => {
                let mut torsion = factor(&BigInt::from(m))?;
                torsion.sort_unstable();
                Ok(FgAbGroup {
                    free_rank: 0,
                    torsion,
                })
            }
        }
    }

    /// Build a group from prime-power factors directly.
    pub fn from_prime_powers(free_rank: usize, mut factors: Vec<(u64, u32)>) -> Self {
        factors.retain(|&(_, r)| r > 0);
        factors.sort_unstable();
        FgAbGroup {
            free_rank,
            torsion: factors,
        }
    }

    /// Group presented by a diagonal: `extra_free` free generators plus one
    /// cyclic factor per diagonal entry (entry 0 means a free generator,
    /// entry 1 contributes nothing).
    pub fn from_diagonal(diag: &[BigInt], extra_free: usize) -> Result<Self, AbelianError> {
        let mut free_rank = extra_free;
        let mut torsion = Vec::new();
        for d in diag {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                torsion.extend(factor(&d)?);
            }
        }
        torsion.sort_unstable();
        Ok(FgAbGroup { free_rank, torsion })
    }

    /// The cokernel of an integer relation matrix: Z^rows / column span.
    pub fn from_presentation(relations: &IntMatrix) -> Result<Self, AbelianError> {
        let snf = relations.smith_normal_form();
        let diag = snf.diagonal();
        Self::from_diagonal(&diag, relations.rows() - diag.len().min(relations.rows()))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[(u64, u32)] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        let mut n = BigInt::one();
        for &(p, r) in &self.torsion {
            n *= BigInt::from(p).pow(r);
        }
        n
    }

    /// Total order; `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        torsion.sort_unstable();
        FgAbGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion,
        }
    }

    pub fn direct_sum_all<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> FgAbGroup {
        groups
            .into_iter()
            .fold(FgAbGroup::trivial(), |acc, g| acc.direct_sum(g))
    }

    /// Number of canonical generators (free generators first, then one per
    /// torsion factor). Homomorphism matrices are indexed this way.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Orders of the canonical generators: 0 for the free ones, then p^r.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.free_rank];
        out.extend(self.torsion.iter().map(|&(p, r)| BigInt::from(p).pow(r)));
        out
    }

    /// Invariant factor decomposition: the unique chain d_1 | d_2 | ... | d_s
    /// with each d_i > 1, largest factor last.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &(p, r) in &self.torsion {
            by_prime.entry(p).or_default().push(r);
        }
        let depth = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![BigInt::one(); depth];
        for (&p, exps) in &by_prime {
            // exps ascending; the k-th largest exponent goes into the k-th
            // factor from the end so the chain divides.
            for (slot, &r) in exps.iter().rev().enumerate() {
                factors[depth - 1 - slot] *= BigInt::from(p).pow(r);
            }
        }
        factors
    }

    /// Tensor product over Z.
    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut torsion: Vec<(u64, u32)> = Vec::new();
        // free (x) free
        let free_rank = self.free_rank * other.free_rank;
        // free (x) torsion and torsion (x) free
        for &(p, r) in &other.torsion {
            torsion.extend(std::iter::repeat((p, r)).take(self.free_rank));
        }
        for &(p, r) in &self.torsion {
            torsion.extend(std::iter::repeat((p, r)).take(other.free_rank));
        }
        // Z/p^r (x) Z/q^s = Z/gcd
        for &(p, r) in &self.torsion {
            for &(q, s) in &other.torsion {
                if p == q {
                    torsion.push((p, r.min(s)));
                }
            }
        }
        torsion.sort_unstable();
        FgAbGroup { free_rank, torsion }
    }

    /// `Hom(self, Z/q)` for `q > 0`, or `Hom(self, Z)` for `q = 0`.
    pub fn hom_into_cyclic(&self, q: u64) -> Result<FgAbGroup, AbelianError> {
        if q == 0 {
            return Ok(FgAbGroup::free(self.free_rank));
        }
        let mut out = FgAbGroup::trivial();
        let zq = FgAbGroup::cyclic(q)?;
        for _ in 0..self.free_rank {
            out = out.direct_sum(&zq);
        }
        for &(p, r) in &self.torsion {
            out = out.direct_sum(&cyclic_gcd(p, r, q)?);
        }
        Ok(out)
    }

    /// `Ext(self, Z/q)` for `q > 0`, or `Ext(self, Z)` for `q = 0` (which is
    /// the torsion subgroup of `self`).
    pub fn ext_into_cyclic(&self, q: u64) -> Result<FgAbGroup, AbelianError> {
        if q == 0 {
            return Ok(FgAbGroup {
                free_rank: 0,
                torsion: self.torsion.clone(),
            });
        }
        let mut out = FgAbGroup::trivial();
        for &(p, r) in &self.torsion {
            out = out.direct_sum(&cyclic_gcd(p, r, q)?);
        }
        Ok(out)
    }

    /// Primary form, e.g. `Z² ⊕ (Z/2)² ⊕ Z/9`.
    pub fn display_primary(&self) -> String {
        if self.is_trivial() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(power_name("Z", self.free_rank));
        }
        let mut runs: Vec<((u64, u32), usize)> = Vec::new();
        for &t in &self.torsion {
            match runs.last_mut() {
                Some((prev, count)) if *prev == t => *count += 1,
                _ => runs.push((t, 1)),
            }
        }
        for ((p, r), count) in runs {
            let order = (p as u128).pow(r);
            parts.push(power_name(&format!("Z/{order}"), count));
        }
        parts.join(" ⊕ ")
    }

    /// Invariant factor form, e.g. `Z² ⊕ Z/2 ⊕ Z/18`.
    pub fn display_invariant(&self) -> String {
        if self.is_trivial() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(power_name("Z", self.free_rank));
        }
        for d in self.invariant_factors() {
            parts.push(format!("Z/{d}"));
        }
        parts.join(" ⊕ ")
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_primary())
    }
}

pub(crate) fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("digit") as usize])
        .collect()
}

/// `base` to the `count`: `Z` -> `Z³`, `Z/2` -> `(Z/2)³`.
pub(crate) fn power_name(base: &str, count: usize) -> String {
    if count == 1 {
        base.to_string()
    } else if base.contains('/') {
        format!("({base}){}", superscript(count))
    } else {
        format!("{base}{}", superscript(count))
    }
}

fn cyclic_gcd(p: u64, r: u32, q: u64) -> Result<FgAbGroup, AbelianError> {
    // gcd(p^r, q) = p^min(r, v_p(q))
    let mut v = 0u32;
    let mut m = q;
    while m % p == 0 {
        v += 1;
        m /= p;
    }
    let e = r.min(v);
    if e == 0 {
        Ok(FgAbGroup::trivial())
    } else {
        Ok(FgAbGroup::from_prime_powers(0, vec![(p, e)]))
    }
}

/// Trial-division factorization with a provable-primality fallback for the
/// cofactor. Anything too large to certify is reported as an error instead
/// of being silently mis-factored.
fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>, AbelianError> {
    const TRIAL_BOUND: u128 = 1 << 20;
    let mut m: u128 = n
        .try_into()
        .map_err(|_| AbelianError::TorsionTooLarge(n.clone()))?;
    if m == 0 {
        return Err(AbelianError::TorsionTooLarge(n.clone()));
    }
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= m && p < TRIAL_BOUND {
        if m % p == 0 {
            let mut r = 0u32;
            while m % p == 0 {
                m /= p;
                r += 1;
            }
            out.push((p as u64, r));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        // All factors below TRIAL_BOUND are removed, so a cofactor below
        // TRIAL_BOUND^2 is prime; anything bigger cannot be certified here.
        if m < TRIAL_BOUND * TRIAL_BOUND {
            out.push((m as u64, 1));
        } else {
            return Err(AbelianError::TorsionTooLarge(n.clone()));
        }
    }
    Ok(out)
}
