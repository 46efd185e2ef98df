//! Group extension enumeration.
//!
//! Given groups S and Q, [`middle_groups`] lists every isomorphism class of
//! abelian E fitting into 0 -> S -> E -> Q -> 0. Extension classes live in
//! Ext(Q, S); factoring Q into prime-power cyclic pieces makes that group a
//! product of cyclic pieces Z/gcd(q_i, m_j), and one presentation per class
//! tuple is pushed through Smith reduction to get the middle group. Distinct
//! classes can give isomorphic groups, so results land in a set.
//!
//! The one refused shape is S with free rank against Q with torsion: that
//! configuration is out of contract here (callers in this crate never need
//! it and the calculus upstream always splits a free complement off first).

use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeSet;

use crate::group::{AbelianError, FgAbGroup};
use crate::matrix::IntMatrix;

/// Abort enumeration past this many extension classes.
const CLASS_CAP: u64 = 1 << 22;

/// All isomorphism classes of middle groups of extensions of `quot` by `sub`.
pub fn middle_groups(
    sub: &FgAbGroup,
    quot: &FgAbGroup,
) -> Result<BTreeSet<FgAbGroup>, AbelianError> {
    if sub.free_rank() > 0 && !quot.torsion().is_empty() {
        return Err(AbelianError::ExtensionUnsupported);
    }
    // Ext(Z^k, -) vanishes, so the free part of the quotient splits off of
    // every middle group.
    let free_part = FgAbGroup::free(quot.free_rank());
    if quot.torsion().is_empty() {
        let mut out = BTreeSet::new();
        out.insert(sub.direct_sum(&free_part));
        return Ok(out);
    }

    // Here sub is pure torsion. Count classes before enumerating them.
    let sub_orders: Vec<u64> = sub
        .torsion()
        .iter()
        .map(|&(p, r)| p.pow(r)) // safe: orders certified by factoring
        .collect();
    let quot_orders: Vec<u64> = quot.torsion().iter().map(|&(p, r)| p.pow(r)).collect();
    let mut ranges: Vec<u64> = Vec::new();
    let mut total = BigInt::one();
    for &q in &quot_orders {
        for &m in &sub_orders {
            let g = gcd(q, m);
            ranges.push(g);
            total *= g;
        }
    }
    if total > BigInt::from(CLASS_CAP) {
        return Err(AbelianError::EnumerationTooLarge(total, CLASS_CAP));
    }

    let t = sub_orders.len();
    let s = quot_orders.len();
    let mut out = BTreeSet::new();
    // Mixed-radix enumeration of class tuples c[i][j] in Z/gcd(q_i, m_j).
    let mut tuple = vec![0u64; ranges.len()];
    loop {
        // Presentation of the middle group on generators
        // (e_1..e_t from sub, g_1..g_s lifting quot):
        //   m_j e_j = 0,    q_i g_i = sum_j c[i][j] e_j.
        let mut rel = IntMatrix::zeros(t + s, t + s);
        for (j, &m) in sub_orders.iter().enumerate() {
            rel.set(j, j, BigInt::from(m));
        }
        for (i, &q) in quot_orders.iter().enumerate() {
            rel.set(t + i, t + i, BigInt::from(q));
            for j in 0..t {
                let c = tuple[i * t + j];
                if c != 0 {
                    rel.set(j, t + i, BigInt::from(-(c as i64)));
                }
            }
        }
        out.insert(FgAbGroup::from_presentation(&rel)?.direct_sum(&free_part));

        // Advance the mixed-radix counter.
        let mut pos = 0;
        loop {
            if pos == tuple.len() {
                return Ok(out);
            }
            tuple[pos] += 1;
            if tuple[pos] < ranges[pos] {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(m: u64) -> FgAbGroup {
        FgAbGroup::cyclic(m).unwrap()
    }

    fn set(groups: &[FgAbGroup]) -> BTreeSet<FgAbGroup> {
        groups.iter().cloned().collect()
    }

    #[test]
    fn z2_by_z2() {
        let got = middle_groups(&zn(2), &zn(2)).unwrap();
        assert_eq!(got, set(&[zn(4), zn(2).direct_sum(&zn(2))]));
    }

    #[test]
    fn z2_by_z2_squared() {
        let got = middle_groups(&zn(2), &zn(2).direct_sum(&zn(2))).unwrap();
        let z2 = zn(2);
        assert_eq!(
            got,
            set(&[z2.direct_sum(&z2).direct_sum(&z2), zn(4).direct_sum(&z2),])
        );
    }

    #[test]
    fn z2_by_z_is_forced_split() {
        let got = middle_groups(&zn(2), &FgAbGroup::free(1)).unwrap();
        assert_eq!(got, set(&[FgAbGroup::free(1).direct_sum(&zn(2))]));
    }

    #[test]
    fn coprime_orders_always_split() {
        let got = middle_groups(&zn(3), &zn(4)).unwrap();
        assert_eq!(got, set(&[zn(12)]));
    }

    #[test]
    fn free_sub_torsion_quotient_is_refused() {
        assert!(matches!(
            middle_groups(&FgAbGroup::free(1), &zn(2)),
            Err(AbelianError::ExtensionUnsupported)
        ));
        // Free sub against free quotient is fine.
        let got = middle_groups(&FgAbGroup::free(1), &FgAbGroup::free(2)).unwrap();
        assert_eq!(got, set(&[FgAbGroup::free(3)]));
    }

    #[test]
    fn z4_by_z2_gives_z8_and_split() {
        // Ext(Z/2, Z/4) = Z/2: the split class and one nonsplit class.
        let got = middle_groups(&zn(4), &zn(2)).unwrap();
        assert_eq!(got, set(&[zn(8), zn(4).direct_sum(&zn(2))]));
    }

    #[test]
    fn mixed_quotient_keeps_free_complement() {
        let quot = FgAbGroup::free(2).direct_sum(&zn(2));
        let got = middle_groups(&zn(2), &quot).unwrap();
        let z2f = FgAbGroup::free(2);
        assert_eq!(
            got,
            set(&[
                z2f.direct_sum(&zn(2)).direct_sum(&zn(2)),
                z2f.direct_sum(&zn(4)),
            ])
        );
    }
}
