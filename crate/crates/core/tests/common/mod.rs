//! Shared helpers for the integration suites: an independent brute-force
//! extension classifier and a random-descriptor generator.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cohomotopy_core::manifold::{ManifoldDescriptor, TorsionGroup};
use cohomotopy_core::splitting::{block_schema, AttachingVector};
use cohomotopy_core::FgAbGroup;

/// All partitions of `e` as weakly decreasing positive parts.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            acc.push(part);
            rec(rest - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, e.max(1), &mut Vec::new(), &mut out);
    out
}

fn prime_factorization(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Every isomorphism class of abelian groups of order `m`.
pub fn abelian_classes_of_order(m: u64) -> Vec<FgAbGroup> {
    let mut classes = vec![Vec::new()];
    for (p, e) in prime_factorization(m) {
        let mut next = Vec::new();
        for base in &classes {
            for partition in partitions(e) {
                let mut extended = base.clone();
                extended.extend(partition.iter().map(|&r| (p, r)));
                next.push(extended);
            }
        }
        classes = next;
    }
    classes
        .into_iter()
        .map(|factors| FgAbGroup::from_prime_powers(0, factors))
        .collect()
}

fn divisors(m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    out.sort_unstable();
    out
}

/// `#{g ∈ G : d·g = 0}` for a finite `G`; this count over all `d`
/// determines the isomorphism class.
fn killed_by(g: &FgAbGroup, d: u64) -> u64 {
    g.torsion()
        .iter()
        .map(|&(p, r)| {
            let mut v = 0;
            let mut m = d;
            while m % p == 0 {
                m /= p;
                v += 1;
            }
            p.pow(r.min(v))
        })
        .product()
}

/// Explicit model of a finite abelian group as a product of cyclic groups.
struct Model {
    orders: Vec<u64>,
}

type Element = Vec<u64>;

impl Model {
    fn of(g: &FgAbGroup) -> Model {
        Model {
            orders: g.torsion().iter().map(|&(p, r)| p.pow(r)).collect(),
        }
    }

    fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }

    fn smul(&self, s: u64, a: &Element) -> Element {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &m)| (x % m * (s % m)) % m)
            .collect()
    }

    fn elements(&self) -> Vec<Element> {
        let mut out = vec![Vec::new()];
        for &m in &self.orders {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for prefix in &out {
                for v in 0..m {
                    let mut e = prefix.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    fn order_of(&self, a: &Element) -> u64 {
        let mut s = 1;
        let mut cur = a.clone();
        while cur.iter().any(|&v| v != 0) {
            cur = self.add(&cur, a);
            s += 1;
        }
        s
    }

    /// `<H ∪ {g}>` for a subgroup `H` given as an element set.
    fn extend_subgroup(&self, h: &BTreeSet<Element>, g: &Element) -> BTreeSet<Element> {
        let mut out = BTreeSet::new();
        let ord = self.order_of(g);
        for base in h {
            let mut shifted = base.clone();
            for _ in 0..ord {
                out.insert(shifted.clone());
                shifted = self.add(&shifted, g);
            }
        }
        out
    }

    /// Every subgroup, as explicit element sets.
    fn subgroups(&self) -> BTreeSet<BTreeSet<Element>> {
        let elements = self.elements();
        let trivial: BTreeSet<Element> = BTreeSet::from([self.zero()]);
        let mut known = BTreeSet::from([trivial.clone()]);
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in &elements {
                if h.contains(g) {
                    continue;
                }
                let bigger = self.extend_subgroup(&h, g);
                if known.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        known
    }

    /// Isomorphism class of an explicit subgroup via order counting.
    fn class_of_subgroup(&self, s: &BTreeSet<Element>) -> FgAbGroup {
        let order = s.len() as u64;
        let candidates = abelian_classes_of_order(order);
        let counts: Vec<(u64, u64)> = divisors(order)
            .into_iter()
            .map(|d| {
                let killed = s
                    .iter()
                    .filter(|x| self.smul(d, x).iter().all(|&v| v == 0))
                    .count() as u64;
                (d, killed)
            })
            .collect();
        candidates
            .into_iter()
            .find(|g| counts.iter().all(|&(d, k)| killed_by(g, d) == k))
            .expect("order counts match some class")
    }

    /// Isomorphism class of the quotient by an explicit subgroup.
    fn class_of_quotient(&self, s: &BTreeSet<Element>, ambient_order: u64) -> FgAbGroup {
        let order = ambient_order / s.len() as u64;
        let candidates = abelian_classes_of_order(order);
        let elements = self.elements();
        let counts: Vec<(u64, u64)> = divisors(order)
            .into_iter()
            .map(|d| {
                let killed = elements
                    .iter()
                    .filter(|x| s.contains(&self.smul(d, x)))
                    .count() as u64
                    / s.len() as u64;
                (d, killed)
            })
            .collect();
        candidates
            .into_iter()
            .find(|g| counts.iter().all(|&(d, k)| killed_by(g, d) == k))
            .expect("order counts match some class")
    }
}

/// For every abelian group `E` of order up to `max_order`: the set of
/// `(subgroup class, quotient class)` pairs realized inside `E`.
pub struct ExtensionTable {
    realized: BTreeMap<FgAbGroup, BTreeSet<(FgAbGroup, FgAbGroup)>>,
}

impl ExtensionTable {
    pub fn build(max_order: u64) -> ExtensionTable {
        let mut realized = BTreeMap::new();
        for order in 1..=max_order {
            for e in abelian_classes_of_order(order) {
                let model = Model::of(&e);
                let mut pairs = BTreeSet::new();
                for s in model.subgroups() {
                    let sub = model.class_of_subgroup(&s);
                    let quot = model.class_of_quotient(&s, order);
                    pairs.insert((sub, quot));
                }
                realized.insert(e, pairs);
            }
        }
        ExtensionTable { realized }
    }

    /// Brute-force middle classification: every `E` of order
    /// `|sub|·|quot|` containing `sub` with quotient `quot`.
    pub fn middles(&self, sub: &FgAbGroup, quot: &FgAbGroup) -> BTreeSet<FgAbGroup> {
        let key = (sub.clone(), quot.clone());
        self.realized
            .iter()
            .filter(|(e, pairs)| {
                e.torsion_order() == sub.torsion_order() * quot.torsion_order()
                    && pairs.contains(&key)
            })
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// All finite classes of order at most `max_order` in the table.
    pub fn classes(&self) -> impl Iterator<Item = &FgAbGroup> {
        self.realized.keys()
    }
}

/// Odd torsion pools the random descriptors draw from.
const TORSION_POOL: &[(u64, u32)] = &[(3, 1), (3, 2), (5, 1), (7, 1), (3, 3)];

/// A uniformly random valid descriptor with the given `n`. Shapes stay
/// small (`l, k ≤ 4`, up to three torsion factors); all attaching entries
/// are uniform in their block modulus.
pub fn random_descriptor(n: u32, rng: &mut ChaCha8Rng) -> ManifoldDescriptor {
    random_descriptor_with(n, rng, 4)
}

/// As [`random_descriptor`], but capping the paired-block count `c` (the
/// exact paired-block canonicalizer is exponential in it).
pub fn random_descriptor_with(n: u32, rng: &mut ChaCha8Rng, max_c: u32) -> ManifoldDescriptor {
    let l = rng.gen_range(0..=4u32);
    let c = rng.gen_range(0..=l.min(max_c));
    let k = if n == 2 {
        2 * rng.gen_range(0..=2u32)
    } else {
        rng.gen_range(0..=4)
    };
    let mut torsion = Vec::new();
    for _ in 0..rng.gen_range(0..=3usize) {
        torsion.push(TORSION_POOL[rng.gen_range(0..TORSION_POOL.len())]);
    }
    let mut d = ManifoldDescriptor {
        n,
        l,
        k,
        torsion: TorsionGroup::new(torsion),
        spin: true,
        c,
        attach: AttachingVector::default(),
        steenrod: None,
    };
    let schema = block_schema(&d);
    d.attach = random_vector(&schema, rng);
    if n == 2 {
        d.spin = d.attach.y.iter().all(|&v| v == 0);
    } else {
        d.spin = rng.gen_bool(0.5);
    }
    let violations = d.validate();
    assert!(
        violations.is_empty(),
        "generator broke validity: {violations:?}"
    );
    d
}

/// A uniformly random attaching vector for the given schema.
pub fn random_vector(
    schema: &cohomotopy_core::splitting::BlockSchema,
    rng: &mut ChaCha8Rng,
) -> AttachingVector {
    let fill = |(len, modulus): (usize, u64), rng: &mut ChaCha8Rng| -> Vec<u64> {
        (0..len)
            .map(|_| {
                if modulus > 1 {
                    rng.gen_range(0..modulus)
                } else {
                    0
                }
            })
            .collect()
    };
    AttachingVector {
        x: fill(schema.x, rng),
        y: fill(schema.y, rng),
        z: fill(schema.z, rng),
        z2: fill(schema.z2, rng),
        u: fill(schema.u, rng),
        w: fill(schema.w, rng),
    }
}
